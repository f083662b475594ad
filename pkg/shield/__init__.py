"""
Shield: generative anti-forensic attacks and collaborative-learning defense.

Desk-scale pipeline for attacking audio deepfake detectors with trained
generators and defending them by pairing every input with a defense
generator's reconstruction.
"""

__version__ = "0.1.0"
