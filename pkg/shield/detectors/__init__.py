"""
Toy audio deepfake detectors used as attack surrogates and victims.
"""

from shield.detectors.detector import (
    DetectorModel,
    accuracy,
    build_detector,
    detect,
    label_targets,
    predict_real,
)
from shield.detectors.networks import DetectorConfig
from shield.detectors.trainer import detector_loss, train_detector

__all__ = [
    "DetectorConfig",
    "DetectorModel",
    "accuracy",
    "build_detector",
    "detect",
    "detector_loss",
    "label_targets",
    "predict_real",
    "train_detector",
]
