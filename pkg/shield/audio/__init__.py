"""
Audio core: synthetic corpora, manifests and waveform normalization.
"""

from shield.audio.corpus import (
    balance_classes,
    by_label,
    label_counts,
    merge_corpora,
    synthetic_corpus,
)
from shield.audio.manifest import load_manifest, parse_manifest, write_corpus
from shield.audio.normalize import fit_length, peak_normalize, validate_waveform
from shield.audio.synth import quantize, synth_fake, synth_real

__all__ = [
    "balance_classes",
    "by_label",
    "fit_length",
    "label_counts",
    "load_manifest",
    "merge_corpora",
    "parse_manifest",
    "peak_normalize",
    "quantize",
    "synth_fake",
    "synth_real",
    "synthetic_corpus",
    "validate_waveform",
    "write_corpus",
]
