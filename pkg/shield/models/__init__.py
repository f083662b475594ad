"""
Shield data models.

This package contains the Pydantic models shared by the audio, detector,
attack, defense and evaluation layers.
"""

# Attack models
from shield.models.attack import AttackLossReport, DiscriminatorLossForm, LossWeights

# Clip models
from shield.models.clip import (
    ClipLabel,
    GenId,
    LabeledClip,
    Manifest,
    ManifestEntry,
    Waveform,
)

# Pair models
from shield.models.pair import (
    ConcatAxis,
    EmbeddingVec,
    PairedClip,
    PairLabel,
    TripletBatch,
)

# Report models
from shield.models.report import (
    DefenseSetting,
    EvalGrid,
    EvalReport,
    ReportMetadata,
    ReportRow,
)

# Run configuration
from shield.models.run_config import RunConfig

# Spectrogram models
from shield.models.spectrogram import Spectrogram

# Training models
from shield.models.training import DetectorArch, EpochLoss, TrainConfig

__all__ = [
    # Attack models
    "AttackLossReport",
    "DiscriminatorLossForm",
    "LossWeights",
    # Clip models
    "ClipLabel",
    "GenId",
    "LabeledClip",
    "Manifest",
    "ManifestEntry",
    "Waveform",
    # Pair models
    "ConcatAxis",
    "EmbeddingVec",
    "PairLabel",
    "PairedClip",
    "TripletBatch",
    # Report models
    "DefenseSetting",
    "EvalGrid",
    "EvalReport",
    "ReportMetadata",
    "ReportRow",
    # Run configuration
    "RunConfig",
    # Spectrogram models
    "Spectrogram",
    # Training models
    "DetectorArch",
    "EpochLoss",
    "TrainConfig",
]
