"""
Detector model wrapper and inference.

Class 1 is real, class 0 is fake/attacked, for every detector.
"""

from collections.abc import Sequence
from typing import Optional

import numpy as np
import torch
from torch import nn

from shield.config import FAKE_CLASS, REAL_CLASS
from shield.detectors.networks import DetectorConfig, build_network
from shield.exceptions import ShapeError
from shield.models.clip import ClipLabel, LabeledClip, Waveform
from shield.models.training import DetectorArch, EpochLoss
from shield.utils.modules import (
    module_dtype,
    parameter_count,
    parameter_vector,
    waveforms_to_tensor,
)
from shield.utils.seeding import torch_seed

# Desk-scale bound on detector size
MAX_DETECTOR_PARAMETERS = 100_000

# Inference batch size
PREDICT_BATCH = 64


class DetectorModel(nn.Module):
    """
    A toy audio deepfake detector.

    Wraps the network with its architecture id, seed and layer
    configuration so that a checkpoint can rebuild it exactly.
    """

    def __init__(self, arch: DetectorArch, seed: int, config: DetectorConfig):
        super().__init__()
        self.arch = DetectorArch(arch)
        self.seed = seed
        self.config = config
        self.net = build_network(self.arch, config)
        self.trained = False
        self.history: list[EpochLoss] = []

    @property
    def clip_length(self) -> int:
        return self.config.clip_length

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        """(batch, T) waveforms -> (batch, 2) logits."""
        return self.net(x)

    def class_probabilities(self, x: torch.Tensor) -> torch.Tensor:
        """(batch, 2) softmax probabilities."""
        return torch.softmax(self.forward(x), dim=-1)

    def real_probability(self, x: torch.Tensor) -> torch.Tensor:
        """(batch,) probability of the real class."""
        return self.class_probabilities(x)[:, REAL_CLASS]

    def parameter_vector(self) -> np.ndarray:
        return parameter_vector(self)

    def parameter_count(self) -> int:
        return parameter_count(self)


def build_detector(
    arch: DetectorArch, seed: int, config: Optional[DetectorConfig] = None
) -> DetectorModel:
    """
    Build a detector with deterministic initialization.

    Args:
        arch: raw_cnn or spec_cnn
        seed: Initialization seed
        config: Layer configuration, defaults per architecture

    Returns:
        Untrained detector
    """
    arch = DetectorArch(arch)
    config = config or DetectorConfig.default(arch)
    with torch_seed(seed):
        model = DetectorModel(arch, seed, config)
    if model.parameter_count() > MAX_DETECTOR_PARAMETERS:
        raise ValueError(
            f"{arch} has {model.parameter_count()} parameters, "
            f"limit is {MAX_DETECTOR_PARAMETERS}"
        )
    return model.eval()


def label_targets(clips: Sequence[LabeledClip]) -> torch.Tensor:
    """real -> 1, fake/attacked -> 0."""
    return torch.tensor(
        [REAL_CLASS if clip.label == ClipLabel.REAL else FAKE_CLASS for clip in clips],
        dtype=torch.long,
    )


def _check_lengths(model: DetectorModel, waveforms: Sequence[Waveform]) -> None:
    for w in waveforms:
        if w.length != model.clip_length:
            raise ShapeError(
                f"{model.arch} expects {model.clip_length} samples, got {w.length}"
            )


def predict_real(
    model: DetectorModel, waveforms: Sequence[Waveform], batch_size: int = PREDICT_BATCH
) -> np.ndarray:
    """Probability of real for every waveform, in order."""
    _check_lengths(model, waveforms)
    was_training = model.training
    model.eval()
    dtype = module_dtype(model)
    out = []
    with torch.no_grad():
        for start in range(0, len(waveforms), batch_size):
            batch = waveforms_to_tensor(waveforms[start : start + batch_size], dtype)
            out.append(model.real_probability(batch).double().numpy())
    model.train(was_training)
    return np.concatenate(out) if out else np.zeros(0)


def detect(model: DetectorModel, clip: Waveform) -> float:
    """
    Probability that a clip is real; the decision threshold is 0.5.

    Raises:
        ShapeError: If the clip length differs from the detector's
    """
    return float(predict_real(model, [clip])[0])


def accuracy(model: DetectorModel, data: Sequence[LabeledClip]) -> float:
    """Fraction of clips whose thresholded decision matches the label."""
    if not data:
        raise ValueError("accuracy needs at least one clip")
    p_real = predict_real(model, [clip.waveform for clip in data])
    predicted = (p_real > 0.5).astype(int)
    targets = label_targets(data).numpy()
    return float(np.mean(predicted == targets))
