"""
Attack training objectives.

Every function accepts tensors (batched, differentiable) as well as plain
floats, arrays or waveforms, and returns a 0-d tensor. Logs of probabilities
clamp their argument to [LOG_PROB_EPS, 1].
"""

from collections.abc import Sequence
from typing import Union

import numpy as np
import torch
from torch import nn

from shield.config import LOG_PROB_EPS
from shield.detectors.detector import DetectorModel
from shield.exceptions import ShapeError
from shield.models.attack import DiscriminatorLossForm
from shield.models.clip import Waveform
from shield.utils.modules import module_dtype

TensorLike = Union[torch.Tensor, np.ndarray, Waveform, float, Sequence[float]]


def _as_tensor(value: TensorLike) -> torch.Tensor:
    if isinstance(value, torch.Tensor):
        return value
    if isinstance(value, Waveform):
        value = value.samples
    return torch.as_tensor(np.asarray(value, dtype=np.float64))


def _log_prob(p: torch.Tensor) -> torch.Tensor:
    return torch.log(p.clamp(LOG_PROB_EPS, 1.0))


def perceptual_loss(orig: TensorLike, attacked: TensorLike) -> torch.Tensor:
    """
    Point-wise L1 distance averaged over samples (and batch).

    Raises:
        ShapeError: If the shapes differ
    """
    orig, attacked = _as_tensor(orig), _as_tensor(attacked)
    if orig.shape != attacked.shape:
        raise ShapeError(
            f"perceptual loss needs equal shapes, got {tuple(orig.shape)} "
            f"and {tuple(attacked.shape)}"
        )
    return (orig.to(attacked.dtype) - attacked).abs().mean()


def adversarial_loss(d_out: TensorLike) -> torch.Tensor:
    """log(1 - D(attacked)); minimizing pushes the discriminator toward "real"."""
    return _log_prob(1.0 - _as_tensor(d_out)).mean()


def surrogate_loss(
    surrogates: Sequence[DetectorModel], attacked: TensorLike
) -> torch.Tensor:
    """
    Cross-entropy toward the real class, averaged over surrogates.

    Each surrogate scores the whole attacked clip. Surrogates are expected to
    be frozen by the caller; gradients still flow to ``attacked``.

    Raises:
        ValueError: If no surrogate is given
    """
    if not surrogates:
        raise ValueError("surrogate loss needs at least one surrogate detector")
    x = _as_tensor(attacked)
    if x.dim() == 1:
        x = x.unsqueeze(0)
    terms = []
    for model in surrogates:
        xm = x.to(module_dtype(model)) if isinstance(model, nn.Module) else x
        p_real = model.real_probability(xm).to(x.dtype)
        terms.append(-_log_prob(p_real).mean())
    return torch.stack(terms).mean()


def discriminator_loss(
    d_real: TensorLike,
    d_attacked: TensorLike,
    form: DiscriminatorLossForm = DiscriminatorLossForm.STANDARD,
) -> torch.Tensor:
    """
    Discriminator objective on real and attacked clips.

    standard: -log D(real) - log(1 - D(attacked))
    as_printed: log(1 - D(real)) + log(1 - D(attacked))
    """
    d_real, d_attacked = _as_tensor(d_real), _as_tensor(d_attacked)
    fooled = _log_prob(1.0 - d_attacked).mean()
    if DiscriminatorLossForm(form) == DiscriminatorLossForm.AS_PRINTED:
        return _log_prob(1.0 - d_real).mean() + fooled
    return -_log_prob(d_real).mean() - fooled
