"""Helpers shared by the torch models."""

from collections.abc import Iterator, Sequence
from contextlib import contextmanager

import numpy as np
import torch
from torch import nn

from shield.models.clip import LabeledClip, Waveform


@contextmanager
def frozen(*modules: nn.Module) -> Iterator[None]:
    """
    Disable gradients and switch to eval mode for the duration of the block.

    Parameter values are never touched; ``requires_grad`` flags and the
    training mode are restored on exit.
    """
    saved = []
    for module in modules:
        flags = [p.requires_grad for p in module.parameters()]
        saved.append((module, module.training, flags))
        module.eval()
        module.requires_grad_(False)
    try:
        yield
    finally:
        for module, training, flags in saved:
            module.train(training)
            for p, flag in zip(module.parameters(), flags):
                p.requires_grad_(flag)


def module_dtype(module: nn.Module) -> torch.dtype:
    for p in module.parameters():
        return p.dtype
    return torch.float32


def parameter_vector(module: nn.Module) -> np.ndarray:
    """All parameters flattened in registration order, as float64."""
    params = [p.detach().reshape(-1).double() for p in module.parameters()]
    if not params:
        return np.zeros(0)
    return torch.cat(params).numpy()


def parameter_count(module: nn.Module) -> int:
    return sum(p.numel() for p in module.parameters())


def waveforms_to_tensor(
    waveforms: Sequence[Waveform], dtype: torch.dtype = torch.float32
) -> torch.Tensor:
    """Stack waveforms into a (batch, T) tensor."""
    return torch.from_numpy(np.stack([w.samples for w in waveforms])).to(dtype)


def clips_to_tensor(
    clips: Sequence[LabeledClip], dtype: torch.dtype = torch.float32
) -> torch.Tensor:
    return waveforms_to_tensor([clip.waveform for clip in clips], dtype)
