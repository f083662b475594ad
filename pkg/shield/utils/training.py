"""Optimizer construction and batch iteration shared by the trainers."""

from collections.abc import Iterator, Iterable

import torch
from torch import nn

from shield.models.training import TrainConfig
from shield.utils.seeding import make_generator


def make_optimizer(
    params: Iterable[nn.Parameter], cfg: TrainConfig
) -> torch.optim.Adam:
    """Adam with the configured step size and moments."""
    return torch.optim.Adam(
        params, lr=cfg.learning_rate, betas=(cfg.beta1, cfg.beta2), eps=cfg.eps
    )


def batch_indices(
    n: int, batch_size: int, generator: torch.Generator
) -> Iterator[torch.Tensor]:
    """Shuffled index batches covering ``range(n)`` once."""
    order = torch.randperm(n, generator=generator)
    for start in range(0, n, batch_size):
        yield order[start : start + batch_size]


def epoch_generator(cfg: TrainConfig, stream: int = 0) -> torch.Generator:
    """Shuffling generator for one training stream of a config."""
    return make_generator(cfg.seed * 7919 + stream)
