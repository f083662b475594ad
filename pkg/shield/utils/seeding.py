"""Deterministic seeding helpers."""

from contextlib import contextmanager
from typing import Iterator

import torch


@contextmanager
def torch_seed(seed: int) -> Iterator[None]:
    """
    Seed torch's global CPU generator inside a forked RNG state.

    Module construction under this context is a pure function of ``seed``
    and leaves the caller's RNG stream untouched.
    """
    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(seed)
        yield


def make_generator(seed: int) -> torch.Generator:
    """Create a CPU generator for shuffling and sampling."""
    generator = torch.Generator()
    generator.manual_seed(seed)
    return generator


def derive_seed(seed: int, *parts: int) -> int:
    """Combine a base seed with stage/epoch indices into a new seed."""
    value = seed & 0xFFFFFFFF
    for part in parts:
        value = (value * 1_000_003 + (part & 0xFFFFFFFF) + 0x9E3779B9) & 0x7FFFFFFF
    return value
