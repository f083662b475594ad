"""
pytest configuration and fixtures.

Loads environment variables from a .env file, switches torch to
deterministic kernels and provides small corpora shared across test areas.
"""

from pathlib import Path

import pytest
import torch
from dotenv import load_dotenv

from shield.afgan.bundle import GanBundle, build_gan
from shield.audio.corpus import synthetic_corpus
from shield.models.clip import GenId, LabeledClip

# Short clips keep unit tests fast; 1024 is divisible by 16 for G1/G2
TINY_LENGTH = 1024
TINY_RATE = 16000


def pytest_configure(config):
    """Load .env file before running tests"""
    project_root = Path(__file__).parent.parent
    env_file = project_root / ".env"
    if env_file.exists():
        load_dotenv(env_file)
    torch.use_deterministic_algorithms(True)


@pytest.fixture(scope="session")
def tiny_corpus() -> list[LabeledClip]:
    """12 real and 12 fake clips of TINY_LENGTH samples."""
    return synthetic_corpus(
        seed=11, n_real=12, n_fake=12, sample_rate_hz=TINY_RATE, clip_length=TINY_LENGTH
    )


def perturbed_gan(gen_id: GenId, seed: int, scale: float = 0.05) -> GanBundle:
    """TINY_LENGTH bundle whose zero-initialized output layer is replaced by noise."""
    gan = build_gan(gen_id, seed=seed, clip_length=TINY_LENGTH)
    with torch.no_grad():
        gen = torch.Generator().manual_seed(seed)
        for p in gan.generator.out.parameters():
            p.copy_(scale * torch.randn(p.shape, generator=gen))
    return gan
