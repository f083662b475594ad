"""Defense generator, attacked clips and pairs shared by the defense tests."""

import pytest

from shield.afgan.bundle import GanBundle, attack_clips
from shield.defense.embedder import ShieldConfig
from shield.defense.pairing import make_pairs
from shield.models.clip import ClipLabel, GenId, LabeledClip
from shield.models.pair import PairedClip
from tests.conftest import TINY_LENGTH, perturbed_gan

TINY_SHIELD = ShieldConfig(
    channels=[4, 8], kernel_size=5, stride=4, embedding_dim=8, clip_length=TINY_LENGTH
)


@pytest.fixture(scope="session")
def defense_gan() -> GanBundle:
    return perturbed_gan(GenId.G3, seed=21, scale=0.02)


@pytest.fixture(scope="session")
def attacked(tiny_corpus) -> list[LabeledClip]:
    fakes = [c for c in tiny_corpus if c.label == ClipLabel.FAKE]
    return attack_clips(perturbed_gan(GenId.G1, seed=22, scale=0.3), fakes)


@pytest.fixture(scope="session")
def reals(tiny_corpus) -> list[LabeledClip]:
    return [c for c in tiny_corpus if c.label == ClipLabel.REAL]


@pytest.fixture(scope="session")
def tiny_pairs(reals, attacked, defense_gan) -> list[PairedClip]:
    """12 real pairs followed by 12 attacked pairs."""
    return make_pairs(reals + attacked, defense_gan)
