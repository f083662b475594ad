"""
Generator/discriminator bundles and attack application.
"""

import concurrent.futures
import logging
from collections.abc import Sequence
from typing import Optional

import numpy as np
import torch
from torch import nn

from shield.afgan.discriminator import DiscriminatorConfig, WaveDiscriminator
from shield.afgan.generators import GeneratorConfig, WaveGenerator, build_generator
from shield.config import DEFAULT_CLIP_LENGTH
from shield.exceptions import ShapeError
from shield.models.attack import AttackLossReport
from shield.models.clip import ClipLabel, GenId, LabeledClip, Waveform
from shield.utils.modules import module_dtype, parameter_count, parameter_vector
from shield.utils.seeding import torch_seed

logger = logging.getLogger(__name__)


class GanBundle(nn.Module):
    """
    One member of the generator zoo: a generator and its discriminator.

    The same bundle type serves as attack generator (applied to fakes) and
    as defense generator (applied to every input before pairing).
    """

    def __init__(
        self,
        gen_id: GenId,
        seed: int,
        generator_config: GeneratorConfig,
        discriminator_config: DiscriminatorConfig,
    ):
        super().__init__()
        self.gen_id = GenId(gen_id)
        self.seed = seed
        self.generator: WaveGenerator = build_generator(self.gen_id, generator_config)
        self.discriminator = WaveDiscriminator(discriminator_config)
        self.trained = False
        self.history: list[AttackLossReport] = []

    @property
    def generator_config(self) -> GeneratorConfig:
        return self.generator.config

    @property
    def discriminator_config(self) -> DiscriminatorConfig:
        return self.discriminator.config

    @property
    def clip_length(self) -> int:
        return self.generator_config.clip_length

    def generator_parameters(self) -> np.ndarray:
        return parameter_vector(self.generator)

    def discriminator_parameters(self) -> np.ndarray:
        return parameter_vector(self.discriminator)

    def generator_parameter_count(self) -> int:
        return parameter_count(self.generator)


def build_gan(
    gen_id: GenId,
    seed: int,
    clip_length: int = DEFAULT_CLIP_LENGTH,
    generator_config: Optional[GeneratorConfig] = None,
    discriminator_config: Optional[DiscriminatorConfig] = None,
) -> GanBundle:
    """
    Build an untrained generator/discriminator pair.

    Initialization is a pure function of ``(gen_id, seed)`` and the configs.
    """
    gen_id = GenId(gen_id)
    generator_config = generator_config or GeneratorConfig.default(gen_id, clip_length)
    discriminator_config = discriminator_config or DiscriminatorConfig()
    with torch_seed(seed):
        gan = GanBundle(gen_id, seed, generator_config, discriminator_config)
    return gan.eval()


def _check_length(gan: GanBundle, clip: Waveform) -> None:
    if clip.length != gan.clip_length:
        raise ShapeError(
            f"{gan.gen_id} expects {gan.clip_length} samples, got {clip.length}"
        )


def run_generator(gan: GanBundle, clip: Waveform) -> np.ndarray:
    """
    Generator output for one clip as float32 samples.

    Clips always run one at a time so the output bytes do not depend on
    which other clips share a batch.
    """
    _check_length(gan, clip)
    x = torch.from_numpy(clip.samples).to(module_dtype(gan.generator)).unsqueeze(0)
    was_training = gan.generator.training
    gan.generator.eval()
    with torch.no_grad():
        y = gan.generator(x)[0]
    gan.generator.train(was_training)
    return np.clip(y.float().numpy(), -1.0, 1.0)


def apply_attack(gan: GanBundle, fake: Waveform) -> Waveform:
    """
    Run the attack generator on a fake clip.

    Raises:
        ShapeError: If the clip length differs from the generator's
    """
    return Waveform(
        samples=run_generator(gan, fake), sample_rate_hz=fake.sample_rate_hz
    )


def _attack_clip(gan: GanBundle, clip: LabeledClip) -> LabeledClip:
    if clip.label != ClipLabel.FAKE:
        raise ValueError(
            f"only fake clips can be attacked, {clip.clip_id} is {clip.label}"
        )
    return LabeledClip(
        clip_id=clip.clip_id,
        waveform=apply_attack(gan, clip.waveform),
        label=ClipLabel.ATTACKED,
        source=gan.gen_id.value,
    )


def attack_clips(
    gan: GanBundle, clips: Sequence[LabeledClip], jobs: int = 1
) -> list[LabeledClip]:
    """
    Attack every fake clip, keeping the input order.

    The attacked clip keeps its source clip id so it lands in the same
    split; its source becomes the generator id.

    Args:
        gan: Attack generator
        clips: Fake clips
        jobs: Worker threads; the output does not depend on it
    """
    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
            attacked = list(executor.map(lambda c: _attack_clip(gan, c), clips))
    else:
        attacked = [_attack_clip(gan, clip) for clip in clips]
    logger.info(
        "Attacked clips",
        extra={"json_fields": {"gen_id": gan.gen_id.value, "count": len(attacked)}},
    )
    return attacked
