"""Generative anti-forensic attack: generator zoo, losses and min-max training."""

from shield.afgan.bundle import (
    GanBundle,
    apply_attack,
    attack_clips,
    build_gan,
    run_generator,
)
from shield.afgan.discriminator import DiscriminatorConfig, WaveDiscriminator
from shield.afgan.generators import GeneratorConfig, WaveGenerator, build_generator
from shield.afgan.losses import (
    adversarial_loss,
    discriminator_loss,
    perceptual_loss,
    surrogate_loss,
)
from shield.afgan.trainer import generator_objective, train_attack

__all__ = [
    "DiscriminatorConfig",
    "GanBundle",
    "GeneratorConfig",
    "WaveDiscriminator",
    "WaveGenerator",
    "adversarial_loss",
    "apply_attack",
    "attack_clips",
    "build_gan",
    "build_generator",
    "discriminator_loss",
    "generator_objective",
    "perceptual_loss",
    "run_generator",
    "surrogate_loss",
    "train_attack",
]
