"""
Min-max attack training.

Every batch runs one discriminator step on (real, attacked) clips followed
by one generator step on the combined objective

    g_loss = perceptual_loss + adversarial_loss + surrogate_loss

with the surrogate detectors frozen for the whole run.
"""

import copy
import logging
from collections.abc import Sequence
from typing import Optional

import torch
from tqdm import tqdm

from shield.afgan.bundle import GanBundle
from shield.afgan.losses import (
    adversarial_loss,
    discriminator_loss,
    perceptual_loss,
    surrogate_loss,
)
from shield.detectors.detector import DetectorModel
from shield.exceptions import ShapeError
from shield.models.attack import AttackLossReport, DiscriminatorLossForm, LossWeights
from shield.models.clip import LabeledClip
from shield.models.training import TrainConfig
from shield.utils.modules import clips_to_tensor, frozen, module_dtype
from shield.utils.training import batch_indices, epoch_generator, make_optimizer

logger = logging.getLogger(__name__)

_FAKE_STREAM = 0
_REAL_STREAM = 1


def generator_objective(
    gan: GanBundle,
    fakes: torch.Tensor,
    surrogates: Sequence[DetectorModel],
    weights: Optional[LossWeights] = None,
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    """
    Weighted (perceptual, adversarial, surrogate) terms for a batch of fakes.

    Gradients flow to the generator; the caller decides whether the
    discriminator and surrogates are frozen.
    """
    weights = weights or LossWeights()
    attacked = gan.generator(fakes)
    p = weights.perceptual * perceptual_loss(fakes, attacked)
    a = weights.adversarial * adversarial_loss(gan.discriminator(attacked))
    s = weights.surrogate * surrogate_loss(surrogates, attacked)
    return p, a, s


def _check_clips(gan: GanBundle, clips: Sequence[LabeledClip], what: str) -> None:
    if not clips:
        raise ValueError(f"attack training needs at least one {what} clip")
    for clip in clips:
        if clip.waveform.length != gan.clip_length:
            raise ShapeError(
                f"{what} clip {clip.clip_id} has {clip.waveform.length} samples, "
                f"{gan.gen_id} expects {gan.clip_length}"
            )


def train_attack(
    gan: GanBundle,
    reals: Sequence[LabeledClip],
    fakes: Sequence[LabeledClip],
    surrogates: Sequence[DetectorModel],
    cfg: TrainConfig,
    d_loss_form: DiscriminatorLossForm = DiscriminatorLossForm.STANDARD,
    weights: Optional[LossWeights] = None,
) -> tuple[GanBundle, list[AttackLossReport]]:
    """
    Train a generator to turn fakes into clips the surrogates call real.

    The input bundle and the surrogates are not modified.

    Args:
        gan: Bundle to start from
        reals: Real clips shown to the discriminator
        fakes: Fake clips the generator learns to attack
        surrogates: Trained detectors providing gradient feedback
        cfg: Optimisation settings
        d_loss_form: Discriminator objective variant
        weights: Generator objective weights, 1.0 each by default

    Returns:
        Trained bundle and one loss report per step

    Raises:
        ValueError: If reals, fakes or surrogates are empty
        ShapeError: If a clip length differs from the generator's
    """
    if not surrogates:
        raise ValueError("attack training needs at least one surrogate detector")
    _check_clips(gan, reals, "real")
    _check_clips(gan, fakes, "fake")
    weights = weights or LossWeights()
    if cfg.epochs == 0:
        return gan, []

    gan = copy.deepcopy(gan)
    gan.train()
    dtype = module_dtype(gan.generator)
    real_x = clips_to_tensor(reals, dtype)
    fake_x = clips_to_tensor(fakes, dtype)
    g_opt = make_optimizer(gan.generator.parameters(), cfg)
    d_opt = make_optimizer(gan.discriminator.parameters(), cfg)
    fake_gen = epoch_generator(cfg, _FAKE_STREAM)
    real_gen = epoch_generator(cfg, _REAL_STREAM)

    reports: list[AttackLossReport] = []
    with frozen(*surrogates):
        for epoch in range(cfg.epochs):
            real_order = torch.randperm(len(reals), generator=real_gen)
            start = 0
            batches = tqdm(
                list(batch_indices(len(fakes), cfg.batch_size, fake_gen)),
                desc=f"{gan.gen_id} epoch {epoch}",
                disable=not cfg.progress,
            )
            for step, idx in enumerate(batches):
                fake_b = fake_x[idx]
                real_idx = real_order[(start + torch.arange(len(idx))) % len(reals)]
                real_b = real_x[real_idx]
                start += len(idx)

                d_opt.zero_grad()
                with torch.no_grad():
                    attacked = gan.generator(fake_b)
                d_loss = discriminator_loss(
                    gan.discriminator(real_b), gan.discriminator(attacked), d_loss_form
                )
                d_loss.backward()
                d_opt.step()

                g_opt.zero_grad()
                with frozen(gan.discriminator):
                    p, a, s = generator_objective(gan, fake_b, surrogates, weights)
                    (p + a + s).backward()
                g_opt.step()

                reports.append(
                    AttackLossReport(
                        epoch=epoch,
                        step=step,
                        p_loss=p.item(),
                        a_loss=a.item(),
                        s_loss=s.item(),
                        d_loss=d_loss.item(),
                    )
                )

            epoch_reports = [r for r in reports if r.epoch == epoch]
            logger.info(
                "Attack epoch finished",
                extra={
                    "json_fields": {
                        "gen_id": gan.gen_id.value,
                        "epoch": epoch,
                        "steps": len(epoch_reports),
                        "g_loss": sum(r.g_loss for r in epoch_reports)
                        / len(epoch_reports),
                        "d_loss": sum(r.d_loss for r in epoch_reports)
                        / len(epoch_reports),
                    }
                },
            )

    gan.eval()
    gan.trained = True
    gan.history = gan.history + reports
    return gan, reports
