"""SHIELD inference on raw clips and on prepared pairs."""

from collections.abc import Sequence

import numpy as np
import torch

from shield.afgan.bundle import GanBundle
from shield.config import REAL_CLASS
from shield.defense.embedder import (
    PREDICT_BATCH,
    ShieldModel,
    check_pair_length,
    pairs_to_tensor,
)
from shield.defense.pairing import pair_payload
from shield.exceptions import UntrainedModelError
from shield.models.clip import Waveform
from shield.models.pair import PairedClip
from shield.utils.modules import module_dtype


def _check_ready(model: ShieldModel, defense: GanBundle) -> None:
    if not model.trained:
        raise UntrainedModelError(
            f"SHIELD model for {model.defense_gen_id} is untrained"
        )
    if defense.gen_id != model.defense_gen_id:
        raise ValueError(
            f"SHIELD model was trained with defense {model.defense_gen_id}, "
            f"got {defense.gen_id}"
        )


def pair_probabilities(
    model: ShieldModel, pairs: Sequence[PairedClip], batch_size: int = PREDICT_BATCH
) -> np.ndarray:
    """(N, 2) class probabilities for prepared pairs; column 1 is real."""
    for pair in pairs:
        check_pair_length(model, pair)
    was_training = model.training
    model.eval()
    dtype = module_dtype(model)
    out = []
    with torch.no_grad():
        for start in range(0, len(pairs), batch_size):
            batch = pairs_to_tensor(pairs[start : start + batch_size], dtype)
            out.append(model.class_probabilities(batch).double().numpy())
    model.train(was_training)
    return np.concatenate(out) if out else np.zeros((0, 2))


def predict_pairs(model: ShieldModel, pairs: Sequence[PairedClip]) -> np.ndarray:
    """Probability of the real pair class for every pair."""
    return pair_probabilities(model, pairs)[:, REAL_CLASS]


def shield_probabilities(
    model: ShieldModel, defense: GanBundle, clip: Waveform
) -> np.ndarray:
    """(p_attacked, p_real) for one clip paired with its reconstruction."""
    _check_ready(model, defense)
    pair = PairedClip(
        clip_id="inference",
        payload=pair_payload(defense, clip),
        pair_label="real_pair",
        defense_gen_id=defense.gen_id,
    )
    return pair_probabilities(model, [pair])[0]


def shield_detect(model: ShieldModel, defense: GanBundle, clip: Waveform) -> float:
    """
    Probability that a clip is real under SHIELD; the threshold is 0.5.

    Raises:
        UntrainedModelError: If the model was never trained
        ValueError: If the defense generator is not the model's
        ShapeError: If the clip length differs from the generator's
    """
    return float(shield_probabilities(model, defense, clip)[REAL_CLASS])
