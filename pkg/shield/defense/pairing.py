"""
Pairing of clips with their defense-generator reconstructions.
"""

import concurrent.futures
from collections.abc import Sequence

import numpy as np

from shield.afgan.bundle import GanBundle, run_generator
from shield.models.clip import ClipLabel, LabeledClip, Waveform
from shield.models.pair import PairedClip, PairLabel

_PAIR_LABELS = {
    ClipLabel.REAL: PairLabel.REAL_PAIR,
    ClipLabel.ATTACKED: PairLabel.ATTACKED_PAIR,
}


def apply_defense_generator(defense: GanBundle, clip: Waveform) -> Waveform:
    """
    Reconstruction of a clip by the defense generator.

    Raises:
        ShapeError: If the clip length differs from the generator's
    """
    return Waveform(
        samples=run_generator(defense, clip), sample_rate_hz=clip.sample_rate_hz
    )


def pair_payload(defense: GanBundle, clip: Waveform) -> np.ndarray:
    """Clip samples followed by the reconstruction, as 2T float32 samples."""
    return np.concatenate([clip.samples, run_generator(defense, clip)])


def pair_label_for(clip: LabeledClip, include_plain_fakes: bool = False) -> PairLabel:
    """
    Map a clip label to its pair class.

    Plain fakes only count as attacked pairs when explicitly allowed.

    Raises:
        ValueError: For a plain fake without ``include_plain_fakes``
    """
    if clip.label == ClipLabel.FAKE:
        if not include_plain_fakes:
            raise ValueError(
                f"clip {clip.clip_id} is a plain fake; pass include_plain_fakes "
                "to pair it as attacked"
            )
        return PairLabel.ATTACKED_PAIR
    return _PAIR_LABELS[clip.label]


def make_pair(
    clip: LabeledClip, defense: GanBundle, include_plain_fakes: bool = False
) -> PairedClip:
    """
    Concatenate a clip with its defense reconstruction.

    Args:
        clip: Real or attacked clip (plain fakes need ``include_plain_fakes``)
        defense: Defense generator
        include_plain_fakes: Pair plain fakes as attacked

    Returns:
        Pair whose first half is the clip and second half its reconstruction
    """
    label = pair_label_for(clip, include_plain_fakes)
    return PairedClip(
        clip_id=clip.clip_id,
        payload=pair_payload(defense, clip.waveform),
        pair_label=label,
        defense_gen_id=defense.gen_id,
    )


def make_pairs(
    clips: Sequence[LabeledClip],
    defense: GanBundle,
    include_plain_fakes: bool = False,
    jobs: int = 1,
) -> list[PairedClip]:
    """Pair every clip, keeping the input order."""
    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
            return list(
                executor.map(
                    lambda clip: make_pair(clip, defense, include_plain_fakes), clips
                )
            )
    return [make_pair(clip, defense, include_plain_fakes) for clip in clips]
