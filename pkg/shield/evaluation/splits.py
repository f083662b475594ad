"""
Train/val/test membership by seeded hash of clip ids.

Membership depends only on (seed, clip_id), so regenerating or reordering a
corpus never moves a clip between splits.
"""

from collections.abc import Sequence

from shield.config import SPLIT_FRACTIONS
from shield.models.clip import LabeledClip
from shield.utils.hash import hash_to_int

SPLITS = ("train", "val", "test")


def split_of(clip_id: str, seed: int) -> str:
    """Split name ("train", "val" or "test") of one clip."""
    bucket = hash_to_int(f"{seed}:{clip_id}") % 100
    edge = 0
    for name in SPLITS:
        edge += SPLIT_FRACTIONS[name]
        if bucket < edge:
            return name
    return SPLITS[-1]


def split_clips(
    clips: Sequence[LabeledClip], seed: int
) -> dict[str, list[LabeledClip]]:
    """Partition clips into splits, keeping input order within each split."""
    out: dict[str, list[LabeledClip]] = {name: [] for name in SPLITS}
    for clip in clips:
        out[split_of(clip.clip_id, seed)].append(clip)
    return out
