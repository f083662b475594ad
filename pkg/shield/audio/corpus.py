"""
Corpus assembly helpers.
"""

import logging
from collections.abc import Iterable, Mapping

from shield.audio.synth import synth_fake, synth_real
from shield.config import DEFAULT_CLIP_LENGTH, DEFAULT_SAMPLE_RATE_HZ
from shield.models.clip import ClipLabel, LabeledClip

logger = logging.getLogger(__name__)


def synthetic_corpus(
    seed: int,
    n_real: int,
    n_fake: int,
    sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ,
    clip_length: int = DEFAULT_CLIP_LENGTH,
    source: str = "synthetic",
) -> list[LabeledClip]:
    """Real clips followed by fake clips, both drawn from ``seed``."""
    kwargs = dict(sample_rate_hz=sample_rate_hz, clip_length=clip_length, source=source)
    return synth_real(seed, n_real, **kwargs) + synth_fake(seed, n_fake, **kwargs)


def by_label(clips: Iterable[LabeledClip], label: ClipLabel) -> list[LabeledClip]:
    return [clip for clip in clips if clip.label == label]


def label_counts(clips: Iterable[LabeledClip]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for clip in clips:
        counts[clip.label.value] = counts.get(clip.label.value, 0) + 1
    return counts


def balance_classes(clips: list[LabeledClip]) -> list[LabeledClip]:
    """
    Truncate every present class to the size of the smallest one.

    The first clips of each class (in input order) are kept and the input
    order is preserved.
    """
    counts = label_counts(clips)
    if not counts:
        return []
    keep = min(counts.values())
    seen: dict[str, int] = {}
    balanced = []
    for clip in clips:
        taken = seen.get(clip.label.value, 0)
        if taken < keep:
            balanced.append(clip)
            seen[clip.label.value] = taken + 1
    return balanced


def merge_corpora(
    corpora: Mapping[str, list[LabeledClip]], balance: bool = True
) -> list[LabeledClip]:
    """
    Concatenate several corpora into one training set.

    Args:
        corpora: Corpus name -> clips, merged in sorted name order
        balance: Balance classes within each corpus before merging

    Returns:
        Merged clip list
    """
    merged = []
    for name in sorted(corpora):
        clips = balance_classes(corpora[name]) if balance else list(corpora[name])
        merged.extend(clips)
        logger.info(
            "Merged corpus",
            extra={"json_fields": {"corpus": name, "counts": label_counts(clips)}},
        )
    return merged
