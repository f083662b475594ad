"""
Triplet distances, margin ranking loss and triplet mining.
"""

from collections.abc import Sequence
from typing import Optional, Union

import numpy as np
import torch
import torch.nn.functional as F

from shield.exceptions import ShapeError
from shield.models.pair import EmbeddingVec, PairedClip, PairLabel, TripletBatch

VectorLike = Union[torch.Tensor, EmbeddingVec, np.ndarray, Sequence[float]]


def _as_tensor(value: VectorLike) -> torch.Tensor:
    if isinstance(value, torch.Tensor):
        return value
    if isinstance(value, EmbeddingVec):
        value = value.values
    return torch.as_tensor(np.asarray(value, dtype=np.float64))


def pairwise_distance(
    a: torch.Tensor, b: torch.Tensor, squared: bool = True
) -> torch.Tensor:
    """Row-wise (squared) Euclidean distance along the last dimension."""
    d = (a - b).pow(2).sum(dim=-1)
    return d if squared else d.sqrt()


def triplet_distances(
    fa: VectorLike, fp: VectorLike, fn: VectorLike, squared: bool = True
) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Anchor-positive and anchor-negative distances.

    Works on single vectors or (batch, E) tensors. Distances are squared
    Euclidean unless ``squared`` is False.

    Raises:
        ShapeError: If the embedding dimensions differ
    """
    fa, fp, fn = _as_tensor(fa), _as_tensor(fp), _as_tensor(fn)
    if not (fa.shape[-1] == fp.shape[-1] == fn.shape[-1]):
        raise ShapeError(
            f"embedding dimensions differ: {fa.shape[-1]}, {fp.shape[-1]}, "
            f"{fn.shape[-1]}"
        )
    return pairwise_distance(fa, fp, squared), pairwise_distance(fa, fn, squared)


def margin_ranking_loss(
    d_ap: VectorLike, d_an: VectorLike, y: int = 1, margin: float = 0.0
) -> torch.Tensor:
    """
    max(0, y * (d_ap - d_an) + margin), averaged over the batch.

    With y = +1 the loss is zero once the positive is closer than the
    negative by at least the margin.
    """
    if y not in (1, -1):
        raise ValueError(f"y must be +1 or -1, got {y}")
    if margin < 0:
        raise ValueError(f"margin must be >= 0, got {margin}")
    d_ap, d_an = _as_tensor(d_ap), _as_tensor(d_an)
    target = torch.full_like(d_ap, float(y))
    # torch ranks its first input above the second for target +1
    return F.margin_ranking_loss(d_an, d_ap, target, margin=margin)


def mine_triplet_indices(
    labels: Sequence[PairLabel],
    seed: int,
    n: int,
    anchor_label: Optional[PairLabel] = None,
) -> list[tuple[int, int, int]]:
    """
    Sample ``n`` (anchor, positive, negative) index triplets.

    Anchors are drawn uniformly from all pairs, or from ``anchor_label``
    only when given; the positive comes from the anchor's class excluding the
    anchor, the negative from the other class. Every class that can supply an
    anchor needs at least two members.

    Raises:
        ValueError: If a class is missing or an anchor class has fewer than 2
            members
    """
    labels = [PairLabel(label) for label in labels]
    members = {
        label: np.flatnonzero([x == label for x in labels]) for label in PairLabel
    }
    empty = [label.value for label, idx in members.items() if idx.size == 0]
    if empty:
        raise ValueError(f"triplet mining needs both pair labels, missing {empty}")

    eligible = list(PairLabel) if anchor_label is None else [PairLabel(anchor_label)]
    small = [label.value for label in eligible if members[label].size < 2]
    if small:
        raise ValueError(f"anchor class {small} has fewer than 2 members")

    anchor_pool = np.concatenate([members[label] for label in eligible])
    rng = np.random.default_rng(seed)
    triplets = []
    for _ in range(n):
        a = int(rng.choice(anchor_pool))
        same = members[labels[a]]
        other = next(idx for label, idx in members.items() if label != labels[a])
        p = int(rng.choice(same[same != a]))
        neg = int(rng.choice(other))
        triplets.append((a, p, neg))
    return triplets


def mine_triplets(
    pairs: Sequence[PairedClip],
    seed: int,
    n: int,
    anchor_label: Optional[PairLabel] = None,
) -> TripletBatch:
    """Deterministic triplet batch drawn from ``pairs``."""
    triplets = mine_triplet_indices(
        [pair.pair_label for pair in pairs], seed, n, anchor_label
    )
    return TripletBatch(
        anchors=[pairs[a] for a, _, _ in triplets],
        positives=[pairs[p] for _, p, _ in triplets],
        negatives=[pairs[neg] for _, _, neg in triplets],
    )
