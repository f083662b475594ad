"""
Embedding export and separation metrics.

The CSV layout is ``clip_id,pair_label,e_0,...,e_{E-1}``, one row per pair,
ready for an external 2-D projection.
"""

import csv
import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field
from scipy.spatial.distance import pdist, squareform
from sklearn.metrics import silhouette_score

from shield.models.pair import PairedClip, PairLabel

logger = logging.getLogger(__name__)


class EmbeddingSeparation(BaseModel):
    """How well embeddings cluster by pair label"""

    silhouette: float = Field(description="Silhouette score by pair label")
    intra_distance: float = Field(description="Mean distance within a class")
    inter_distance: float = Field(description="Mean distance across classes")
    n: int = Field(ge=0)


def embedding_separation(
    embeddings: np.ndarray, labels: Sequence[PairLabel]
) -> EmbeddingSeparation:
    """
    Silhouette score and mean intra/inter-class Euclidean distances.

    Raises:
        ValueError: If fewer than two classes or three embeddings are given
    """
    labels = np.asarray([PairLabel(label).value for label in labels])
    if len(set(labels)) < 2 or len(labels) < 3:
        raise ValueError("separation needs both pair labels and at least 3 embeddings")
    distances = squareform(pdist(embeddings))
    same = labels[:, None] == labels[None, :]
    off_diagonal = ~np.eye(len(labels), dtype=bool)
    return EmbeddingSeparation(
        silhouette=float(silhouette_score(embeddings, labels)),
        intra_distance=float(distances[same & off_diagonal].mean()),
        inter_distance=float(distances[~same].mean()),
        n=len(labels),
    )


def write_embeddings_csv(
    path: Path, pairs: Sequence[PairedClip], embeddings: np.ndarray
) -> Path:
    """Write one row per pair; values use a fixed ``.9g`` format."""
    if len(pairs) != len(embeddings):
        raise ValueError(f"{len(pairs)} pairs but {len(embeddings)} embeddings")
    dim = embeddings.shape[1] if len(embeddings) else 0
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["clip_id", "pair_label"] + [f"e_{i}" for i in range(dim)])
        for pair, row in zip(pairs, embeddings):
            writer.writerow(
                [pair.clip_id, pair.pair_label.value] + [f"{v:.9g}" for v in row]
            )
    logger.info(
        "Wrote embeddings",
        extra={"json_fields": {"path": str(path), "rows": len(pairs), "dim": dim}},
    )
    return path


def read_embeddings_csv(path: Path) -> tuple[list[str], list[PairLabel], np.ndarray]:
    """Clip ids, pair labels and the (N, E) embedding matrix of an export."""
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    body = rows[1:]
    ids = [row[0] for row in body]
    labels = [PairLabel(row[1]) for row in body]
    values = np.array([[float(v) for v in row[2:]] for row in body])
    return ids, labels, values
