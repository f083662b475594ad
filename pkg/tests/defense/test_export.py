"""
Tests for embedding export and separation metrics.
"""

import numpy as np
import pytest

from shield.defense.export import (
    embedding_separation,
    read_embeddings_csv,
    write_embeddings_csv,
)
from shield.models.clip import GenId
from shield.models.pair import PairedClip, PairLabel

REAL = PairLabel.REAL_PAIR
ATTACKED = PairLabel.ATTACKED_PAIR


def _make_pairs(labels: list[PairLabel]) -> list[PairedClip]:
    return [
        PairedClip(
            clip_id=f"clip-{i}",
            payload=np.zeros(4),
            pair_label=label,
            defense_gen_id=GenId.G2,
        )
        for i, label in enumerate(labels)
    ]


class TestEmbeddingSeparation:
    """Tests for embedding_separation"""

    def test_two_clusters(self):
        rng = np.random.default_rng(0)
        embeddings = np.concatenate(
            [rng.normal(0, 0.1, (20, 4)), rng.normal(5, 0.1, (20, 4))]
        )
        labels = [REAL] * 20 + [ATTACKED] * 20
        sep = embedding_separation(embeddings, labels)
        assert sep.silhouette > 0.9
        assert sep.intra_distance < sep.inter_distance
        assert sep.n == 40

    def test_mixed_clusters_score_low(self):
        rng = np.random.default_rng(1)
        embeddings = rng.normal(size=(40, 4))
        labels = [REAL, ATTACKED] * 20
        assert embedding_separation(embeddings, labels).silhouette < 0.2

    def test_single_class(self):
        with pytest.raises(ValueError, match="both pair labels"):
            embedding_separation(np.zeros((5, 2)), [REAL] * 5)


class TestEmbeddingsCsv:
    """Tests for the embedding CSV export"""

    def test_layout(self, tmp_path):
        pairs = _make_pairs([REAL, ATTACKED, REAL])
        embeddings = np.arange(15, dtype=np.float64).reshape(3, 5) / 7
        path = write_embeddings_csv(tmp_path / "out" / "emb.csv", pairs, embeddings)
        lines = path.read_text().splitlines()
        assert lines[0] == "clip_id,pair_label,e_0,e_1,e_2,e_3,e_4"
        assert len(lines) == 4
        assert all(len(line.split(",")) == 5 + 2 for line in lines)
        assert lines[2].startswith("clip-1,attacked_pair,")

    def test_read_back(self, tmp_path):
        pairs = _make_pairs([REAL, ATTACKED])
        embeddings = np.array([[0.1, -2.5], [3.25, 1e-7]])
        path = write_embeddings_csv(tmp_path / "emb.csv", pairs, embeddings)
        ids, labels, values = read_embeddings_csv(path)
        assert ids == ["clip-0", "clip-1"]
        assert labels == [REAL, ATTACKED]
        assert np.allclose(values, embeddings, rtol=1e-8)

    def test_length_mismatch(self, tmp_path):
        with pytest.raises(ValueError):
            write_embeddings_csv(
                tmp_path / "e.csv", _make_pairs([REAL]), np.zeros((2, 3))
            )
