"""
SHIELD defense: reconstruction pairing, triplet embedding and the
real/attacked classifier.
"""

from shield.defense.embedder import (
    ShieldConfig,
    ShieldModel,
    build_shield,
    embed,
    embed_pairs,
)
from shield.defense.export import (
    EmbeddingSeparation,
    embedding_separation,
    read_embeddings_csv,
    write_embeddings_csv,
)
from shield.defense.inference import (
    pair_probabilities,
    predict_pairs,
    shield_detect,
    shield_probabilities,
)
from shield.defense.pairing import apply_defense_generator, make_pair, make_pairs
from shield.defense.trainer import train_shield, triplet_objective
from shield.defense.triplet import (
    margin_ranking_loss,
    mine_triplet_indices,
    mine_triplets,
    triplet_distances,
)

__all__ = [
    "EmbeddingSeparation",
    "ShieldConfig",
    "ShieldModel",
    "apply_defense_generator",
    "build_shield",
    "embed",
    "embed_pairs",
    "embedding_separation",
    "make_pair",
    "make_pairs",
    "margin_ranking_loss",
    "mine_triplet_indices",
    "mine_triplets",
    "pair_probabilities",
    "predict_pairs",
    "read_embeddings_csv",
    "shield_detect",
    "shield_probabilities",
    "train_shield",
    "triplet_distances",
    "triplet_objective",
    "write_embeddings_csv",
]
