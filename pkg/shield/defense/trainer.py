"""
Two-stage SHIELD training.

Stage 1 trains the embedder on mined triplets with the margin ranking loss.
Stage 2 freezes the embedder and fits the fully-connected head with
cross-entropy on (embedding, pair label).
"""

import copy
import logging
from collections.abc import Sequence
from typing import Optional

import torch
import torch.nn.functional as F
from tqdm import tqdm

from shield.config import FAKE_CLASS, REAL_CLASS
from shield.defense.embedder import (
    PREDICT_BATCH,
    ShieldModel,
    check_pair_length,
    pairs_to_tensor,
)
from shield.defense.triplet import (
    margin_ranking_loss,
    mine_triplet_indices,
    triplet_distances,
)
from shield.models.pair import PairedClip, PairLabel
from shield.models.training import EpochLoss, TrainConfig
from shield.utils.modules import frozen, module_dtype
from shield.utils.seeding import derive_seed
from shield.utils.training import batch_indices, epoch_generator, make_optimizer

logger = logging.getLogger(__name__)


def pair_targets(pairs: Sequence[PairedClip]) -> torch.Tensor:
    """real_pair -> 1, attacked_pair -> 0."""
    return torch.tensor(
        [
            REAL_CLASS if pair.pair_label == PairLabel.REAL_PAIR else FAKE_CLASS
            for pair in pairs
        ],
        dtype=torch.long,
    )


def triplet_objective(
    model: ShieldModel,
    anchors: torch.Tensor,
    positives: torch.Tensor,
    negatives: torch.Tensor,
    margin: float = 0.0,
    squared: bool = True,
) -> torch.Tensor:
    """Margin ranking loss of a batch of payload triplets through the embedder."""
    d_ap, d_an = triplet_distances(
        model.embedder(anchors),
        model.embedder(positives),
        model.embedder(negatives),
        squared=squared,
    )
    return margin_ranking_loss(d_ap, d_an, y=1, margin=margin)


def _train_embedder(
    model: ShieldModel,
    payloads: torch.Tensor,
    labels: list[PairLabel],
    cfg: TrainConfig,
    margin: float,
    squared: bool,
) -> list[EpochLoss]:
    optimizer = make_optimizer(model.embedder.parameters(), cfg)
    history = []
    model.embedder.train()
    for epoch in range(cfg.epochs):
        triplets = torch.tensor(
            mine_triplet_indices(labels, derive_seed(cfg.seed, epoch), len(labels))
        )
        total, steps = 0.0, 0
        for start in tqdm(
            range(0, len(triplets), cfg.batch_size),
            desc=f"triplet epoch {epoch}",
            disable=not cfg.progress,
        ):
            batch = triplets[start : start + cfg.batch_size]
            optimizer.zero_grad()
            loss = triplet_objective(
                model,
                payloads[batch[:, 0]],
                payloads[batch[:, 1]],
                payloads[batch[:, 2]],
                margin,
                squared,
            )
            loss.backward()
            optimizer.step()
            total += loss.item()
            steps += 1
        history.append(EpochLoss(epoch=epoch, steps=steps, loss=total / steps))
        logger.info(
            "Triplet epoch finished",
            extra={"json_fields": {"epoch": epoch, "loss": history[-1].loss}},
        )
    model.embedder.eval()
    return history


def _train_head(
    model: ShieldModel, payloads: torch.Tensor, targets: torch.Tensor, cfg: TrainConfig
) -> list[EpochLoss]:
    with frozen(model.embedder), torch.no_grad():
        embeddings = torch.cat(
            [
                model.embedder(payloads[start : start + PREDICT_BATCH])
                for start in range(0, len(payloads), PREDICT_BATCH)
            ]
        )
    optimizer = make_optimizer(model.head.parameters(), cfg)
    generator = epoch_generator(cfg)
    history = []
    model.head.train()
    for epoch in range(cfg.epochs):
        total, steps = 0.0, 0
        for idx in batch_indices(len(targets), cfg.batch_size, generator):
            optimizer.zero_grad()
            loss = F.cross_entropy(model.head(embeddings[idx]), targets[idx])
            loss.backward()
            optimizer.step()
            total += loss.item()
            steps += 1
        history.append(EpochLoss(epoch=epoch, steps=steps, loss=total / steps))
        logger.info(
            "Head epoch finished",
            extra={"json_fields": {"epoch": epoch, "loss": history[-1].loss}},
        )
    model.head.eval()
    return history


def train_shield(
    model: ShieldModel,
    pairs: Sequence[PairedClip],
    cfg: TrainConfig,
    head_cfg: Optional[TrainConfig] = None,
    margin: float = 0.0,
    squared: bool = True,
) -> ShieldModel:
    """
    Train the embedder on triplets, then the head on frozen embeddings.

    The input model is not modified.

    Args:
        model: Model to start from
        pairs: Real and attacked pairs built with the model's defense generator
        cfg: Stage 1 (triplet) settings
        head_cfg: Stage 2 (head) settings, ``cfg`` when omitted
        margin: Ranking margin
        squared: Squared Euclidean distances when True

    Returns:
        Trained model

    Raises:
        ValueError: If the pairs hold a single class
    """
    labels = [pair.pair_label for pair in pairs]
    if len(set(labels)) < 2:
        raise ValueError("SHIELD training needs both real and attacked pairs")
    for pair in pairs:
        check_pair_length(model, pair)
    head_cfg = head_cfg or cfg

    model = copy.deepcopy(model)
    payloads = pairs_to_tensor(pairs, module_dtype(model))
    model.triplet_history = model.triplet_history + _train_embedder(
        model, payloads, labels, cfg, margin, squared
    )
    model.head_history = model.head_history + _train_head(
        model, payloads, pair_targets(pairs), head_cfg
    )
    model.eval()
    model.trained = True
    return model
