"""
Supervised detector training with cross-entropy.
"""

import copy
import logging
from collections.abc import Sequence

import torch
import torch.nn.functional as F
from tqdm import tqdm

from shield.detectors.detector import DetectorModel, label_targets
from shield.models.clip import LabeledClip
from shield.models.training import EpochLoss, TrainConfig
from shield.utils.modules import clips_to_tensor, module_dtype
from shield.utils.training import batch_indices, epoch_generator, make_optimizer

logger = logging.getLogger(__name__)


def train_detector(
    model: DetectorModel, data: Sequence[LabeledClip], cfg: TrainConfig
) -> DetectorModel:
    """
    Train a detector on real (class 1) vs fake/attacked (class 0) clips.

    The input model is not modified; a trained copy is returned with its
    per-epoch loss history. Zero epochs return the input model itself.

    Args:
        model: Detector to start from
        data: Labelled clips containing both classes
        cfg: Optimisation settings

    Returns:
        Trained detector

    Raises:
        ValueError: If the data holds a single class
    """
    targets = label_targets(data)
    if targets.unique().numel() < 2:
        raise ValueError("detector training needs both real and fake/attacked clips")
    if cfg.epochs == 0:
        return model

    model = copy.deepcopy(model)
    model.train()
    inputs = clips_to_tensor(data, module_dtype(model))
    optimizer = make_optimizer(model.parameters(), cfg)
    generator = epoch_generator(cfg)

    history = []
    for epoch in range(cfg.epochs):
        total, steps = 0.0, 0
        batches = batch_indices(len(data), cfg.batch_size, generator)
        desc = f"{model.arch} epoch {epoch}"
        for idx in tqdm(batches, desc=desc, disable=not cfg.progress):
            optimizer.zero_grad()
            loss = F.cross_entropy(model(inputs[idx]), targets[idx])
            loss.backward()
            optimizer.step()
            total += loss.item()
            steps += 1
        history.append(EpochLoss(epoch=epoch, steps=steps, loss=total / steps))
        logger.info(
            "Detector epoch finished",
            extra={
                "json_fields": {
                    "arch": model.arch.value,
                    "seed": model.seed,
                    "epoch": epoch,
                    "loss": history[-1].loss,
                }
            },
        )

    model.eval()
    model.trained = True
    model.history = model.history + history
    return model


def detector_loss(model: DetectorModel, data: Sequence[LabeledClip]) -> torch.Tensor:
    """Mean cross-entropy over ``data`` with gradients enabled."""
    inputs = clips_to_tensor(data, module_dtype(model))
    return F.cross_entropy(model(inputs), label_targets(data))
