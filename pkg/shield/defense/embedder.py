"""
Triplet embedder and real/attacked head.

The embedder is a strided 1-D convolution stack over a paired clip. With
time concatenation it reads one 2T-sample channel; with channel stacking it
reads the clip and its reconstruction as two T-sample channels.
"""

from collections.abc import Sequence
from typing import Optional

import numpy as np
import torch
from pydantic import BaseModel, ConfigDict, Field
from torch import nn

from shield.config import DEFAULT_CLIP_LENGTH, REAL_CLASS
from shield.exceptions import ShapeError
from shield.models.clip import GenId
from shield.models.pair import ConcatAxis, EmbeddingVec, PairedClip
from shield.models.training import EpochLoss
from shield.utils.modules import module_dtype, parameter_count, parameter_vector
from shield.utils.seeding import torch_seed

PREDICT_BATCH = 64


class ShieldConfig(BaseModel):
    """Layer configuration of the embedder and head"""

    channels: list[int] = Field(default=[16, 32, 64, 64], min_length=1)
    kernel_size: int = Field(default=9, gt=0)
    stride: int = Field(default=4, gt=0)
    embedding_dim: int = Field(default=128, gt=0, description="Embedding size E")
    clip_length: int = Field(default=DEFAULT_CLIP_LENGTH, gt=0)
    concat_axis: ConcatAxis = Field(default=ConcatAxis.TIME)

    model_config = ConfigDict(frozen=True)


class PairEmbedder(nn.Module):
    """(batch, 2T) payload -> (batch, E) embedding."""

    def __init__(self, config: ShieldConfig):
        super().__init__()
        self.config = config
        in_channels = 2 if config.concat_axis == ConcatAxis.CHANNEL else 1
        widths = [in_channels] + list(config.channels)
        layers: list[nn.Module] = []
        for c_in, c_out in zip(widths[:-1], widths[1:]):
            layers += [
                nn.Conv1d(
                    c_in,
                    c_out,
                    config.kernel_size,
                    stride=config.stride,
                    padding=config.kernel_size // 2,
                ),
                nn.GroupNorm(1, c_out),
                nn.LeakyReLU(0.2),
            ]
        self.features = nn.Sequential(*layers)
        self.project = nn.Linear(widths[-1], config.embedding_dim)

    def forward(self, payload: torch.Tensor) -> torch.Tensor:
        if self.config.concat_axis == ConcatAxis.CHANNEL:
            # (batch, 2T) -> (batch, 2, T): channel 0 clip, channel 1 reconstruction
            x = payload.reshape(payload.shape[0], 2, -1)
        else:
            x = payload.unsqueeze(1)
        return self.project(self.features(x).mean(dim=-1))


class ShieldModel(nn.Module):
    """
    Embedder plus fully-connected real/attacked head.

    Class 1 of the head is the real pair, class 0 the attacked pair.
    """

    def __init__(self, seed: int, config: ShieldConfig, defense_gen_id: GenId):
        super().__init__()
        self.seed = seed
        self.config = config
        self.defense_gen_id = GenId(defense_gen_id)
        self.embedder = PairEmbedder(config)
        self.head = nn.Linear(config.embedding_dim, 2)
        self.trained = False
        self.triplet_history: list[EpochLoss] = []
        self.head_history: list[EpochLoss] = []

    @property
    def clip_length(self) -> int:
        return self.config.clip_length

    @property
    def embedding_dim(self) -> int:
        return self.config.embedding_dim

    def forward(self, payload: torch.Tensor) -> torch.Tensor:
        """(batch, 2T) payloads -> (batch, 2) logits."""
        return self.head(self.embedder(payload))

    def class_probabilities(self, payload: torch.Tensor) -> torch.Tensor:
        return torch.softmax(self.forward(payload), dim=-1)

    def real_probability(self, payload: torch.Tensor) -> torch.Tensor:
        return self.class_probabilities(payload)[:, REAL_CLASS]

    def embedder_parameters(self) -> np.ndarray:
        return parameter_vector(self.embedder)

    def parameter_vector(self) -> np.ndarray:
        return parameter_vector(self)

    def parameter_count(self) -> int:
        return parameter_count(self)


def build_shield(
    seed: int, defense_gen_id: GenId, config: Optional[ShieldConfig] = None
) -> ShieldModel:
    """Untrained SHIELD model, initialized as a pure function of the seed."""
    config = config or ShieldConfig()
    with torch_seed(seed):
        model = ShieldModel(seed, config, defense_gen_id)
    return model.eval()


def check_pair_length(model: ShieldModel, pair: PairedClip) -> None:
    if pair.clip_length != model.clip_length:
        raise ShapeError(
            f"pair {pair.clip_id} holds {pair.payload.shape[0]} samples, "
            f"model expects {2 * model.clip_length}"
        )


def pairs_to_tensor(
    pairs: Sequence[PairedClip], dtype: torch.dtype = torch.float32
) -> torch.Tensor:
    """Stack pair payloads into a (batch, 2T) tensor."""
    return torch.from_numpy(np.stack([pair.payload for pair in pairs])).to(dtype)


def embed_pairs(
    model: ShieldModel, pairs: Sequence[PairedClip], batch_size: int = PREDICT_BATCH
) -> np.ndarray:
    """(N, E) float64 embeddings in input order."""
    for pair in pairs:
        check_pair_length(model, pair)
    was_training = model.training
    model.eval()
    dtype = module_dtype(model)
    out = []
    with torch.no_grad():
        for start in range(0, len(pairs), batch_size):
            batch = pairs_to_tensor(pairs[start : start + batch_size], dtype)
            out.append(model.embedder(batch).double().numpy())
    model.train(was_training)
    if not out:
        return np.zeros((0, model.embedding_dim))
    return np.concatenate(out)


def embed(model: ShieldModel, pair: PairedClip) -> EmbeddingVec:
    """
    Embedding of one pair.

    Raises:
        ShapeError: If the payload is not 2T samples for the model's T
    """
    return EmbeddingVec(values=embed_pairs(model, [pair])[0])
