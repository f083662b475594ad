from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from shield.models.clip import GenId


class PairLabel(StrEnum):
    """Class of a clip paired with its defense reconstruction"""

    REAL_PAIR = "real_pair"  # Real clip and its reconstruction
    ATTACKED_PAIR = "attacked_pair"  # Attacked clip and its reconstruction


class ConcatAxis(StrEnum):
    """How a clip and its reconstruction are combined"""

    TIME = "time"  # One 2T-sample sequence
    CHANNEL = "channel"  # Two T-sample channels


class PairedClip(BaseModel):
    """
    Clip concatenated in time with its defense-generator reconstruction.

    The first half of the payload is the source clip, the second half the
    defense generator's output for it.
    """

    clip_id: str = Field(description="Identifier of the source clip")
    payload: np.ndarray = Field(description="Clip followed by reconstruction")
    pair_label: PairLabel = Field(description="Pair class")
    defense_gen_id: GenId = Field(description="Defense generator used for pairing")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("payload", mode="before")
    @classmethod
    def _coerce_payload(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.float32).reshape(-1)
        if array.size == 0 or array.size % 2:
            raise ValueError(f"pair payload must have even length, got {array.size}")
        array.flags.writeable = False
        return array

    @property
    def clip_length(self) -> int:
        """Length T of each half."""
        return int(self.payload.shape[0] // 2)

    @property
    def original(self) -> np.ndarray:
        return self.payload[: self.clip_length]

    @property
    def reconstruction(self) -> np.ndarray:
        return self.payload[self.clip_length :]


class EmbeddingVec(BaseModel):
    """Embedding produced by the triplet embedder"""

    values: np.ndarray = Field(description="Finite real vector of dimension E")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(array)):
            raise ValueError("embedding contains non-finite values")
        array.flags.writeable = False
        return array

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


class TripletBatch(BaseModel):
    """Anchor/positive/negative pairs for triplet training"""

    anchors: list[PairedClip] = Field(default_factory=list)
    positives: list[PairedClip] = Field(default_factory=list)
    negatives: list[PairedClip] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _roles_consistent(self) -> "TripletBatch":
        if not (len(self.anchors) == len(self.positives) == len(self.negatives)):
            raise ValueError("triplet roles must have equal lengths")
        for a, p, n in zip(self.anchors, self.positives, self.negatives):
            if a.pair_label != p.pair_label or a.pair_label == n.pair_label:
                raise ValueError(
                    f"invalid triplet ({a.clip_id}, {p.clip_id}, {n.clip_id})"
                )
        return self

    def __len__(self) -> int:
        return len(self.anchors)
