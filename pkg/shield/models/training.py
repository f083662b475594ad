from enum import StrEnum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class DetectorArch(StrEnum):
    """Toy detector architectures"""

    RAW_CNN = "raw_cnn"  # 1-D convolutions over the waveform
    SPEC_CNN = "spec_cnn"  # 2-D convolutions over the log-mel spectrogram


class TrainConfig(BaseModel):
    """Optimisation settings shared by every trainer"""

    epochs: int = Field(default=10, ge=0, description="Passes over the data")
    batch_size: int = Field(default=32, ge=1, description="Clips per step")
    learning_rate: float = Field(default=1e-4, gt=0.0, description="Adam step size")
    seed: int = Field(default=0, description="Seed for shuffling and sampling")
    optimizer: Literal["adam"] = Field(default="adam")
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    eps: float = Field(default=1e-8, gt=0.0)
    progress: bool = Field(default=False, description="Show tqdm progress bars")

    model_config = ConfigDict(frozen=True)


class EpochLoss(BaseModel):
    """Mean training loss of one epoch"""

    epoch: int
    steps: int
    loss: float
