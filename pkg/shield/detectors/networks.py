"""
Toy detector networks.

Both architectures follow one recipe: four blocks of
convolution -> normalization -> ReLU -> max-pool, global average pooling and
a linear layer over two classes. ``RawCNN`` runs 1-D convolutions on the
waveform; ``SpecCNN`` runs 2-D convolutions on the log-mel spectrogram
computed in-graph by ``LogMel``.
"""

from typing import Optional

import torch
from pydantic import BaseModel, ConfigDict, Field
from torch import nn

from shield.config import (
    DEFAULT_CLIP_LENGTH,
    DEFAULT_HOP,
    DEFAULT_N_MELS,
    DEFAULT_SAMPLE_RATE_HZ,
    DEFAULT_WIN,
)
from shield.dsp.spectrogram import LogMel
from shield.models.training import DetectorArch


class DetectorConfig(BaseModel):
    """Layer widths and strides of a detector"""

    channels: list[int] = Field(min_length=4, max_length=4)
    kernel_size: int = Field(gt=0)
    first_stride: int = Field(default=1, gt=0)
    stride: int = Field(default=1, gt=0)
    pool: int = Field(default=2, gt=0)
    clip_length: int = Field(default=DEFAULT_CLIP_LENGTH, gt=0)
    sample_rate_hz: int = Field(default=DEFAULT_SAMPLE_RATE_HZ, gt=0)
    n_mels: int = Field(default=DEFAULT_N_MELS, gt=0)
    win: int = Field(default=DEFAULT_WIN, gt=0)
    hop: int = Field(default=DEFAULT_HOP, gt=0)

    model_config = ConfigDict(frozen=True)

    @classmethod
    def default(
        cls,
        arch: DetectorArch,
        clip_length: int = DEFAULT_CLIP_LENGTH,
        sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ,
    ) -> "DetectorConfig":
        if arch == DetectorArch.RAW_CNN:
            return cls(
                channels=[16, 32, 32, 64],
                kernel_size=9,
                first_stride=4,
                stride=2,
                clip_length=clip_length,
                sample_rate_hz=sample_rate_hz,
            )
        return cls(
            channels=[8, 16, 32, 32],
            kernel_size=3,
            clip_length=clip_length,
            sample_rate_hz=sample_rate_hz,
        )


def _block_1d(c_in: int, c_out: int, kernel: int, stride: int, pool: int) -> nn.Module:
    return nn.Sequential(
        nn.Conv1d(c_in, c_out, kernel, stride=stride, padding=kernel // 2),
        nn.GroupNorm(1, c_out),
        nn.ReLU(),
        nn.MaxPool1d(pool, ceil_mode=True),
    )


def _block_2d(c_in: int, c_out: int, kernel: int, stride: int, pool: int) -> nn.Module:
    return nn.Sequential(
        nn.Conv2d(c_in, c_out, kernel, stride=stride, padding=kernel // 2),
        nn.GroupNorm(1, c_out),
        nn.ReLU(),
        nn.MaxPool2d(pool, ceil_mode=True),
    )


class RawCNN(nn.Module):
    """(batch, T) waveform -> (batch, 2) logits."""

    def __init__(self, config: DetectorConfig, in_channels: int = 1):
        super().__init__()
        widths = [in_channels] + list(config.channels)
        self.blocks = nn.Sequential(
            *(
                _block_1d(
                    widths[i],
                    widths[i + 1],
                    config.kernel_size,
                    config.first_stride if i == 0 else config.stride,
                    config.pool,
                )
                for i in range(4)
            )
        )
        self.classifier = nn.Linear(widths[-1], 2)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.dim() == 2:
            x = x.unsqueeze(1)
        features = self.blocks(x).mean(dim=-1)
        return self.classifier(features)


class SpecCNN(nn.Module):
    """(batch, T) waveform -> log-mel -> (batch, 2) logits."""

    def __init__(self, config: DetectorConfig):
        super().__init__()
        self.front_end = LogMel(
            config.sample_rate_hz, config.n_mels, config.win, config.hop
        )
        widths = [1] + list(config.channels)
        self.blocks = nn.Sequential(
            *(
                _block_2d(
                    widths[i],
                    widths[i + 1],
                    config.kernel_size,
                    config.first_stride if i == 0 else config.stride,
                    config.pool,
                )
                for i in range(4)
            )
        )
        self.classifier = nn.Linear(widths[-1], 2)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        spec = self.front_end(x).unsqueeze(1)
        features = self.blocks(spec).mean(dim=(-2, -1))
        return self.classifier(features)


def build_network(
    arch: DetectorArch, config: Optional[DetectorConfig] = None
) -> nn.Module:
    config = config or DetectorConfig.default(arch)
    if arch == DetectorArch.RAW_CNN:
        return RawCNN(config)
    return SpecCNN(config)
