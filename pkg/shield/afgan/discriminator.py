"""Waveform discriminator shared by all attack generators."""

import torch
from pydantic import BaseModel, ConfigDict, Field
from torch import nn


class DiscriminatorConfig(BaseModel):
    """Strided 1-D convolution stack"""

    channels: list[int] = Field(default=[8, 16, 32, 32], min_length=1)
    kernel_size: int = Field(default=15, gt=0)
    stride: int = Field(default=4, gt=0)

    model_config = ConfigDict(frozen=True)


class WaveDiscriminator(nn.Module):
    """(batch, T) waveform -> (batch,) probability that the clip is real."""

    def __init__(self, config: DiscriminatorConfig):
        super().__init__()
        self.config = config
        widths = [1] + list(config.channels)
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
                nn.LeakyReLU(0.2),
            ]
        self.features = nn.Sequential(*layers)
        self.classifier = nn.Linear(widths[-1], 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.dim() == 2:
            x = x.unsqueeze(1)
        pooled = self.features(x).mean(dim=-1)
        return torch.sigmoid(self.classifier(pooled)).squeeze(-1)
