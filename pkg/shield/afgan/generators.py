"""
Attack/defense generator architectures.

Every generator is shape-preserving and writes its output as
``tanh(atanh(x) + r(x))``, where ``r`` is the architecture-specific
residual network whose last layer starts at zero. An untrained generator is
therefore a near-identity map, and outputs always stay inside (-1, 1).

- G1: U-Net style encoder-decoder, 4 strided downsampling convolutions and
  4 upsampling stages with skip connections.
- G2: SEGAN style encoder-decoder without skips; a latent noise tensor is
  concatenated at the bottleneck. The noise is seeded from a hash of each
  input clip so the generator stays a pure function of its input.
- G3: operational style stack of 6 residual convolution blocks at full
  resolution.
"""

from typing import Optional

import torch
from pydantic import BaseModel, ConfigDict, Field, model_validator
from torch import nn

from shield.config import DEFAULT_CLIP_LENGTH
from shield.models.clip import GenId
from shield.utils.hash import signal_seed

# Keeps atanh finite at |x| = 1
ATANH_EPS = 1e-6

DOWNSAMPLING_STAGES = 4


class GeneratorConfig(BaseModel):
    """Layer configuration of a generator"""

    gen_id: GenId
    channels: list[int] = Field(min_length=1)
    kernel_size: int = Field(default=9, gt=0)
    z_channels: int = Field(default=8, ge=0, description="Bottleneck noise (G2)")
    res_blocks: int = Field(default=6, ge=1, description="Residual blocks (G3)")
    clip_length: int = Field(default=DEFAULT_CLIP_LENGTH, gt=0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_shape(self) -> "GeneratorConfig":
        if self.gen_id in (GenId.G1, GenId.G2):
            if len(self.channels) != DOWNSAMPLING_STAGES:
                raise ValueError(f"{self.gen_id} needs 4 channel widths")
            if self.clip_length % (2**DOWNSAMPLING_STAGES):
                raise ValueError(
                    f"{self.gen_id} needs a clip length divisible by 16, "
                    f"got {self.clip_length}"
                )
        return self

    @classmethod
    def default(
        cls, gen_id: GenId, clip_length: int = DEFAULT_CLIP_LENGTH
    ) -> "GeneratorConfig":
        if gen_id in (GenId.G1, GenId.G2):
            return cls(
                gen_id=gen_id, channels=[16, 32, 32, 64], clip_length=clip_length
            )
        return cls(gen_id=gen_id, channels=[8], clip_length=clip_length)


def _conv(c_in: int, c_out: int, kernel: int, stride: int = 1) -> nn.Conv1d:
    return nn.Conv1d(c_in, c_out, kernel, stride=stride, padding=kernel // 2)


def _zero_init(layer: nn.Conv1d) -> nn.Conv1d:
    nn.init.zeros_(layer.weight)
    nn.init.zeros_(layer.bias)
    return layer


class WaveGenerator(nn.Module):
    """Base class: (batch, T) -> (batch, T) in (-1, 1)."""

    def __init__(self, config: GeneratorConfig):
        super().__init__()
        self.config = config

    def residual(self, x: torch.Tensor) -> torch.Tensor:
        """(batch, 1, T) -> (batch, 1, T) correction in the atanh domain."""
        raise NotImplementedError

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        squeeze = x.dim() == 2
        if squeeze:
            x = x.unsqueeze(1)
        base = torch.atanh(x.clamp(-1.0 + ATANH_EPS, 1.0 - ATANH_EPS))
        out = torch.tanh(base + self.residual(x))
        return out.squeeze(1) if squeeze else out


class UNetGenerator(WaveGenerator):
    """G1: encoder-decoder with skip connections."""

    def __init__(self, config: GeneratorConfig):
        super().__init__(config)
        k = config.kernel_size
        c = config.channels
        widths = [1] + c
        self.down = nn.ModuleList(
            _conv(widths[i], widths[i + 1], k, stride=2)
            for i in range(DOWNSAMPLING_STAGES)
        )
        # Decoder stage i merges the upsampled signal with encoder output
        # DOWNSAMPLING_STAGES - 2 - i (the raw input for the last stage)
        skips = [c[2], c[1], c[0], 1]
        outs = [c[2], c[1], c[0], c[0]]
        ins = [c[3]] + outs[:-1]
        self.up = nn.ModuleList(
            _conv(ins[i] + skips[i], outs[i], k) for i in range(DOWNSAMPLING_STAGES)
        )
        self.out = _zero_init(_conv(c[0], 1, 1))
        self.act = nn.LeakyReLU(0.2)

    def residual(self, x: torch.Tensor) -> torch.Tensor:
        encoded = [x]
        h = x
        for layer in self.down:
            h = self.act(layer(h))
            encoded.append(h)
        for i, layer in enumerate(self.up):
            h = nn.functional.interpolate(h, scale_factor=2, mode="nearest")
            h = self.act(layer(torch.cat([h, encoded[-2 - i]], dim=1)))
        return self.out(h)


class SEGANGenerator(WaveGenerator):
    """G2: encoder-decoder without skips, latent noise at the bottleneck."""

    def __init__(self, config: GeneratorConfig):
        super().__init__(config)
        k = config.kernel_size
        c = config.channels
        widths = [1] + c
        self.down = nn.ModuleList(
            _conv(widths[i], widths[i + 1], k, stride=2)
            for i in range(DOWNSAMPLING_STAGES)
        )
        dec_in = [c[3] + config.z_channels, c[2], c[1], c[0]]
        dec_out = [c[2], c[1], c[0], c[0]]
        self.up = nn.ModuleList(
            _conv(dec_in[i], dec_out[i], k) for i in range(DOWNSAMPLING_STAGES)
        )
        self.out = _zero_init(_conv(c[0], 1, 1))
        self.act = nn.PReLU()

    def latent(self, x: torch.Tensor) -> torch.Tensor:
        """Per-clip bottleneck noise seeded from the clip's bytes."""
        batch, _, length = x.shape
        steps = length // (2**DOWNSAMPLING_STAGES)
        noise = []
        for row in x[:, 0].detach().cpu().float().numpy():
            generator = torch.Generator().manual_seed(signal_seed(row))
            noise.append(
                torch.randn(self.config.z_channels, steps, generator=generator)
            )
        return torch.stack(noise).to(dtype=x.dtype, device=x.device)

    def residual(self, x: torch.Tensor) -> torch.Tensor:
        h = x
        for layer in self.down:
            h = self.act(layer(h))
        if self.config.z_channels:
            h = torch.cat([h, self.latent(x)], dim=1)
        for layer in self.up:
            h = nn.functional.interpolate(h, scale_factor=2, mode="nearest")
            h = self.act(layer(h))
        return self.out(h)


class ResidualBlock(nn.Module):
    def __init__(self, channels: int, kernel: int):
        super().__init__()
        self.conv1 = _conv(channels, channels, kernel)
        self.conv2 = _conv(channels, channels, kernel)
        self.act = nn.Tanh()

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x + self.conv2(self.act(self.conv1(x)))


class ResidualGenerator(WaveGenerator):
    """G3: residual convolution stack, no down/up-sampling."""

    def __init__(self, config: GeneratorConfig):
        super().__init__(config)
        width = config.channels[0]
        k = config.kernel_size
        self.inp = _conv(1, width, k)
        self.blocks = nn.Sequential(
            *(ResidualBlock(width, k) for _ in range(config.res_blocks))
        )
        self.out = _zero_init(_conv(width, 1, k))

    def residual(self, x: torch.Tensor) -> torch.Tensor:
        return self.out(self.blocks(torch.tanh(self.inp(x))))


GENERATORS: dict[GenId, type[WaveGenerator]] = {
    GenId.G1: UNetGenerator,
    GenId.G2: SEGANGenerator,
    GenId.G3: ResidualGenerator,
}


def build_generator(
    gen_id: GenId, config: Optional[GeneratorConfig] = None
) -> WaveGenerator:
    gen_id = GenId(gen_id)
    config = config or GeneratorConfig.default(gen_id)
    if config.gen_id != gen_id:
        raise ValueError(f"config is for {config.gen_id}, requested {gen_id}")
    return GENERATORS[gen_id](config)
