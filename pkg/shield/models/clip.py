from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from shield.config import DEFAULT_SAMPLE_RATE_HZ


class ClipLabel(StrEnum):
    """Class of an audio clip"""

    REAL = "real"  # Genuine recording
    FAKE = "fake"  # Deepfake, not attacked
    ATTACKED = "attacked"  # Deepfake passed through an attack generator


class GenId(StrEnum):
    """Generator architectures of the GAN zoo"""

    G1 = "G1"  # U-Net style encoder-decoder with skips
    G2 = "G2"  # SEGAN style encoder-decoder with bottleneck noise
    G3 = "G3"  # Residual stack without resampling


class Waveform(BaseModel):
    """
    Fixed-length mono audio clip.

    Samples are stored as a read-only float32 array. Every sample is finite
    and lies in [-1, 1].
    """

    samples: np.ndarray = Field(description="Amplitudes in [-1, 1]")
    sample_rate_hz: int = Field(
        default=DEFAULT_SAMPLE_RATE_HZ, gt=0, description="Sample rate in Hz"
    )

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("samples", mode="before")
    @classmethod
    def _coerce_samples(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.float32).reshape(-1)
        if array.size == 0:
            raise ValueError("waveform must contain at least one sample")
        if not np.all(np.isfinite(array)):
            raise ValueError("waveform contains NaN or Inf samples")
        peak = float(np.max(np.abs(array)))
        if peak > 1.0:
            raise ValueError(f"waveform peak {peak:.6f} exceeds 1.0")
        array.flags.writeable = False
        return array

    @property
    def length(self) -> int:
        """Sample count T."""
        return int(self.samples.shape[0])

    @property
    def duration_s(self) -> float:
        return self.length / self.sample_rate_hz


class LabeledClip(BaseModel):
    """Waveform with class label and provenance"""

    clip_id: str = Field(description="Stable identifier, used for splits and exports")
    waveform: Waveform = Field(description="Audio content")
    label: ClipLabel = Field(description="Clip class")
    source: str = Field(description="Corpus name or attack generator id")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _attacked_names_generator(self) -> "LabeledClip":
        if self.label == ClipLabel.ATTACKED and self.source not in set(GenId):
            raise ValueError(
                f"attacked clip {self.clip_id!r} must name an attack generator "
                f"as source, got {self.source!r}"
            )
        return self


class ManifestEntry(BaseModel):
    """One row of a corpus manifest"""

    path: str = Field(description="Audio path relative to the corpus root")
    label: ClipLabel = Field(description="Clip class")
    source: str = Field(description="Provenance tag")


class Manifest(BaseModel):
    """Parsed corpus manifest"""

    entries: list[ManifestEntry] = Field(default_factory=list)
