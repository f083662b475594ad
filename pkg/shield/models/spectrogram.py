import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from shield.config import DEFAULT_HOP, DEFAULT_N_MELS, DEFAULT_WIN


class Spectrogram(BaseModel):
    """Log-mel spectrogram, mel bands x frames"""

    bins: np.ndarray = Field(description="log10 mel magnitudes, shape (n_mels, frames)")
    n_mels: int = Field(default=DEFAULT_N_MELS, gt=0)
    hop: int = Field(default=DEFAULT_HOP, gt=0)
    win: int = Field(default=DEFAULT_WIN, gt=0)

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("bins", mode="before")
    @classmethod
    def _coerce_bins(cls, value) -> np.ndarray:
        array = np.array(value, dtype=np.float64)
        if array.ndim != 2:
            raise ValueError(f"spectrogram bins must be 2-D, got {array.ndim}-D")
        if not np.all(np.isfinite(array)):
            raise ValueError("spectrogram contains non-finite values")
        array.flags.writeable = False
        return array

    @property
    def frames(self) -> int:
        return int(self.bins.shape[1])
