"""
Checkpoint file format.

A checkpoint is one file: a UTF-8 JSON header line with sorted keys, a
newline, then every tensor flattened as little-endian float64 in header
order. Headers carry no timestamps, so identical runs write identical bytes.
"""

import json
import os
from collections import OrderedDict
from pathlib import Path
from typing import Any, Optional

import numpy as np
import torch
from pydantic import BaseModel, Field, ValidationError

from shield.config import CHECKPOINT_FORMAT_VERSION
from shield.exceptions import ConfigError, MissingDependencyError

_FLOAT = np.dtype("<f8")


class TensorEntry(BaseModel):
    """Location of one tensor in the data section"""

    name: str
    shape: list[int]
    offset: int = Field(ge=0, description="Offset in float64 elements")
    count: int = Field(ge=0)


class CheckpointHeader(BaseModel):
    """Everything needed to rebuild a model before loading its tensors"""

    format_version: int = Field(default=CHECKPOINT_FORMAT_VERSION)
    kind: str = Field(description="detector, gan or shield")
    arch: str = Field(description="Detector architecture or generator id")
    seed: int
    config: dict[str, Any] = Field(default_factory=dict)
    config_hash: Optional[str] = Field(default=None)
    trained: bool = Field(default=False)
    meta: dict[str, Any] = Field(default_factory=dict)
    tensors: list[TensorEntry] = Field(default_factory=list)


def encode_checkpoint(
    header: CheckpointHeader, state: "OrderedDict[str, torch.Tensor]"
) -> bytes:
    """Serialize a header and a state dict; the header's tensor table is rebuilt."""
    entries, chunks, offset = [], [], 0
    for name, tensor in state.items():
        values = tensor.detach().cpu().double().reshape(-1).numpy()
        entries.append(
            TensorEntry(
                name=name, shape=list(tensor.shape), offset=offset, count=values.size
            )
        )
        chunks.append(values.astype(_FLOAT))
        offset += values.size
    header = header.model_copy(update={"tensors": entries})
    text = json.dumps(
        header.model_dump(mode="json"), sort_keys=True, separators=(",", ":")
    )
    data = np.concatenate(chunks).tobytes() if chunks else b""
    return text.encode("utf-8") + b"\n" + data


def decode_checkpoint(
    blob: bytes, source: str = "<bytes>"
) -> tuple[CheckpointHeader, "OrderedDict[str, torch.Tensor]"]:
    """
    Parse checkpoint bytes into a header and float64 tensors.

    Raises:
        ConfigError: If the bytes are not a valid checkpoint
    """
    line, sep, data = blob.partition(b"\n")
    if not sep:
        raise ConfigError(f"{source} is not a checkpoint: no header line")
    try:
        header = CheckpointHeader.model_validate_json(line)
    except ValidationError as e:
        raise ConfigError(f"{source} has an invalid checkpoint header: {e}") from e
    if header.format_version != CHECKPOINT_FORMAT_VERSION:
        raise ConfigError(
            f"{source} has format version {header.format_version}, "
            f"expected {CHECKPOINT_FORMAT_VERSION}"
        )
    values = np.frombuffer(data, dtype=_FLOAT)
    state: OrderedDict[str, torch.Tensor] = OrderedDict()
    for entry in header.tensors:
        if entry.offset + entry.count > values.size:
            raise ConfigError(f"{source} is truncated at tensor {entry.name}")
        chunk = values[entry.offset : entry.offset + entry.count]
        state[entry.name] = torch.from_numpy(chunk.copy()).reshape(entry.shape)
    return header, state


def write_atomic(path: Path, data: bytes) -> Path:
    """Write through a temporary file so readers never see partial artifacts."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
    return path


def write_checkpoint(
    path: Path, header: CheckpointHeader, state: "OrderedDict[str, torch.Tensor]"
) -> Path:
    return write_atomic(path, encode_checkpoint(header, state))


def read_checkpoint(
    path: Path,
) -> tuple[CheckpointHeader, "OrderedDict[str, torch.Tensor]"]:
    """
    Raises:
        MissingDependencyError: If the file does not exist
        ConfigError: If the file is not a valid checkpoint
    """
    if not path.is_file():
        raise MissingDependencyError(f"missing checkpoint: {path}")
    return decode_checkpoint(path.read_bytes(), str(path))
