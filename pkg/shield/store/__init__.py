"""
Checkpoint persistence.

This package provides the checkpoint file format, one store per model kind
and the Workspace that groups them for an output directory.
"""

from shield.store.base import BaseStore
from shield.store.checkpoints import (
    CheckpointHeader,
    decode_checkpoint,
    encode_checkpoint,
    read_checkpoint,
    write_checkpoint,
)
from shield.store.detector import DetectorStore
from shield.store.gan import GanStore
from shield.store.shield_model import ShieldStore
from shield.store.workspace import Workspace

__all__ = [
    "BaseStore",
    "CheckpointHeader",
    "DetectorStore",
    "GanStore",
    "ShieldStore",
    "Workspace",
    "decode_checkpoint",
    "encode_checkpoint",
    "read_checkpoint",
    "write_checkpoint",
]
