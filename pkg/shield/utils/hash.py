"""Hash utility functions for Shield."""

import hashlib
import json
from typing import Any

import numpy as np


def compute_sha256(data: bytes) -> str:
    """
    Compute SHA-256 hash of data.

    Args:
        data: Raw bytes to hash

    Returns:
        Hexadecimal SHA-256 hash string
    """
    return hashlib.sha256(data).hexdigest()


def hash_to_int(text: str, bits: int = 63) -> int:
    """Map a string to a non-negative integer via SHA-256."""
    digest = compute_sha256(text.encode("utf-8"))
    return int(digest, 16) & ((1 << bits) - 1)


def signal_seed(samples: np.ndarray) -> int:
    """
    Derive a torch/numpy seed from the exact bytes of a signal.

    Used to make per-clip latent noise a pure function of the clip.
    """
    data = np.ascontiguousarray(samples, dtype="<f4").tobytes()
    return int(compute_sha256(data)[:15], 16)


def canonical_json_hash(payload: dict[str, Any]) -> str:
    """Hash a JSON-serialisable dict independent of key order."""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return compute_sha256(text.encode("utf-8"))
