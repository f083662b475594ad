"""
Workspace pattern for the artifacts of one output directory.

Provides one place to reach every checkpoint store and artifact directory of
a run, so commands never build paths by hand.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

from shield.exceptions import ConfigError
from shield.store.checkpoints import write_atomic
from shield.store.detector import DetectorStore
from shield.store.gan import GanStore
from shield.store.shield_model import ShieldStore

logger = logging.getLogger(__name__)

EFFECTIVE_CONFIG = "effective_config.json"


class Workspace:
    """
    Stores and directories of one run.

    Stores are created lazily and stamp the run's config hash into every
    checkpoint they write.

    Usage:
        with Workspace(out_dir, config_hash) as ws:
            ws.detectors.save("surrogate-raw_cnn", model)
            ws.attack_gans.load("G1")
    """

    def __init__(self, root: Path, config_hash: Optional[str] = None):
        self.root = Path(root)
        self.config_hash = config_hash
        self._detectors: DetectorStore | None = None
        self._attack_gans: GanStore | None = None
        self._defense_gans: GanStore | None = None
        self._shields: ShieldStore | None = None

    def __enter__(self) -> Workspace:
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ConfigError(
                f"cannot create output directory {self.root}: {e}"
            ) from e
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is not None:
            logger.error(
                "Run failed",
                extra={
                    "json_fields": {"out_dir": str(self.root), "error": str(exc_val)}
                },
            )
        self._close()
        return False  # Don't suppress exceptions

    @property
    def checkpoints_dir(self) -> Path:
        return self.root / "checkpoints"

    @property
    def corpus_dir(self) -> Path:
        return self.root / "corpus"

    @property
    def history_dir(self) -> Path:
        return self.root / "history"

    @property
    def reports_dir(self) -> Path:
        return self.root / "reports"

    @property
    def exports_dir(self) -> Path:
        return self.root / "exports"

    @property
    def detectors(self) -> DetectorStore:
        """Detector store for this workspace."""
        if self._detectors is None:
            self._detectors = DetectorStore(
                self.checkpoints_dir / "detectors", self.config_hash
            )
        return self._detectors

    @property
    def attack_gans(self) -> GanStore:
        """Attack generator store for this workspace."""
        if self._attack_gans is None:
            self._attack_gans = GanStore(
                self.checkpoints_dir / "attack", self.config_hash
            )
        return self._attack_gans

    @property
    def defense_gans(self) -> GanStore:
        """Defense generator store for this workspace."""
        if self._defense_gans is None:
            self._defense_gans = GanStore(
                self.checkpoints_dir / "defense", self.config_hash
            )
        return self._defense_gans

    @property
    def shields(self) -> ShieldStore:
        """SHIELD model store for this workspace."""
        if self._shields is None:
            self._shields = ShieldStore(
                self.checkpoints_dir / "shield", self.config_hash
            )
        return self._shields

    def write_text(self, path: Path | str, text: str) -> Path:
        """Write a text artifact; relative paths resolve against the root."""
        return write_atomic(self.root / path, text.encode("utf-8"))

    def write_effective_config(self, text: str) -> Path:
        return self.write_text(EFFECTIVE_CONFIG, text)

    def _close(self):
        self._detectors = None
        self._attack_gans = None
        self._defense_gans = None
        self._shields = None
