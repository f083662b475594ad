"""Detector checkpoints."""

from typing import Any

from shield.detectors.detector import DetectorModel
from shield.detectors.networks import DetectorConfig
from shield.models.training import DetectorArch
from shield.store.base import BaseStore, config_to_json, json_to_config
from shield.store.checkpoints import CheckpointHeader


class DetectorStore(BaseStore[DetectorModel]):
    """Store for surrogate and victim detectors."""

    @property
    def kind(self) -> str:
        return "detector"

    def _to_header(self, model: DetectorModel) -> dict[str, Any]:
        return {
            "arch": model.arch.value,
            "seed": model.seed,
            "config": config_to_json(model.config),
        }

    def _from_header(self, header: CheckpointHeader) -> DetectorModel:
        config = json_to_config(header.config, DetectorConfig)
        return DetectorModel(DetectorArch(header.arch), header.seed, config)

    @staticmethod
    def name_for(role: str, arch: DetectorArch) -> str:
        """Checkpoint name of a detector, e.g. ``surrogate-raw_cnn``."""
        return f"{role}-{DetectorArch(arch).value}"
