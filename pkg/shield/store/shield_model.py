"""SHIELD model checkpoints."""

from typing import Any

from shield.defense.embedder import ShieldConfig, ShieldModel
from shield.models.clip import GenId
from shield.store.base import BaseStore, config_to_json, json_to_config
from shield.store.checkpoints import CheckpointHeader


class ShieldStore(BaseStore[ShieldModel]):
    """Store for SHIELD models, named after their defense generator."""

    @property
    def kind(self) -> str:
        return "shield"

    def _to_header(self, model: ShieldModel) -> dict[str, Any]:
        return {
            "arch": model.defense_gen_id.value,
            "seed": model.seed,
            "config": config_to_json(model.config),
        }

    def _from_header(self, header: CheckpointHeader) -> ShieldModel:
        config = json_to_config(header.config, ShieldConfig)
        return ShieldModel(header.seed, config, GenId(header.arch))
