"""Generator/discriminator checkpoints."""

from typing import Any

from shield.afgan.bundle import GanBundle
from shield.afgan.discriminator import DiscriminatorConfig
from shield.afgan.generators import GeneratorConfig
from shield.models.clip import GenId
from shield.store.base import BaseStore, config_to_json, json_to_config
from shield.store.checkpoints import CheckpointHeader


class GanStore(BaseStore[GanBundle]):
    """
    Store for bundles of the generator zoo.

    Generator and discriminator tensors are stored separately under the
    ``generator.`` and ``discriminator.`` prefixes.
    """

    @property
    def kind(self) -> str:
        return "gan"

    def _to_header(self, model: GanBundle) -> dict[str, Any]:
        return {
            "arch": model.gen_id.value,
            "seed": model.seed,
            "config": {
                "generator": config_to_json(model.generator_config),
                "discriminator": config_to_json(model.discriminator_config),
            },
        }

    def _from_header(self, header: CheckpointHeader) -> GanBundle:
        return GanBundle(
            GenId(header.arch),
            header.seed,
            json_to_config(header.config["generator"], GeneratorConfig),
            json_to_config(header.config["discriminator"], DiscriminatorConfig),
        )
