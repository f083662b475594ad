"""
Base checkpoint store with common save/load operations.

Provides generic persistence that is inherited by the detector, generator and
SHIELD stores.
"""

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Generic, Optional, TypeVar

import torch
from pydantic import BaseModel
from torch import nn

from shield.exceptions import ConfigError
from shield.store.checkpoints import CheckpointHeader, read_checkpoint, write_checkpoint

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=nn.Module)

CHECKPOINT_SUFFIX = ".ckpt"


def config_to_json(config: BaseModel) -> dict:
    """Serialize a layer configuration for the checkpoint header."""
    return config.model_dump(mode="json")


def json_to_config(data: dict, config_class: type[BaseModel]) -> BaseModel:
    """Deserialize a layer configuration from a checkpoint header."""
    return config_class.model_validate(data)


class BaseStore(ABC, Generic[ModelT]):
    """
    Base store for one kind of model under a directory.

    Subclasses must implement:
    - kind property: Header kind tag
    - _to_header: Describe a model (arch, seed, config, meta)
    - _from_header: Build an untrained model from a header
    """

    def __init__(self, root: Path, config_hash: Optional[str] = None):
        self.root = Path(root)
        self.config_hash = config_hash

    @property
    @abstractmethod
    def kind(self) -> str:
        """Kind tag written into every header."""
        pass

    @abstractmethod
    def _to_header(self, model: ModelT) -> dict[str, Any]:
        """Header fields (arch, seed, config, meta) of a model."""
        pass

    @abstractmethod
    def _from_header(self, header: CheckpointHeader) -> ModelT:
        """Build a model skeleton matching a header."""
        pass

    def path_for(self, name: str) -> Path:
        return self.root / f"{name}{CHECKPOINT_SUFFIX}"

    def exists(self, name: str) -> bool:
        return self.path_for(name).is_file()

    def save(self, name: str, model: ModelT) -> Path:
        """
        Write a model checkpoint.

        Args:
            name: Checkpoint name inside the store
            model: Model to persist

        Returns:
            Path of the written file
        """
        header = CheckpointHeader(
            kind=self.kind,
            config_hash=self.config_hash,
            trained=bool(getattr(model, "trained", False)),
            **self._to_header(model),
        )
        path = write_checkpoint(self.path_for(name), header, model.state_dict())
        logger.info(
            "Saved checkpoint",
            extra={"json_fields": {"kind": self.kind, "path": str(path)}},
        )
        return path

    def header(self, name: str) -> CheckpointHeader:
        header, _ = read_checkpoint(self.path_for(name))
        return header

    def load(self, name: str, check_hash: bool = False) -> ModelT:
        """
        Rebuild a model from its checkpoint.

        Args:
            name: Checkpoint name inside the store
            check_hash: Refuse checkpoints written under another config hash

        Raises:
            MissingDependencyError: If the checkpoint does not exist
            ConfigError: If the file is not a checkpoint of this kind, or its
                config hash differs while ``check_hash`` is set
        """
        path = self.path_for(name)
        header, state = read_checkpoint(path)
        if header.kind != self.kind:
            raise ConfigError(f"{path} holds a {header.kind}, expected {self.kind}")
        if check_hash and header.config_hash != self.config_hash:
            raise ConfigError(
                f"{path} was written under config {header.config_hash}, "
                f"current config is {self.config_hash}; pass --allow-mixed to use it"
            )
        model = self._from_header(header)
        dtype = next(iter(model.parameters()), torch.zeros(0)).dtype
        model.load_state_dict({k: v.to(dtype) for k, v in state.items()})
        model.trained = header.trained
        return model.eval()
