"""
Run configuration.

A flat, typed key-value document with an explicit schema version. Values
come from a JSON file, command-line flags override them, and the
SHIELD_OUTPUT_ROOT environment variable overrides the output directory when
no ``--out`` flag is given.
"""

import json
import os
from pathlib import Path
from typing import Any, Literal, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from shield.config import (
    DEFAULT_CLIP_LENGTH,
    DEFAULT_SAMPLE_RATE_HZ,
    OUTPUT_ROOT_ENV,
    RUN_CONFIG_SCHEMA_VERSION,
)
from shield.exceptions import ConfigError
from shield.models.attack import DiscriminatorLossForm, LossWeights
from shield.models.clip import GenId
from shield.models.pair import ConcatAxis
from shield.models.report import DefenseSetting
from shield.models.training import DetectorArch, TrainConfig
from shield.utils.hash import canonical_json_hash
from shield.utils.seeding import derive_seed

# Keys that never change artifact bytes and stay out of the config hash
RUNTIME_KEYS = {
    "out_dir",
    "jobs",
    "allow_mixed",
    "progress",
    "gen",
    "settings",
    "attack_gen",
    "defense_gen",
}

# Seed streams of the training stages
_SURROGATE_STREAM = 1
_VICTIM_STREAM = 2
_ATTACK_STREAM = 3
_DEFENSE_STREAM = 4
_SHIELD_STREAM = 5
_SPLIT_STREAM = 6

_GEN_INDEX = {GenId.G1: 1, GenId.G2: 2, GenId.G3: 3}
_ARCH_INDEX = {DetectorArch.RAW_CNN: 1, DetectorArch.SPEC_CNN: 2}


class RunConfig(BaseModel):
    """Configuration of one experiment run"""

    schema_version: Literal[1] = Field(default=RUN_CONFIG_SCHEMA_VERSION)
    seed: int = Field(default=0, description="Global seed")
    out_dir: Path = Field(default=Path("runs/default"), description="Output directory")
    sample_rate_hz: int = Field(default=DEFAULT_SAMPLE_RATE_HZ, gt=0)
    clip_length: int = Field(default=DEFAULT_CLIP_LENGTH, gt=0)

    # Corpus
    include_synthetic: bool = Field(default=True)
    synthetic_real: int = Field(default=1000, ge=1)
    synthetic_fake: int = Field(default=1000, ge=1)
    synthetic_name: str = Field(default="synthetic", min_length=1)
    manifests: dict[str, Path] = Field(
        default_factory=dict, description="Corpus name -> manifest CSV"
    )
    balance_classes: bool = Field(default=True)

    # Detectors
    surrogate_archs: list[DetectorArch] = Field(
        default=[DetectorArch.RAW_CNN, DetectorArch.SPEC_CNN], min_length=1
    )
    victim_archs: list[DetectorArch] = Field(
        default=[DetectorArch.RAW_CNN, DetectorArch.SPEC_CNN], min_length=1
    )
    detector_epochs: int = Field(default=10, ge=0)
    detector_batch_size: int = Field(default=32, ge=1)
    detector_learning_rate: float = Field(default=1e-4, gt=0.0)

    # Generator zoo
    gen_ids: list[GenId] = Field(default=[GenId.G1, GenId.G2, GenId.G3], min_length=1)
    gan_epochs: int = Field(default=15, ge=0)
    gan_batch_size: int = Field(default=32, ge=1)
    gan_learning_rate: float = Field(default=1e-4, gt=0.0)
    d_loss_form: DiscriminatorLossForm = Field(default=DiscriminatorLossForm.STANDARD)
    perceptual_weight: float = Field(default=1.0, ge=0.0)
    adversarial_weight: float = Field(default=1.0, ge=0.0)
    surrogate_weight: float = Field(default=1.0, ge=0.0)
    defense_from_attack_zoo: bool = Field(
        default=True,
        description="Reuse attack-trained generators as defense generators",
    )

    # SHIELD
    shield_epochs: int = Field(default=20, ge=0, description="Triplet epochs")
    shield_head_epochs: int = Field(default=20, ge=0, description="Head epochs")
    shield_batch_size: int = Field(default=32, ge=1)
    shield_learning_rate: float = Field(default=1e-4, gt=0.0)
    embedding_dim: int = Field(default=128, gt=0)
    margin: float = Field(default=0.0, ge=0.0)
    squared_distance: bool = Field(default=True)
    concat_axis: ConcatAxis = Field(default=ConcatAxis.TIME)
    include_plain_fakes: bool = Field(default=False)

    # Selections
    gen: Optional[GenId] = Field(
        default=None, description="Restrict a command to one generator"
    )
    attack_gen: Optional[GenId] = Field(default=None)
    defense_gen: Optional[GenId] = Field(default=None)
    settings: DefenseSetting = Field(default=DefenseSetting.BOTH)

    # Runtime
    jobs: int = Field(default=1, ge=1)
    allow_mixed: bool = Field(default=False)
    progress: bool = Field(default=False)

    model_config = ConfigDict(extra="forbid", frozen=True)

    @model_validator(mode="after")
    def _check_references(self) -> "RunConfig":
        if not self.include_synthetic and not self.manifests:
            raise ValueError("no corpus: enable include_synthetic or list manifests")
        for name, path in self.manifests.items():
            if not path.is_file():
                raise ValueError(f"manifest for corpus {name} not found: {path}")
        if self.include_synthetic and self.synthetic_name in self.manifests:
            raise ValueError(f"corpus name {self.synthetic_name} is used twice")
        for field in ("gen", "attack_gen", "defense_gen"):
            selected = getattr(self, field)
            if selected is not None and selected not in self.gen_ids:
                raise ValueError(f"{field} {selected} is not in gen_ids")
        if {GenId.G1, GenId.G2} & set(self.gen_ids) and self.clip_length % 16:
            raise ValueError("G1 and G2 need a clip length divisible by 16")
        return self

    @property
    def selected_gen_ids(self) -> list[GenId]:
        if self.gen is not None:
            return [self.gen]
        return sorted(set(self.gen_ids))

    def corpus_names(self) -> list[str]:
        names = sorted(self.manifests)
        if self.include_synthetic:
            names.append(self.synthetic_name)
        return sorted(names)

    def _train_config(
        self, epochs: int, batch_size: int, learning_rate: float, seed: int
    ) -> TrainConfig:
        return TrainConfig(
            epochs=epochs,
            batch_size=batch_size,
            learning_rate=learning_rate,
            seed=seed,
            progress=self.progress,
        )

    def detector_seed(self, role: str, arch: DetectorArch) -> int:
        stream = _SURROGATE_STREAM if role == "surrogate" else _VICTIM_STREAM
        return derive_seed(self.seed, stream, _ARCH_INDEX[DetectorArch(arch)])

    def detector_train_config(self, role: str, arch: DetectorArch) -> TrainConfig:
        return self._train_config(
            self.detector_epochs,
            self.detector_batch_size,
            self.detector_learning_rate,
            self.detector_seed(role, arch),
        )

    def gan_seed(self, gen_id: GenId, role: str = "attack") -> int:
        stream = _ATTACK_STREAM if role == "attack" else _DEFENSE_STREAM
        return derive_seed(self.seed, stream, _GEN_INDEX[GenId(gen_id)])

    def gan_train_config(self, gen_id: GenId, role: str = "attack") -> TrainConfig:
        return self._train_config(
            self.gan_epochs,
            self.gan_batch_size,
            self.gan_learning_rate,
            self.gan_seed(gen_id, role),
        )

    def shield_seed(self, gen_id: GenId) -> int:
        return derive_seed(self.seed, _SHIELD_STREAM, _GEN_INDEX[GenId(gen_id)])

    def shield_train_config(self, gen_id: GenId) -> TrainConfig:
        return self._train_config(
            self.shield_epochs,
            self.shield_batch_size,
            self.shield_learning_rate,
            self.shield_seed(gen_id),
        )

    def shield_head_config(self, gen_id: GenId) -> TrainConfig:
        return self._train_config(
            self.shield_head_epochs,
            self.shield_batch_size,
            self.shield_learning_rate,
            derive_seed(self.shield_seed(gen_id), 1),
        )

    @property
    def split_seed(self) -> int:
        return derive_seed(self.seed, _SPLIT_STREAM)

    def loss_weights(self) -> LossWeights:
        return LossWeights(
            perceptual=self.perceptual_weight,
            adversarial=self.adversarial_weight,
            surrogate=self.surrogate_weight,
        )

    def artifact_fields(self) -> dict[str, Any]:
        """Fields that determine artifact bytes."""
        data = self.model_dump(mode="json")
        return {key: value for key, value in data.items() if key not in RUNTIME_KEYS}

    def config_hash(self) -> str:
        return canonical_json_hash(self.artifact_fields())

    def effective_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"

    @classmethod
    def load(
        cls,
        path: Optional[Path] = None,
        overrides: Optional[Mapping[str, Any]] = None,
        environ: Optional[Mapping[str, str]] = None,
    ) -> "RunConfig":
        """
        Build the effective configuration.

        Precedence: flags (``overrides`` entries that are not None), then the
        output-root environment variable for ``out_dir``, then the file, then
        defaults.

        Raises:
            ConfigError: If the file is unreadable or a value is invalid
        """
        data: dict[str, Any] = {}
        if path is not None:
            try:
                data = json.loads(Path(path).read_text())
            except FileNotFoundError as e:
                raise ConfigError(f"config file not found: {path}") from e
            except json.JSONDecodeError as e:
                raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
            if not isinstance(data, dict):
                raise ConfigError(f"config file {path} must hold a JSON object")

        environ = os.environ if environ is None else environ
        overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
        if "out_dir" not in overrides and environ.get(OUTPUT_ROOT_ENV):
            data["out_dir"] = environ[OUTPUT_ROOT_ENV]
        data.update(overrides)

        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"invalid run configuration: {e}") from e
