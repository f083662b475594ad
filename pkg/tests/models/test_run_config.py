"""Tests for the run configuration."""

import json

import pytest

from shield.exceptions import ConfigError
from shield.models.clip import GenId
from shield.models.run_config import RunConfig
from shield.models.training import DetectorArch


class TestRunConfigLoad:
    def test_defaults(self):
        cfg = RunConfig.load(environ={})
        assert cfg.seed == 0
        assert cfg.selected_gen_ids == [GenId.G1, GenId.G2, GenId.G3]
        assert cfg.corpus_names() == ["synthetic"]

    def test_precedence(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"seed": 4, "jobs": 2, "out_dir": "from-file"}))
        cfg = RunConfig.load(path, {"seed": 9, "jobs": None}, environ={})
        assert cfg.seed == 9
        assert cfg.jobs == 2
        assert str(cfg.out_dir) == "from-file"

    def test_environment_sets_output_root(self, tmp_path):
        env = {"SHIELD_OUTPUT_ROOT": str(tmp_path / "env")}
        assert RunConfig.load(environ=env).out_dir == tmp_path / "env"
        flagged = RunConfig.load(overrides={"out_dir": tmp_path / "flag"}, environ=env)
        assert flagged.out_dir == tmp_path / "flag"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            RunConfig.load(tmp_path / "absent.json", environ={})

    def test_bad_json(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text("{seed: 1")
        with pytest.raises(ConfigError, match="not valid JSON"):
            RunConfig.load(path, environ={})

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"sead": 1}))
        with pytest.raises(ConfigError, match="invalid run configuration"):
            RunConfig.load(path, environ={})

    def test_wrong_schema_version(self):
        with pytest.raises(ConfigError):
            RunConfig.load(overrides={"schema_version": 2}, environ={})


class TestRunConfigValidation:
    def test_no_corpus(self):
        with pytest.raises(ConfigError, match="no corpus"):
            RunConfig.load(overrides={"include_synthetic": False}, environ={})

    def test_missing_manifest(self, tmp_path):
        overrides = {"manifests": {"asvspoof": str(tmp_path / "absent.csv")}}
        with pytest.raises(ConfigError, match="asvspoof"):
            RunConfig.load(overrides=overrides, environ={})

    def test_duplicate_corpus_name(self, tmp_path):
        manifest = tmp_path / "m.csv"
        manifest.write_text("path,label,source\n")
        overrides = {"manifests": {"synthetic": str(manifest)}}
        with pytest.raises(ConfigError, match="used twice"):
            RunConfig.load(overrides=overrides, environ={})

    def test_selection_outside_zoo(self):
        overrides = {"gen_ids": ["G3"], "attack_gen": "G1"}
        with pytest.raises(ConfigError, match="attack_gen"):
            RunConfig.load(overrides=overrides, environ={})

    def test_clip_length_for_unet(self):
        with pytest.raises(ConfigError, match="divisible by 16"):
            RunConfig.load(overrides={"clip_length": 1000}, environ={})
        cfg = RunConfig.load(
            overrides={"clip_length": 1000, "gen_ids": ["G3"]}, environ={}
        )
        assert cfg.clip_length == 1000

    def test_gen_selection(self):
        cfg = RunConfig.load(overrides={"gen": "G2"}, environ={})
        assert cfg.selected_gen_ids == [GenId.G2]


class TestRunConfigHash:
    def test_runtime_keys_do_not_change_hash(self, tmp_path):
        base = RunConfig.load(environ={})
        runtime = RunConfig.load(
            overrides={
                "out_dir": tmp_path,
                "jobs": 8,
                "progress": True,
                "allow_mixed": True,
                "gen": "G1",
                "attack_gen": "G2",
                "defense_gen": "G3",
                "settings": "match",
            },
            environ={},
        )
        assert base.config_hash() == runtime.config_hash()

    def test_artifact_keys_change_hash(self):
        base = RunConfig.load(environ={})
        assert RunConfig.load(overrides={"seed": 1}, environ={}).config_hash() != (
            base.config_hash()
        )
        assert RunConfig.load(overrides={"margin": 0.2}, environ={}).config_hash() != (
            base.config_hash()
        )

    def test_effective_json_round_trips(self, tmp_path):
        cfg = RunConfig.load(overrides={"seed": 3, "jobs": 2}, environ={})
        path = tmp_path / "effective.json"
        path.write_text(cfg.effective_json())
        assert RunConfig.load(path, environ={}) == cfg


class TestRunConfigSeeds:
    def test_streams_are_distinct(self):
        cfg = RunConfig.load(environ={})
        seeds = [
            cfg.detector_seed("surrogate", DetectorArch.RAW_CNN),
            cfg.detector_seed("victim", DetectorArch.RAW_CNN),
            cfg.detector_seed("surrogate", DetectorArch.SPEC_CNN),
            cfg.gan_seed(GenId.G1),
            cfg.gan_seed(GenId.G1, role="defense"),
            cfg.gan_seed(GenId.G2),
            cfg.shield_seed(GenId.G1),
            cfg.split_seed,
        ]
        assert len(set(seeds)) == len(seeds)

    def test_seed_derivation_is_stable(self):
        a = RunConfig.load(overrides={"seed": 5}, environ={})
        b = RunConfig.load(overrides={"seed": 5}, environ={})
        assert a.shield_seed(GenId.G3) == b.shield_seed(GenId.G3)
        assert a.gan_train_config(GenId.G3).seed == a.gan_seed(GenId.G3)

    def test_train_configs(self):
        cfg = RunConfig.load(
            overrides={"shield_epochs": 3, "shield_head_epochs": 5}, environ={}
        )
        assert cfg.shield_train_config(GenId.G1).epochs == 3
        assert cfg.shield_head_config(GenId.G1).epochs == 5
        assert cfg.loss_weights().perceptual == 1.0
