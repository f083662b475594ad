"""
Tests for the command handlers' helpers.
"""

import pytest

from shield.audio.corpus import label_counts
from shield.cli.commands import (
    cmd_eval,
    cmd_export,
    cmd_train,
    corpora_split,
    history_csv,
    load_corpora,
    training_clips,
)
from shield.evaluation.splits import split_of
from shield.exceptions import ConfigError
from shield.models.attack import AttackLossReport
from shield.models.run_config import RunConfig
from shield.models.training import EpochLoss


def _make_config(tmp_path, **update) -> RunConfig:
    overrides = {
        "seed": 2,
        "clip_length": 1024,
        "synthetic_real": 30,
        "synthetic_fake": 20,
        "out_dir": tmp_path,
        **update,
    }
    return RunConfig.load(overrides=overrides, environ={})


class TestHistoryCsv:
    """Tests for history_csv"""

    def test_epoch_losses(self):
        rows = [EpochLoss(epoch=0, steps=3, loss=1 / 3)]
        assert history_csv(rows) == "epoch,steps,loss\n0,3,0.3333333333\n"

    def test_attack_reports(self):
        rows = [
            AttackLossReport(
                epoch=0, step=1, p_loss=0.5, a_loss=-0.25, s_loss=1.0, d_loss=0.75
            )
        ]
        lines = history_csv(rows).splitlines()
        assert lines[0] == "epoch,step,p_loss,a_loss,s_loss,g_loss,d_loss"
        assert lines[1] == "0,1,0.5,-0.25,1,1.25,0.75"

    def test_empty(self):
        assert history_csv([]) == ""


class TestCorpora:
    """Tests for corpus loading and splitting"""

    def test_synthetic_is_rebuilt_identically(self, tmp_path):
        cfg = _make_config(tmp_path)
        a = load_corpora(cfg)["synthetic"]
        b = load_corpora(cfg)["synthetic"]
        assert [c.clip_id for c in a] == [c.clip_id for c in b]
        assert a[0].waveform.samples.tobytes() == b[0].waveform.samples.tobytes()
        assert label_counts(a) == {"real": 30, "fake": 20}

    def test_split_follows_split_seed(self, tmp_path):
        cfg = _make_config(tmp_path)
        test = corpora_split(cfg, load_corpora(cfg), "test")["synthetic"]
        assert all(split_of(c.clip_id, cfg.split_seed) == "test" for c in test)

    def test_training_clips_balanced(self, tmp_path):
        cfg = _make_config(tmp_path)
        counts = label_counts(training_clips(cfg, load_corpora(cfg)))
        assert counts["real"] == counts["fake"]

    def test_training_clips_unbalanced(self, tmp_path):
        cfg = _make_config(tmp_path, balance_classes=False)
        train = corpora_split(cfg, load_corpora(cfg), "train")["synthetic"]
        assert len(training_clips(cfg, load_corpora(cfg))) == len(train)


class TestDispatch:
    """Tests for unknown command arguments"""

    def test_unknown_stage(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown stage"):
            cmd_train("everything", _make_config(tmp_path))

    def test_unknown_grid(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown grid"):
            cmd_eval("everything", _make_config(tmp_path))

    def test_unknown_export(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown export"):
            cmd_export("audio", _make_config(tmp_path))
