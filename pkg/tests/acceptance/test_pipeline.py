"""
Miniature end-to-end reproduction on the synthetic corpus.

Runs every stage at full clip length with the default epoch counts, so it
takes several minutes on a laptop CPU. Run with ``pytest -m manual``.
"""

import json

import pytest

from shield.afgan.bundle import attack_clips
from shield.audio.corpus import by_label
from shield.cli.commands import cmd_eval, cmd_export, cmd_train, load_corpora
from shield.evaluation.grids import run_correlation_report
from shield.evaluation.report_io import read_report_rows
from shield.evaluation.splits import split_clips
from shield.models.clip import ClipLabel, GenId
from shield.models.run_config import RunConfig
from shield.store.workspace import Workspace

pytestmark = pytest.mark.manual

GEN_IDS = [GenId.G1, GenId.G2, GenId.G3]


@pytest.fixture(scope="module")
def cfg(tmp_path_factory) -> RunConfig:
    out = tmp_path_factory.mktemp("acceptance")
    return RunConfig.load(overrides={"seed": 0, "out_dir": out, "jobs": 4}, environ={})


@pytest.fixture(scope="module")
def trained(cfg) -> RunConfig:
    for stage in ("detector", "attack", "defense", "shield"):
        cmd_train(stage, cfg)
    return cfg


def _report(cfg: RunConfig, grid: str) -> dict[tuple[str, str, str], float]:
    summary = cmd_eval(grid, cfg, echo=False)
    rows = read_report_rows(cfg.out_dir / "reports" / f"{grid}.csv")
    assert summary["rows"] == len(rows)
    return {(r.setting, r.corpus, r.metric): r.value for r in rows}


class TestAcceptance:
    """Qualitative results of the full pipeline"""

    def test_baseline_separability(self, trained):
        values = _report(trained, "baseline")
        for arch in ("raw_cnn", "spec_cnn"):
            assert values[(f"victim-{arch}", "synthetic", "acc")] >= 0.95

    def test_attack_efficacy(self, trained):
        values = _report(trained, "attack")
        for gen in GEN_IDS:
            average = f"average/{gen.value}"
            assert values[(average, "synthetic", "acc_attacked_fakes")] <= 0.60
            for arch in ("raw_cnn", "spec_cnn"):
                setting = f"victim-{arch}/{gen.value}"
                assert values[(setting, "synthetic", "l1_distortion")] <= 0.1

    def test_defense_efficacy(self, trained):
        values = _report(trained, "defense")
        for gen in GEN_IDS:
            match = f"{gen.value}->{gen.value}"
            assert values[(match, "synthetic", "acc_joint")] >= 0.90
        assert values[("mismatch/avg", "synthetic", "acc_joint")] >= 0.85

    def test_correlation_ordering(self, trained):
        corpora = load_corpora(trained)
        parts = split_clips(corpora["synthetic"], trained.split_seed)
        held_out = parts["val"] + parts["test"]
        assert len(held_out) >= 200
        with Workspace(trained.out_dir, trained.config_hash()) as ws:
            defense = ws.defense_gans.load("G1")
            attack = ws.attack_gans.load("G1")
        attacked = attack_clips(attack, by_label(held_out, ClipLabel.FAKE), jobs=4)
        report = run_correlation_report(
            defense, by_label(held_out, ClipLabel.REAL), attacked
        )
        assert report.value("verdict", "synthetic", "attacked_gt_real") == 1.0
        assert report.metadata.extra["gap"] > 0

    def test_embedding_separation(self, trained):
        cmd_export("embeddings", trained)
        for gen in GEN_IDS:
            path = trained.out_dir / "exports" / "embeddings" / f"{gen}-{gen}.json"
            separation = json.loads(path.read_text())
            assert separation["silhouette"] > 0
            assert separation["intra_distance"] < separation["inter_distance"]

    def test_reruns_are_byte_identical(self, trained, tmp_path):
        first = (trained.out_dir / "reports" / "baseline.csv").read_bytes()
        cmd_eval("baseline", trained, echo=False)
        assert (trained.out_dir / "reports" / "baseline.csv").read_bytes() == first

        rerun = trained.model_copy(update={"out_dir": tmp_path})
        cmd_train("detector", rerun)
        for path in (trained.out_dir / "checkpoints" / "detectors").glob("*.ckpt"):
            twin = tmp_path / "checkpoints" / "detectors" / path.name
            assert twin.read_bytes() == path.read_bytes()
