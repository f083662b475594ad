"""
Command handlers.

These handlers contain the work of each CLI subcommand. They take a validated
RunConfig, write their artifacts through a Workspace and return a summary
dict. Argument parsing and exit codes live in ``shield.cli.main``.
"""

import csv
import io
import json
import logging
from collections.abc import Sequence
from typing import Optional

from pydantic import BaseModel

from shield.afgan.bundle import GanBundle, attack_clips, build_gan
from shield.afgan.trainer import train_attack
from shield.audio.corpus import by_label, merge_corpora, synthetic_corpus
from shield.audio.manifest import load_manifest, write_corpus
from shield.defense.embedder import ShieldConfig, ShieldModel, build_shield, embed_pairs
from shield.defense.export import embedding_separation, write_embeddings_csv
from shield.defense.pairing import make_pairs
from shield.defense.trainer import train_shield
from shield.detectors.detector import DetectorModel, build_detector
from shield.detectors.networks import DetectorConfig
from shield.detectors.trainer import train_detector
from shield.dsp.plot import export_spectrogram_plot
from shield.dsp.spectrogram import log_mel_spectrogram
from shield.evaluation.grids import (
    run_attack_grid,
    run_baseline_grid,
    run_correlation_report,
    run_defense_grid,
)
from shield.evaluation.report_io import format_value, render_table, write_report
from shield.evaluation.splits import split_clips
from shield.exceptions import ConfigError, MissingDependencyError
from shield.models.clip import ClipLabel, GenId, LabeledClip
from shield.models.pair import PairedClip
from shield.models.report import EvalGrid, EvalReport
from shield.models.run_config import RunConfig
from shield.models.training import DetectorArch
from shield.store.detector import DetectorStore
from shield.store.workspace import Workspace

logger = logging.getLogger(__name__)

Corpora = dict[str, list[LabeledClip]]

TRAIN_STAGES = ("detector", "attack", "defense", "shield")
EXPORT_KINDS = ("spectrogram", "embeddings")


# =============================================================================
# Corpora
# =============================================================================


def load_corpora(cfg: RunConfig) -> Corpora:
    """
    Every configured corpus, keyed by name.

    The synthetic corpus is always rebuilt from the config seed, so it never
    depends on a previous ``gen-corpus`` run. Manifest paths resolve against
    the manifest's own directory.
    """
    corpora: Corpora = {}
    if cfg.include_synthetic:
        corpora[cfg.synthetic_name] = synthetic_corpus(
            cfg.seed,
            cfg.synthetic_real,
            cfg.synthetic_fake,
            sample_rate_hz=cfg.sample_rate_hz,
            clip_length=cfg.clip_length,
            source=cfg.synthetic_name,
        )
    for name, path in sorted(cfg.manifests.items()):
        corpora[name] = load_manifest(
            path.parent, path, cfg.sample_rate_hz, cfg.clip_length
        )
    return corpora


def corpora_split(cfg: RunConfig, corpora: Corpora, split: str) -> Corpora:
    """One split of every corpus."""
    return {
        name: split_clips(clips, cfg.split_seed)[split]
        for name, clips in corpora.items()
    }


def training_clips(cfg: RunConfig, corpora: Corpora) -> list[LabeledClip]:
    """Training split of all corpora merged into one set."""
    return merge_corpora(corpora_split(cfg, corpora, "train"), cfg.balance_classes)


# =============================================================================
# Helpers
# =============================================================================


def history_csv(rows: Sequence[BaseModel]) -> str:
    """Loss history rows as CSV, floats in the report value format."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if rows:
        fields = list(type(rows[0]).model_fields)
        writer.writerow(fields)
        for row in rows:
            values = [getattr(row, field) for field in fields]
            writer.writerow(
                [format_value(v) if isinstance(v, float) else v for v in values]
            )
    return buffer.getvalue()


def _write_history(ws: Workspace, name: str, rows: Sequence[BaseModel]) -> None:
    ws.write_text(ws.history_dir / f"{name}.csv", history_csv(rows))


def _seeds(cfg: RunConfig) -> dict[str, int]:
    return {"seed": cfg.seed, "split_seed": cfg.split_seed}


def _load_surrogates(ws: Workspace, cfg: RunConfig) -> list[DetectorModel]:
    return [
        ws.detectors.load(
            DetectorStore.name_for("surrogate", arch), check_hash=not cfg.allow_mixed
        )
        for arch in sorted(set(cfg.surrogate_archs))
    ]


def _load_victims(ws: Workspace, cfg: RunConfig) -> dict[str, DetectorModel]:
    names = [
        DetectorStore.name_for("victim", arch) for arch in sorted(set(cfg.victim_archs))
    ]
    return {
        name: ws.detectors.load(name, check_hash=not cfg.allow_mixed) for name in names
    }


def _train_gan(
    cfg: RunConfig,
    gen_id: GenId,
    role: str,
    train: list[LabeledClip],
    surrogates: list[DetectorModel],
) -> GanBundle:
    gan = build_gan(gen_id, cfg.gan_seed(gen_id, role), cfg.clip_length)
    gan, _ = train_attack(
        gan,
        by_label(train, ClipLabel.REAL),
        by_label(train, ClipLabel.FAKE),
        surrogates,
        cfg.gan_train_config(gen_id, role),
        cfg.d_loss_form,
        cfg.loss_weights(),
    )
    return gan


def _shield_pairs(
    cfg: RunConfig,
    clips: list[LabeledClip],
    attack: GanBundle,
    defense: GanBundle,
    include_plain_fakes: bool = False,
) -> list[PairedClip]:
    """Real clips plus attacked fakes (and plain fakes if asked) as pairs."""
    reals = by_label(clips, ClipLabel.REAL)
    fakes = by_label(clips, ClipLabel.FAKE)
    members = reals + attack_clips(attack, fakes, cfg.jobs)
    if include_plain_fakes:
        members += fakes
    return make_pairs(members, defense, include_plain_fakes, cfg.jobs)


# =============================================================================
# gen-corpus
# =============================================================================


def cmd_gen_corpus(cfg: RunConfig) -> dict:
    """
    Write the synthetic corpus as WAV files plus a manifest.

    Returns:
        dict: Manifest path and clip count
    """
    if not cfg.include_synthetic:
        raise ConfigError("gen-corpus needs include_synthetic")
    with Workspace(cfg.out_dir, cfg.config_hash()) as ws:
        ws.write_effective_config(cfg.effective_json())
        clips = load_corpora(cfg)[cfg.synthetic_name]
        try:
            manifest = write_corpus(clips, ws.corpus_dir / cfg.synthetic_name)
        except OSError as e:
            raise ConfigError(f"cannot write corpus under {ws.corpus_dir}: {e}") from e

    logger.info(
        "Corpus written",
        extra={"json_fields": {"manifest": str(manifest), "clips": len(clips)}},
    )
    return {"manifest": str(manifest), "clips": len(clips)}


# =============================================================================
# train
# =============================================================================


def _train_detectors(ws: Workspace, cfg: RunConfig, train: list[LabeledClip]) -> list:
    written = []
    for role, archs in (
        ("surrogate", cfg.surrogate_archs),
        ("victim", cfg.victim_archs),
    ):
        for arch in sorted(set(archs)):
            config = DetectorConfig.default(
                DetectorArch(arch), cfg.clip_length, cfg.sample_rate_hz
            )
            model = build_detector(arch, cfg.detector_seed(role, arch), config)
            model = train_detector(model, train, cfg.detector_train_config(role, arch))
            name = DetectorStore.name_for(role, arch)
            written.append(str(ws.detectors.save(name, model)))
            _write_history(ws, f"detector-{name}", model.history)
    return written


def _train_attack_gans(
    ws: Workspace, cfg: RunConfig, train: list[LabeledClip]
) -> list:
    surrogates = _load_surrogates(ws, cfg)
    written = []
    for gen_id in cfg.selected_gen_ids:
        gan = _train_gan(cfg, gen_id, "attack", train, surrogates)
        written.append(str(ws.attack_gans.save(gen_id.value, gan)))
        _write_history(ws, f"attack-{gen_id.value}", gan.history)
    return written


def _train_defense_gans(
    ws: Workspace, cfg: RunConfig, train: list[LabeledClip]
) -> list:
    written = []
    if cfg.defense_from_attack_zoo:
        for gen_id in cfg.selected_gen_ids:
            gan = ws.attack_gans.load(gen_id.value, check_hash=not cfg.allow_mixed)
            written.append(str(ws.defense_gans.save(gen_id.value, gan)))
        return written

    surrogates = _load_surrogates(ws, cfg)
    for gen_id in cfg.selected_gen_ids:
        gan = _train_gan(cfg, gen_id, "defense", train, surrogates)
        written.append(str(ws.defense_gans.save(gen_id.value, gan)))
        _write_history(ws, f"defense-{gen_id.value}", gan.history)
    return written


def _train_shields(ws: Workspace, cfg: RunConfig, train: list[LabeledClip]) -> list:
    written = []
    for gen_id in cfg.selected_gen_ids:
        check = not cfg.allow_mixed
        defense = ws.defense_gans.load(gen_id.value, check_hash=check)
        attack = ws.attack_gans.load(gen_id.value, check_hash=check)
        pairs = _shield_pairs(cfg, train, attack, defense, cfg.include_plain_fakes)
        config = ShieldConfig(
            embedding_dim=cfg.embedding_dim,
            clip_length=cfg.clip_length,
            concat_axis=cfg.concat_axis,
        )
        model = build_shield(cfg.shield_seed(gen_id), gen_id, config)
        model = train_shield(
            model,
            pairs,
            cfg.shield_train_config(gen_id),
            cfg.shield_head_config(gen_id),
            margin=cfg.margin,
            squared=cfg.squared_distance,
        )
        written.append(str(ws.shields.save(gen_id.value, model)))
        _write_history(ws, f"shield-{gen_id.value}-triplet", model.triplet_history)
        _write_history(ws, f"shield-{gen_id.value}-head", model.head_history)
    return written


_TRAINERS = {
    "detector": _train_detectors,
    "attack": _train_attack_gans,
    "defense": _train_defense_gans,
    "shield": _train_shields,
}


def cmd_train(stage: str, cfg: RunConfig) -> dict:
    """
    Train one stage and write its checkpoints and loss histories.

    Stages depend on each other in order: detector, attack, defense, shield.

    Returns:
        dict: Stage name and written checkpoint paths

    Raises:
        MissingDependencyError: If an upstream checkpoint is missing
        ConfigError: If an upstream checkpoint has another config hash
    """
    if stage not in _TRAINERS:
        raise ConfigError(f"unknown stage {stage}; expected one of {TRAIN_STAGES}")
    with Workspace(cfg.out_dir, cfg.config_hash()) as ws:
        ws.write_effective_config(cfg.effective_json())
        train = training_clips(cfg, load_corpora(cfg))
        written = _TRAINERS[stage](ws, cfg, train)

    logger.info(
        "Stage trained",
        extra={"json_fields": {"stage": stage, "checkpoints": written}},
    )
    return {"stage": stage, "checkpoints": written}


# =============================================================================
# eval
# =============================================================================


def _eval_baseline(ws: Workspace, cfg: RunConfig, test: Corpora) -> EvalReport:
    return run_baseline_grid(
        _load_victims(ws, cfg), test, _seeds(cfg), cfg.config_hash(), cfg.jobs
    )


def _eval_attack(ws: Workspace, cfg: RunConfig, test: Corpora) -> EvalReport:
    gen_ids = [cfg.attack_gen] if cfg.attack_gen else cfg.selected_gen_ids
    gans = [
        ws.attack_gans.load(g.value, check_hash=not cfg.allow_mixed) for g in gen_ids
    ]
    return run_attack_grid(
        _load_victims(ws, cfg), gans, test, _seeds(cfg), cfg.config_hash(), cfg.jobs
    )


def _load_present(store, gen_ids: Sequence[GenId], check: bool) -> dict:
    """Load the checkpoints that exist; the grid names cells that lack one."""
    return {
        g: store.load(g.value, check_hash=check)
        for g in gen_ids
        if store.exists(g.value)
    }


def _eval_defense(ws: Workspace, cfg: RunConfig, test: Corpora) -> EvalReport:
    check = not cfg.allow_mixed
    gen_ids = cfg.selected_gen_ids
    for g in gen_ids:
        if not ws.attack_gans.exists(g.value):
            path = ws.attack_gans.path_for(g.value)
            raise MissingDependencyError(f"attack generator {g.value} missing: {path}")
    return run_defense_grid(
        _load_present(ws.shields, gen_ids, check),
        _load_present(ws.attack_gans, gen_ids, check),
        test,
        settings=cfg.settings,
        defense_gans=_load_present(ws.defense_gans, gen_ids, check),
        seeds=_seeds(cfg),
        config_hash=cfg.config_hash(),
        jobs=cfg.jobs,
        attack_gen=cfg.attack_gen,
        defense_gen=cfg.defense_gen,
    )


def _eval_correlation(ws: Workspace, cfg: RunConfig, test: Corpora) -> EvalReport:
    check = not cfg.allow_mixed
    defense_id = cfg.defense_gen or cfg.selected_gen_ids[0]
    attack_id = cfg.attack_gen or defense_id
    defense = ws.defense_gans.load(defense_id.value, check_hash=check)
    attack = ws.attack_gans.load(attack_id.value, check_hash=check)

    reports = []
    for corpus in sorted(test):
        reals = by_label(test[corpus], ClipLabel.REAL)
        fakes = by_label(test[corpus], ClipLabel.FAKE)
        attacked = attack_clips(attack, fakes, cfg.jobs)
        reports.append(
            run_correlation_report(
                defense, reals, attacked, corpus, _seeds(cfg), cfg.config_hash()
            )
        )
    extra = {
        "defense_gen_id": defense_id.value,
        "attack_gen_id": attack_id.value,
        "gap": {r.rows[0].corpus: r.metadata.extra["gap"] for r in reports},
    }
    return EvalReport(
        rows=[row for r in reports for row in r.rows],
        metadata=reports[0].metadata.model_copy(update={"extra": extra}),
    )


_GRIDS = {
    EvalGrid.BASELINE: _eval_baseline,
    EvalGrid.ATTACK: _eval_attack,
    EvalGrid.DEFENSE: _eval_defense,
    EvalGrid.CORRELATION: _eval_correlation,
}


def cmd_eval(grid: str, cfg: RunConfig, echo: bool = True) -> dict:
    """
    Run one evaluation grid on the test split of every corpus.

    Writes ``reports/<grid>.csv`` with its JSON sidecar and echoes the table
    to standard output.

    Returns:
        dict: Grid name, report paths and row count

    Raises:
        MissingDependencyError: If a checkpoint of a requested cell is missing
        ConfigError: If a checkpoint has another config hash and mixing is off
    """
    try:
        grid = EvalGrid(grid)
    except ValueError as e:
        raise ConfigError(f"unknown grid {grid}") from e
    with Workspace(cfg.out_dir, cfg.config_hash()) as ws:
        ws.write_effective_config(cfg.effective_json())
        test = corpora_split(cfg, load_corpora(cfg), "test")
        report = _GRIDS[grid](ws, cfg, test)
        csv_path, sidecar = write_report(report, ws.reports_dir / f"{grid.value}.csv")

    if echo:
        print(render_table(report))
    return {
        "grid": grid.value,
        "report": str(csv_path),
        "sidecar": str(sidecar),
        "rows": len(report.rows),
    }


# =============================================================================
# export
# =============================================================================


def _first(clips: Sequence[LabeledClip], label: ClipLabel) -> Optional[LabeledClip]:
    return next((clip for clip in clips if clip.label == label), None)


def _export_spectrograms(ws: Workspace, cfg: RunConfig, test: Corpora) -> list:
    """First real and fake test clip of each corpus, plus the attacked fake."""
    attack = None
    attack_id = cfg.attack_gen or cfg.gen
    if attack_id is not None:
        attack = ws.attack_gans.load(attack_id.value, check_hash=not cfg.allow_mixed)

    written = []
    for corpus in sorted(test):
        clips = [
            c
            for c in (
                _first(test[corpus], ClipLabel.REAL),
                _first(test[corpus], ClipLabel.FAKE),
            )
            if c is not None
        ]
        fakes = [c for c in clips if c.label == ClipLabel.FAKE]
        if attack is not None and fakes:
            clips += attack_clips(attack, fakes)
        for clip in clips:
            name = f"{clip.clip_id.replace('/', '_')}-{clip.label.value}.png"
            path = ws.exports_dir / "spectrograms" / corpus / name
            path.parent.mkdir(parents=True, exist_ok=True)
            image, bins = export_spectrogram_plot(
                log_mel_spectrogram(clip.waveform), path
            )
            written += [str(image), str(bins)]
    return written


def _export_embeddings(ws: Workspace, cfg: RunConfig, test: Corpora) -> list:
    """Test-pair embeddings of each SHIELD model plus their separation."""
    check = not cfg.allow_mixed
    merged = [clip for name in sorted(test) for clip in test[name]]
    written = []
    for gen_id in [cfg.defense_gen] if cfg.defense_gen else cfg.selected_gen_ids:
        model: ShieldModel = ws.shields.load(gen_id.value, check_hash=check)
        defense = ws.defense_gans.load(gen_id.value, check_hash=check)
        attack_id = cfg.attack_gen or gen_id
        attack = ws.attack_gans.load(attack_id.value, check_hash=check)
        pairs = _shield_pairs(cfg, merged, attack, defense)
        embeddings = embed_pairs(model, pairs)
        stem = f"{attack_id.value}-{gen_id.value}"
        csv_path = write_embeddings_csv(
            ws.exports_dir / "embeddings" / f"{stem}.csv", pairs, embeddings
        )
        separation = embedding_separation(
            embeddings, [pair.pair_label for pair in pairs]
        )
        sidecar = ws.write_text(
            ws.exports_dir / "embeddings" / f"{stem}.json",
            json.dumps(separation.model_dump(mode="json"), indent=2, sort_keys=True)
            + "\n",
        )
        logger.info(
            "Embedding separation",
            extra={"json_fields": {"cell": stem, **separation.model_dump()}},
        )
        written += [str(csv_path), str(sidecar)]
    return written


_EXPORTERS = {
    "spectrogram": _export_spectrograms,
    "embeddings": _export_embeddings,
}


def cmd_export(kind: str, cfg: RunConfig) -> dict:
    """
    Export spectrogram images or SHIELD embeddings of test clips.

    Returns:
        dict: Export kind and written files
    """
    if kind not in _EXPORTERS:
        raise ConfigError(f"unknown export {kind}; expected one of {EXPORT_KINDS}")
    with Workspace(cfg.out_dir, cfg.config_hash()) as ws:
        ws.write_effective_config(cfg.effective_json())
        test = corpora_split(cfg, load_corpora(cfg), "test")
        written = _EXPORTERS[kind](ws, cfg, test)

    logger.info("Export finished", extra={"json_fields": {"kind": kind}})
    return {"kind": kind, "files": written}
