"""
Evaluation grids.

- baseline: detector accuracy per (detector, corpus)
- attack: detector accuracy on originals vs attacked fakes per
  (detector, attack generator, corpus)
- defense: SHIELD accuracy per attack/defense setting ``G_i->G_j``
- correlation: Pearson correlation of clips with their defense
  reconstructions, per class

Every grid validates all requested cells before computing any row, and
returns rows sorted by (setting, corpus, metric).
"""

import concurrent.futures
import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from typing import Optional, TypeVar

import numpy as np

from shield.afgan.bundle import GanBundle, attack_clips, run_generator
from shield.defense.embedder import ShieldModel
from shield.defense.inference import predict_pairs
from shield.defense.pairing import make_pairs
from shield.detectors.detector import DetectorModel, predict_real
from shield.dsp.correlation import pearson_correlation
from shield.evaluation.metrics import average_row, classification_rows, l1_distortion
from shield.exceptions import (
    InvariantViolation,
    MissingDependencyError,
    ShapeError,
    UntrainedModelError,
)
from shield.models.clip import ClipLabel, GenId, LabeledClip, Waveform
from shield.models.report import (
    DefenseSetting,
    EvalGrid,
    EvalReport,
    ReportMetadata,
    ReportRow,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

Corpora = Mapping[str, Sequence[LabeledClip]]


def _run_cells(fn: Callable[[T], R], cells: Iterable[T], jobs: int) -> list[R]:
    """Evaluate independent cells, optionally on a thread pool, in input order."""
    cells = list(cells)
    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(fn, cells))
    return [fn(cell) for cell in cells]


def _metadata(
    grid: EvalGrid,
    seeds: Optional[Mapping[str, int]],
    config_hash: Optional[str],
    extra: Optional[dict] = None,
) -> ReportMetadata:
    return ReportMetadata(
        grid=grid.value,
        seeds=dict(seeds or {}),
        config_hash=config_hash,
        extra=extra or {},
    )


def _split_labels(
    clips: Sequence[LabeledClip],
) -> tuple[list[LabeledClip], list[LabeledClip]]:
    reals = [clip for clip in clips if clip.label == ClipLabel.REAL]
    fakes = [clip for clip in clips if clip.label == ClipLabel.FAKE]
    return reals, fakes


def _check_corpora(corpora: Corpora) -> None:
    if not corpora:
        raise ValueError("evaluation needs at least one corpus")
    for name, clips in corpora.items():
        reals, fakes = _split_labels(clips)
        if not reals or not fakes:
            raise ValueError(f"corpus {name} needs real and fake clips")


def _check_detectors(detectors: Mapping[str, DetectorModel]) -> None:
    if not detectors:
        raise ValueError("evaluation needs at least one detector")
    for name, model in detectors.items():
        if not model.trained:
            raise UntrainedModelError(f"detector {name} is untrained")


def _is_real(clips: Sequence[LabeledClip]) -> np.ndarray:
    return np.array([clip.label == ClipLabel.REAL for clip in clips])


def run_baseline_grid(
    detectors: Mapping[str, DetectorModel],
    corpora: Corpora,
    seeds: Optional[Mapping[str, int]] = None,
    config_hash: Optional[str] = None,
    jobs: int = 1,
) -> EvalReport:
    """
    Accuracy and per-class recall of every detector on every corpus, plus a
    per-corpus ``average`` accuracy row.

    Raises:
        UntrainedModelError: If a detector was never trained
    """
    _check_detectors(detectors)
    _check_corpora(corpora)

    def cell(key: tuple[str, str]) -> list[ReportRow]:
        det_name, corpus = key
        clips = corpora[corpus]
        p_real = predict_real(detectors[det_name], [c.waveform for c in clips])
        return classification_rows(det_name, corpus, p_real, _is_real(clips))

    keys = [(d, c) for c in sorted(corpora) for d in sorted(detectors)]
    rows = [row for cell_rows in _run_cells(cell, keys, jobs) for row in cell_rows]
    for corpus in sorted(corpora):
        members = [r for r in rows if r.corpus == corpus and r.metric == "acc"]
        rows.append(average_row(members, "average", corpus, "acc"))

    logger.info(
        "Baseline grid finished",
        extra={"json_fields": {"detectors": len(detectors), "corpora": len(corpora)}},
    )
    return EvalReport(
        rows=rows, metadata=_metadata(EvalGrid.BASELINE, seeds, config_hash)
    )


def run_attack_grid(
    detectors: Mapping[str, DetectorModel],
    gans: Sequence[GanBundle],
    corpora: Corpora,
    seeds: Optional[Mapping[str, int]] = None,
    config_hash: Optional[str] = None,
    jobs: int = 1,
) -> EvalReport:
    """
    Detector accuracy before and after the attack.

    Per cell ``<detector>/<gen_id>``: ``acc_original`` on the untouched corpus,
    ``acc_attacked`` with fakes replaced by attacked fakes,
    ``acc_attacked_fakes`` on attacked fakes alone, ``delta`` =
    acc_original - acc_attacked, ``attack_success_rate`` (attacked fakes
    called real) and ``l1_distortion``. ``average/<gen_id>`` rows average
    the detectors.

    Raises:
        UntrainedModelError: If a detector or generator was never trained
        InvariantViolation: If an attack does not map fakes 1:1
    """
    _check_detectors(detectors)
    _check_corpora(corpora)
    if not gans:
        raise ValueError("attack grid needs at least one generator")
    for gan in gans:
        if not gan.trained:
            raise UntrainedModelError(f"attack generator {gan.gen_id} is untrained")

    attacked: dict[tuple[GenId, str], list[LabeledClip]] = {}
    for corpus in sorted(corpora):
        _, fakes = _split_labels(corpora[corpus])
        for gan in gans:
            out = attack_clips(gan, fakes, jobs)
            if len(out) != len(fakes):
                raise InvariantViolation(
                    f"{gan.gen_id} produced {len(out)} attacked clips "
                    f"for {len(fakes)} fakes"
                )
            attacked[(gan.gen_id, corpus)] = out

    def cell(key: tuple[str, GenId, str]) -> list[ReportRow]:
        det_name, gen_id, corpus = key
        model = detectors[det_name]
        clips = corpora[corpus]
        reals, fakes = _split_labels(clips)
        hit = attacked[(gen_id, corpus)]
        setting = f"{det_name}/{gen_id.value}"

        p_orig = predict_real(model, [c.waveform for c in clips])
        p_real = predict_real(model, [c.waveform for c in reals])
        p_hit = predict_real(model, [c.waveform for c in hit])
        acc_original = float(np.mean((p_orig > 0.5) == _is_real(clips)))
        fooled = p_hit > 0.5
        acc_attacked = float(
            (np.sum(p_real > 0.5) + np.sum(~fooled)) / (len(reals) + len(hit))
        )

        def row(metric: str, value: float, n: int) -> ReportRow:
            return ReportRow(
                setting=setting, corpus=corpus, metric=metric, value=value, n=n
            )

        return [
            row("acc_original", acc_original, len(clips)),
            row("acc_attacked", acc_attacked, len(reals) + len(hit)),
            row("acc_attacked_fakes", float(np.mean(~fooled)), len(hit)),
            row("delta", acc_original - acc_attacked, len(clips)),
            row("attack_success_rate", float(np.mean(fooled)), len(hit)),
            row(
                "l1_distortion",
                l1_distortion([c.waveform for c in fakes], [c.waveform for c in hit]),
                len(hit),
            ),
        ]

    keys = [
        (d, gan.gen_id, c)
        for c in sorted(corpora)
        for gan in gans
        for d in sorted(detectors)
    ]
    rows = [row for cell_rows in _run_cells(cell, keys, jobs) for row in cell_rows]
    for corpus in sorted(corpora):
        for gan in gans:
            prefix = f"/{gan.gen_id.value}"
            for metric in ("acc_attacked", "acc_attacked_fakes", "delta"):
                members = [
                    r
                    for r in rows
                    if r.corpus == corpus
                    and r.metric == metric
                    and r.setting.endswith(prefix)
                    and not r.setting.startswith("average")
                ]
                rows.append(average_row(members, f"average{prefix}", corpus, metric))

    logger.info(
        "Attack grid finished",
        extra={
            "json_fields": {
                "cells": len(keys),
                "gans": [gan.gen_id.value for gan in gans],
            }
        },
    )
    return EvalReport(
        rows=rows, metadata=_metadata(EvalGrid.ATTACK, seeds, config_hash)
    )


def defense_cells(
    gen_ids: Sequence[GenId], settings: DefenseSetting
) -> list[tuple[GenId, GenId]]:
    """(attack, defense) generator pairs of a setting, in id order."""
    ids = sorted(GenId(g) for g in gen_ids)
    settings = DefenseSetting(settings)
    cells = []
    for attack in ids:
        for defense in ids:
            if attack == defense and settings != DefenseSetting.MISMATCH:
                cells.append((attack, defense))
            if attack != defense and settings != DefenseSetting.MATCH:
                cells.append((attack, defense))
    return cells


def setting_name(attack: GenId, defense: GenId) -> str:
    return f"{GenId(attack).value}->{GenId(defense).value}"


def run_defense_grid(
    shield_models: Mapping[GenId, ShieldModel],
    gans: Mapping[GenId, GanBundle],
    corpora: Corpora,
    settings: DefenseSetting = DefenseSetting.BOTH,
    defense_gans: Optional[Mapping[GenId, GanBundle]] = None,
    seeds: Optional[Mapping[str, int]] = None,
    config_hash: Optional[str] = None,
    jobs: int = 1,
    attack_gen: Optional[GenId] = None,
    defense_gen: Optional[GenId] = None,
) -> EvalReport:
    """
    SHIELD accuracy per attack/defense setting ``G_i->G_j``.

    Attack generator ``G_i`` turns the corpus fakes into attacked clips;
    defense generator ``G_j`` pairs real and attacked clips, which the SHIELD
    model trained under ``G_j`` classifies. Each cell reports ``acc_joint``
    (real and attacked together), ``recall_real`` and ``recall_attacked``.
    ``G_i->avg`` rows average ``acc_joint`` over the evaluated defenses of
    each attack generator; ``match/avg`` and ``mismatch/avg`` rows average
    the cells of each kind.

    Args:
        shield_models: Trained SHIELD models keyed by defense generator id
        gans: Attack generators keyed by id
        corpora: Held-out corpora with real and fake clips
        settings: match, mismatch or both
        defense_gans: Defense generators keyed by id, ``gans`` when omitted
        attack_gen: Keep only cells attacked by this generator
        defense_gen: Keep only cells defended by this generator

    Raises:
        MissingDependencyError: If a requested cell lacks a model or generator
        UntrainedModelError: If a requested cell's model is untrained
    """
    _check_corpora(corpora)
    settings = DefenseSetting(settings)
    defense_gans = defense_gans if defense_gans is not None else gans
    cells = [
        (a, d)
        for a, d in defense_cells(list(gans), settings)
        if attack_gen in (None, a) and defense_gen in (None, d)
    ]
    if not cells:
        raise ValueError(f"no {settings} cells for generators {sorted(gans)}")
    for attack, defense in cells:
        name = setting_name(attack, defense)
        if defense not in shield_models:
            raise MissingDependencyError(f"cell {name}: no SHIELD model for {defense}")
        if defense not in defense_gans:
            raise MissingDependencyError(f"cell {name}: no defense generator {defense}")
        if not shield_models[defense].trained:
            raise UntrainedModelError(f"cell {name}: SHIELD model is untrained")
        if not gans[attack].trained:
            raise UntrainedModelError(f"cell {name}: attack generator is untrained")

    attacked: dict[tuple[GenId, str], list[LabeledClip]] = {}
    for corpus in sorted(corpora):
        _, fakes = _split_labels(corpora[corpus])
        for attack in sorted({a for a, _ in cells}):
            attacked[(attack, corpus)] = attack_clips(gans[attack], fakes, jobs)

    def cell(key: tuple[GenId, GenId, str]) -> list[ReportRow]:
        attack, defense, corpus = key
        reals, _ = _split_labels(corpora[corpus])
        clips = reals + attacked[(attack, corpus)]
        pairs = make_pairs(clips, defense_gans[defense])
        p_real = predict_pairs(shield_models[defense], pairs)
        return classification_rows(
            setting_name(attack, defense),
            corpus,
            p_real,
            _is_real(clips),
            acc_metric="acc_joint",
            negative="attacked",
        )

    keys = [(a, d, c) for c in sorted(corpora) for a, d in cells]
    rows = [row for cell_rows in _run_cells(cell, keys, jobs) for row in cell_rows]

    for corpus in sorted(corpora):
        joint = {
            (a, d): next(
                r
                for r in rows
                if r.setting == setting_name(a, d)
                and r.corpus == corpus
                and r.metric == "acc_joint"
            )
            for a, d in cells
        }
        for attack in sorted({a for a, _ in cells}):
            members = [row for (a, _), row in joint.items() if a == attack]
            rows.append(
                average_row(members, f"{attack.value}->avg", corpus, "acc_joint")
            )
        for kind, same in (("match", True), ("mismatch", False)):
            members = [row for (a, d), row in joint.items() if (a == d) == same]
            if members:
                rows.append(average_row(members, f"{kind}/avg", corpus, "acc_joint"))

    logger.info(
        "Defense grid finished",
        extra={
            "json_fields": {
                "settings": settings.value,
                "cells": [setting_name(a, d) for a, d in cells],
            }
        },
    )
    return EvalReport(
        rows=rows, metadata=_metadata(EvalGrid.DEFENSE, seeds, config_hash)
    )


def _correlations(defense: GanBundle, clips: Sequence[LabeledClip]) -> list[float]:
    values = []
    for clip in clips:
        try:
            reconstruction = Waveform(
                samples=run_generator(defense, clip.waveform),
                sample_rate_hz=clip.waveform.sample_rate_hz,
            )
            values.append(pearson_correlation(clip.waveform, reconstruction))
        except ShapeError:
            raise
        except ValueError:
            logger.warning(
                "Skipping constant clip in correlation report",
                extra={"json_fields": {"clip_id": clip.clip_id}},
            )
    return values


def run_correlation_report(
    defense: GanBundle,
    reals: Sequence[LabeledClip],
    attacked: Sequence[LabeledClip],
    corpus: str = "synthetic",
    seeds: Optional[Mapping[str, int]] = None,
    config_hash: Optional[str] = None,
) -> EvalReport:
    """
    Pearson correlation between clips and their defense reconstructions.

    Emits one ``pearson_mean`` row per class (mean in ``value``, standard
    deviation in ``spread``) and a ``verdict`` row whose value is 1.0 when
    attacked clips correlate more strongly than real clips. The gap between
    the means is recorded in the metadata. Constant clips are skipped with a
    warning and left out of ``n``.

    Raises:
        ValueError: If a class list is empty or has no usable clip
    """
    if not reals or not attacked:
        raise ValueError("correlation report needs real and attacked clips")

    stats = {}
    for name, clips in (("real", reals), ("attacked", attacked)):
        values = _correlations(defense, clips)
        if not values:
            raise ValueError(f"no {name} clip has a defined correlation")
        stats[name] = np.array(values)

    gap = float(stats["attacked"].mean() - stats["real"].mean())
    rows = [
        ReportRow(
            setting=name,
            corpus=corpus,
            metric="pearson_mean",
            value=float(values.mean()),
            n=int(values.size),
            spread=float(values.std()),
        )
        for name, values in stats.items()
    ]
    rows.append(
        ReportRow(
            setting="verdict",
            corpus=corpus,
            metric="attacked_gt_real",
            value=1.0 if gap > 0 else 0.0,
            n=int(stats["real"].size + stats["attacked"].size),
        )
    )
    logger.info(
        "Correlation report finished",
        extra={"json_fields": {"defense": defense.gen_id.value, "gap": gap}},
    )
    return EvalReport(
        rows=rows,
        metadata=_metadata(
            EvalGrid.CORRELATION,
            seeds,
            config_hash,
            {"gap": gap, "defense_gen_id": defense.gen_id.value},
        ),
    )
