"""Row builders for evaluation reports."""

from collections.abc import Sequence

import numpy as np

from shield.models.clip import Waveform
from shield.models.report import ReportRow

DECISION_THRESHOLD = 0.5


def classification_rows(
    setting: str,
    corpus: str,
    p_real: np.ndarray,
    is_real: np.ndarray,
    acc_metric: str = "acc",
    negative: str = "fake",
) -> list[ReportRow]:
    """
    Accuracy plus per-class recall of thresholded real probabilities.

    Recall rows are emitted only for classes present in ``is_real``.
    """
    predicted_real = np.asarray(p_real) > DECISION_THRESHOLD
    is_real = np.asarray(is_real, dtype=bool)
    rows = [
        ReportRow(
            setting=setting,
            corpus=corpus,
            metric=acc_metric,
            value=float(np.mean(predicted_real == is_real)),
            n=int(is_real.size),
        )
    ]
    if is_real.any():
        rows.append(
            ReportRow(
                setting=setting,
                corpus=corpus,
                metric="recall_real",
                value=float(np.mean(predicted_real[is_real])),
                n=int(is_real.sum()),
            )
        )
    if (~is_real).any():
        rows.append(
            ReportRow(
                setting=setting,
                corpus=corpus,
                metric=f"recall_{negative}",
                value=float(np.mean(~predicted_real[~is_real])),
                n=int((~is_real).sum()),
            )
        )
    return rows


def average_row(
    members: Sequence[ReportRow], setting: str, corpus: str, metric: str
) -> ReportRow:
    """Unweighted mean of member values; n is the total member count."""
    if not members:
        raise ValueError(f"no rows to average for ({setting}, {corpus}, {metric})")
    return ReportRow(
        setting=setting,
        corpus=corpus,
        metric=metric,
        value=float(np.mean([row.value for row in members])),
        n=sum(row.n for row in members),
    )


def l1_distortion(originals: Sequence[Waveform], attacked: Sequence[Waveform]) -> float:
    """Mean over clips of the per-sample L1 distance."""
    if len(originals) != len(attacked) or not originals:
        raise ValueError("distortion needs equally many, nonempty clip lists")
    return float(
        np.mean(
            [
                np.mean(np.abs(o.samples.astype(np.float64) - a.samples))
                for o, a in zip(originals, attacked)
            ]
        )
    )
