from datetime import datetime, timezone
from enum import StrEnum
from typing import Any, Optional

from pydantic import BaseModel, Field, field_validator

# Metrics whose values are fractions and must lie in [0, 1]
FRACTION_METRICS = {
    "acc",
    "acc_joint",
    "acc_original",
    "acc_attacked",
    "acc_attacked_fakes",
    "recall_real",
    "recall_fake",
    "recall_attacked",
    "attack_success_rate",
}


class ReportRow(BaseModel):
    """One cell of an evaluation grid"""

    setting: str = Field(description='Grid cell, e.g. "G1->G3" or "raw_cnn/G2"')
    corpus: str = Field(description="Corpus the cell was evaluated on")
    metric: str = Field(description="Metric name")
    value: float = Field(description="Metric value")
    n: int = Field(ge=0, description="Number of samples behind the value")
    spread: Optional[float] = Field(
        default=None, description="Standard deviation, when the metric is a mean"
    )

    @field_validator("value")
    @classmethod
    def _fractions_in_range(cls, value: float, info) -> float:
        metric = info.data.get("metric")
        if metric in FRACTION_METRICS and not 0.0 <= value <= 1.0:
            raise ValueError(f"{metric} must lie in [0, 1], got {value}")
        return value

    def sort_key(self) -> tuple[str, str, str]:
        return (self.setting, self.corpus, self.metric)


class ReportMetadata(BaseModel):
    """Provenance of an evaluation report"""

    grid: str = Field(description="Grid name (baseline, attack, defense, correlation)")
    seeds: dict[str, int] = Field(default_factory=dict)
    config_hash: Optional[str] = Field(default=None)
    extra: dict[str, Any] = Field(default_factory=dict)
    timestamp: datetime = Field(
        default_factory=lambda: datetime.now(timezone.utc),
        description="Creation time; lives only in the JSON sidecar",
    )


class EvalReport(BaseModel):
    """
    Accuracy grid of one experiment.

    Rows are kept sorted by (setting, corpus, metric) so the report body is a
    pure function of its inputs.
    """

    rows: list[ReportRow] = Field(default_factory=list)
    metadata: ReportMetadata

    @field_validator("rows")
    @classmethod
    def _sorted_rows(cls, rows: list[ReportRow]) -> list[ReportRow]:
        return sorted(rows, key=ReportRow.sort_key)

    def value(self, setting: str, corpus: str, metric: str) -> float:
        """Look up a single cell value."""
        for row in self.rows:
            if (row.setting, row.corpus, row.metric) == (setting, corpus, metric):
                return row.value
        raise KeyError(f"no row for ({setting}, {corpus}, {metric})")

    def select(self, metric: Optional[str] = None, corpus: Optional[str] = None):
        """Rows filtered by metric and/or corpus."""
        return [
            row
            for row in self.rows
            if (metric is None or row.metric == metric)
            and (corpus is None or row.corpus == corpus)
        ]


class DefenseSetting(StrEnum):
    """Attack/defense generator pairings evaluated by the defense grid"""

    MATCH = "match"  # G_i -> G_i
    MISMATCH = "mismatch"  # G_i -> G_j, i != j
    BOTH = "both"


class EvalGrid(StrEnum):
    """Evaluation grids"""

    BASELINE = "baseline"
    ATTACK = "attack"
    DEFENSE = "defense"
    CORRELATION = "correlation"
