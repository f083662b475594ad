"""
Report files.

The CSV body (``setting,corpus,metric,value,n``) is a pure function of the
rows; timestamps, seeds, config hash and standard deviations go to the JSON
sidecar next to it.
"""

import csv
import io
import json
import logging
from pathlib import Path

from shield.models.report import EvalReport, ReportRow

logger = logging.getLogger(__name__)

REPORT_HEADER = ["setting", "corpus", "metric", "value", "n"]


def format_value(value: float) -> str:
    return f"{value:.10g}"


def report_csv(report: EvalReport) -> str:
    """CSV text of the report body."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for row in report.rows:
        writer.writerow(
            [row.setting, row.corpus, row.metric, format_value(row.value), row.n]
        )
    return buffer.getvalue()


def sidecar_path(csv_path: Path) -> Path:
    return csv_path.with_suffix(".json")


def write_report(report: EvalReport, path: Path) -> tuple[Path, Path]:
    """
    Write the report CSV and its JSON sidecar.

    Returns:
        (csv path, sidecar path)
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report_csv(report))
    sidecar = sidecar_path(path)
    payload = {
        "metadata": report.metadata.model_dump(mode="json"),
        "spreads": [
            {
                "setting": row.setting,
                "corpus": row.corpus,
                "metric": row.metric,
                "spread": row.spread,
            }
            for row in report.rows
            if row.spread is not None
        ],
    }
    sidecar.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    logger.info(
        "Wrote report",
        extra={"json_fields": {"path": str(path), "rows": len(report.rows)}},
    )
    return path, sidecar


def read_report_rows(path: Path) -> list[ReportRow]:
    """Rows of a report CSV (without spreads)."""
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != REPORT_HEADER:
            raise ValueError(f"{path} is not a report CSV: header {reader.fieldnames}")
        return [
            ReportRow(
                setting=row["setting"],
                corpus=row["corpus"],
                metric=row["metric"],
                value=float(row["value"]),
                n=int(row["n"]),
            )
            for row in reader
        ]


def render_table(report: EvalReport) -> str:
    """Fixed-width text table of the report rows."""
    header = REPORT_HEADER + ["spread"]
    body = [
        [
            row.setting,
            row.corpus,
            row.metric,
            f"{row.value:.4f}",
            str(row.n),
            "" if row.spread is None else f"{row.spread:.4f}",
        ]
        for row in report.rows
    ]
    widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]
    lines = [
        "  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip()
        for line in [header] + body
    ]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"
