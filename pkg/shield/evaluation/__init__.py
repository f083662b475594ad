"""
Evaluation protocol: splits, grids and report files.
"""

from shield.evaluation.grids import (
    defense_cells,
    run_attack_grid,
    run_baseline_grid,
    run_correlation_report,
    run_defense_grid,
    setting_name,
)
from shield.evaluation.metrics import average_row, classification_rows, l1_distortion
from shield.evaluation.report_io import (
    read_report_rows,
    render_table,
    report_csv,
    write_report,
)
from shield.evaluation.splits import SPLITS, split_clips, split_of

__all__ = [
    "SPLITS",
    "average_row",
    "classification_rows",
    "defense_cells",
    "l1_distortion",
    "read_report_rows",
    "render_table",
    "report_csv",
    "run_attack_grid",
    "run_baseline_grid",
    "run_correlation_report",
    "run_defense_grid",
    "setting_name",
    "split_clips",
    "split_of",
    "write_report",
]
