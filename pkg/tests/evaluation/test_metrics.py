"""
Tests for report row builders.
"""

import numpy as np
import pytest

from shield.evaluation.metrics import average_row, classification_rows, l1_distortion
from shield.models.clip import Waveform
from shield.models.report import ReportRow


class TestClassificationRows:
    """Tests for classification_rows"""

    def test_accuracy_and_recalls(self):
        p_real = np.array([0.9, 0.6, 0.2, 0.1, 0.7])
        is_real = np.array([True, True, True, False, False])
        rows = {r.metric: r for r in classification_rows("s", "c", p_real, is_real)}
        assert rows["acc"].value == pytest.approx(3 / 5)
        assert rows["acc"].n == 5
        assert rows["recall_real"].value == pytest.approx(2 / 3)
        assert rows["recall_real"].n == 3
        assert rows["recall_fake"].value == pytest.approx(1 / 2)
        assert rows["recall_fake"].n == 2

    def test_threshold_is_strict(self):
        rows = classification_rows("s", "c", np.array([0.5]), np.array([True]))
        assert rows[0].value == 0.0

    def test_single_class_omits_other_recall(self):
        rows = classification_rows(
            "s",
            "c",
            np.array([0.1, 0.2]),
            np.array([False, False]),
            negative="attacked",
        )
        assert [r.metric for r in rows] == ["acc", "recall_attacked"]


class TestAverageRow:
    """Tests for average_row"""

    def test_mean_and_total_n(self):
        members = [
            ReportRow(setting="a", corpus="c", metric="acc", value=v, n=n)
            for v, n in ((0.5, 10), (1.0, 30))
        ]
        row = average_row(members, "average", "c", "acc")
        assert row.value == pytest.approx(0.75)
        assert row.n == 40

    def test_empty(self):
        with pytest.raises(ValueError):
            average_row([], "average", "c", "acc")


class TestL1Distortion:
    """Tests for l1_distortion"""

    def test_value(self):
        a = [Waveform(samples=np.zeros(4)), Waveform(samples=np.zeros(4))]
        b = [Waveform(samples=np.full(4, 0.5)), Waveform(samples=np.full(4, -0.25))]
        assert l1_distortion(a, b) == pytest.approx(0.375)

    def test_identical(self):
        a = [Waveform(samples=np.linspace(-1, 1, 16))]
        assert l1_distortion(a, a) == 0.0

    def test_mismatched_lists(self):
        with pytest.raises(ValueError):
            l1_distortion([Waveform(samples=np.zeros(4))], [])
