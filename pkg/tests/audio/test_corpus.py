"""
Tests for corpus assembly helpers.
"""

import numpy as np

from shield.audio.corpus import (
    balance_classes,
    by_label,
    label_counts,
    merge_corpora,
    synthetic_corpus,
)
from shield.models.clip import ClipLabel, LabeledClip, Waveform


def _make_clip(clip_id: str, label: ClipLabel, source: str = "toy") -> LabeledClip:
    return LabeledClip(
        clip_id=clip_id,
        waveform=Waveform(samples=np.zeros(16)),
        label=label,
        source=source,
    )


class TestSyntheticCorpus:
    """Tests for synthetic_corpus"""

    def test_reals_then_fakes(self):
        clips = synthetic_corpus(seed=0, n_real=3, n_fake=2, clip_length=1024)
        assert [c.label for c in clips] == [ClipLabel.REAL] * 3 + [ClipLabel.FAKE] * 2
        assert all(c.waveform.length == 1024 for c in clips)

    def test_counts(self):
        clips = synthetic_corpus(seed=0, n_real=100, n_fake=100, clip_length=1024)
        assert label_counts(clips) == {"real": 100, "fake": 100}


class TestBalanceClasses:
    """Tests for balance_classes"""

    def test_truncates_larger_class_keeping_order(self):
        clips = [
            _make_clip("r0", ClipLabel.REAL),
            _make_clip("f0", ClipLabel.FAKE),
            _make_clip("r1", ClipLabel.REAL),
            _make_clip("r2", ClipLabel.REAL),
        ]
        assert [c.clip_id for c in balance_classes(clips)] == ["r0", "f0"]

    def test_empty(self):
        assert balance_classes([]) == []


class TestMergeCorpora:
    """Tests for merge_corpora"""

    def test_sorted_by_name_and_balanced(self):
        corpora = {
            "b": [_make_clip("b-r", ClipLabel.REAL), _make_clip("b-f", ClipLabel.FAKE)],
            "a": [
                _make_clip("a-r0", ClipLabel.REAL),
                _make_clip("a-r1", ClipLabel.REAL),
                _make_clip("a-f", ClipLabel.FAKE),
            ],
        }
        merged = merge_corpora(corpora)
        assert [c.clip_id for c in merged] == ["a-r0", "a-f", "b-r", "b-f"]

    def test_without_balancing(self):
        corpora = {
            "a": [_make_clip("r0", ClipLabel.REAL), _make_clip("r1", ClipLabel.REAL)]
        }
        assert len(merge_corpora(corpora, balance=False)) == 2

    def test_by_label(self):
        clips = [_make_clip("r", ClipLabel.REAL), _make_clip("f", ClipLabel.FAKE)]
        assert [c.clip_id for c in by_label(clips, ClipLabel.FAKE)] == ["f"]
