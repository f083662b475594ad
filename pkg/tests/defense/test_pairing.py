"""
Tests for clip/reconstruction pairing.
"""

import numpy as np
import pytest

from shield.afgan.bundle import build_gan
from shield.defense.pairing import (
    apply_defense_generator,
    make_pair,
    make_pairs,
    pair_label_for,
)
from shield.exceptions import ShapeError
from shield.models.clip import ClipLabel, GenId, LabeledClip, Waveform
from shield.models.pair import PairLabel
from tests.conftest import TINY_LENGTH


class TestApplyDefenseGenerator:
    """Tests for apply_defense_generator"""

    def test_length_and_rate_preserved(self, defense_gan, reals):
        clip = reals[0].waveform
        out = apply_defense_generator(defense_gan, clip)
        assert out.length == clip.length
        assert out.sample_rate_hz == clip.sample_rate_hz

    def test_deterministic(self, defense_gan, reals):
        clip = reals[0].waveform
        a = apply_defense_generator(defense_gan, clip)
        b = apply_defense_generator(defense_gan, clip)
        assert a.samples.tobytes() == b.samples.tobytes()

    def test_wrong_length(self, defense_gan):
        with pytest.raises(ShapeError):
            apply_defense_generator(defense_gan, Waveform(samples=np.zeros(512)))


class TestPairLabelFor:
    """Tests for pair_label_for"""

    def test_real_and_attacked(self, reals, attacked):
        assert pair_label_for(reals[0]) == PairLabel.REAL_PAIR
        assert pair_label_for(attacked[0]) == PairLabel.ATTACKED_PAIR

    def test_plain_fake_needs_flag(self, tiny_corpus):
        fake = next(c for c in tiny_corpus if c.label == ClipLabel.FAKE)
        with pytest.raises(ValueError, match="include_plain_fakes"):
            pair_label_for(fake)
        assert pair_label_for(fake, include_plain_fakes=True) == PairLabel.ATTACKED_PAIR


class TestMakePair:
    """Tests for make_pair and make_pairs"""

    def test_payload_layout(self, defense_gan, reals):
        clip = reals[0]
        pair = make_pair(clip, defense_gan)
        assert pair.payload.shape == (2 * TINY_LENGTH,)
        assert pair.clip_length == TINY_LENGTH
        assert np.array_equal(pair.original, clip.waveform.samples)
        expected = apply_defense_generator(defense_gan, clip.waveform).samples
        assert np.array_equal(pair.reconstruction, expected)
        assert pair.clip_id == clip.clip_id
        assert pair.defense_gen_id == GenId.G3

    def test_full_length_payload(self):
        gan = build_gan(GenId.G3, seed=0)
        clip = LabeledClip(
            clip_id="long",
            waveform=Waveform(samples=np.zeros(16000)),
            label=ClipLabel.REAL,
            source="toy",
        )
        assert make_pair(clip, gan).payload.shape == (32000,)

    def test_labels_differ(self, defense_gan, reals, attacked):
        real_pair = make_pair(reals[0], defense_gan)
        attacked_pair = make_pair(attacked[0], defense_gan)
        assert real_pair.pair_label != attacked_pair.pair_label

    def test_plain_fake_rejected(self, defense_gan, tiny_corpus):
        fake = next(c for c in tiny_corpus if c.label == ClipLabel.FAKE)
        with pytest.raises(ValueError):
            make_pair(fake, defense_gan)
        pair = make_pair(fake, defense_gan, include_plain_fakes=True)
        assert pair.pair_label == PairLabel.ATTACKED_PAIR

    def test_make_pairs_keeps_order(self, tiny_pairs):
        clip_ids = [p.clip_id for p in tiny_pairs]
        assert len(tiny_pairs) == 24
        assert [p.pair_label for p in tiny_pairs[:12]] == [PairLabel.REAL_PAIR] * 12
        assert len(set(clip_ids)) == 24

    def test_jobs_do_not_change_payloads(self, defense_gan, reals, attacked):
        clips = reals[:3] + attacked[:3]
        serial = make_pairs(clips, defense_gan, jobs=1)
        threaded = make_pairs(clips, defense_gan, jobs=3)
        for a, b in zip(serial, threaded):
            assert a.clip_id == b.clip_id
            assert a.payload.tobytes() == b.payload.tobytes()
