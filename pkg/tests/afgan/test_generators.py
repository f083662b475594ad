"""
Tests for the generator zoo and attack application.
"""

import numpy as np
import pytest
import torch

from shield.afgan.bundle import apply_attack, attack_clips, build_gan, run_generator
from shield.afgan.generators import GeneratorConfig, build_generator
from shield.exceptions import ShapeError
from shield.models.clip import ClipLabel, GenId, LabeledClip, Waveform
from tests.conftest import TINY_LENGTH


def _make_fake(seed: int = 0, length: int = TINY_LENGTH) -> LabeledClip:
    rng = np.random.default_rng(seed)
    return LabeledClip(
        clip_id=f"fake-{seed}",
        waveform=Waveform(samples=rng.uniform(-0.9, 0.9, length)),
        label=ClipLabel.FAKE,
        source="toy",
    )


def _randomize_output(gan) -> None:
    """Give the zero-initialized output layer non-zero weights."""
    with torch.no_grad():
        gen = torch.Generator().manual_seed(0)
        for p in gan.generator.out.parameters():
            p.copy_(0.05 * torch.randn(p.shape, generator=gen))


class TestGenerators:
    """Tests for the three generator architectures"""

    @pytest.mark.parametrize("gen_id", list(GenId))
    def test_shape_and_range(self, gen_id):
        gan = build_gan(gen_id, seed=0, clip_length=16000)
        out = run_generator(gan, _make_fake(length=16000).waveform)
        assert out.shape == (16000,)
        assert np.all(np.abs(out) <= 1.0)

    @pytest.mark.parametrize("gen_id", list(GenId))
    def test_same_seed_same_parameters(self, gen_id):
        a = build_gan(gen_id, seed=4, clip_length=TINY_LENGTH)
        b = build_gan(gen_id, seed=4, clip_length=TINY_LENGTH)
        assert np.array_equal(a.generator_parameters(), b.generator_parameters())
        assert np.array_equal(
            a.discriminator_parameters(), b.discriminator_parameters()
        )

    def test_architectures_differ(self):
        g1 = build_gan(GenId.G1, seed=0, clip_length=TINY_LENGTH)
        g3 = build_gan(GenId.G3, seed=0, clip_length=TINY_LENGTH)
        assert g1.generator_parameter_count() != g3.generator_parameter_count()

    @pytest.mark.parametrize("gen_id", list(GenId))
    def test_untrained_is_near_identity(self, gen_id):
        gan = build_gan(gen_id, seed=1, clip_length=TINY_LENGTH)
        clip = _make_fake(seed=2).waveform
        attacked = apply_attack(gan, clip)
        assert np.mean(np.abs(attacked.samples - clip.samples)) < 0.5
        assert np.allclose(attacked.samples, clip.samples, atol=1e-4)

    @pytest.mark.parametrize("gen_id", [GenId.G1, GenId.G2])
    def test_length_must_divide_by_16(self, gen_id):
        with pytest.raises(ValueError, match="16"):
            GeneratorConfig.default(gen_id, clip_length=1000)

    def test_config_gen_id_must_match(self):
        with pytest.raises(ValueError):
            build_generator(GenId.G1, GeneratorConfig.default(GenId.G3))

    def test_seg_noise_is_pure_function_of_clip(self):
        gan = build_gan(GenId.G2, seed=0, clip_length=TINY_LENGTH)
        _randomize_output(gan)
        clip = _make_fake(seed=3).waveform
        first = run_generator(gan, clip)
        assert run_generator(gan, clip).tobytes() == first.tobytes()

    def test_batch_does_not_change_output(self):
        gan = build_gan(GenId.G2, seed=0, clip_length=TINY_LENGTH)
        _randomize_output(gan)
        clips = [_make_fake(seed=s).waveform for s in range(3)]
        x = torch.from_numpy(np.stack([c.samples for c in clips]))
        with torch.no_grad():
            batched = gan.generator(x).numpy()
        single = run_generator(gan, clips[1])
        assert np.allclose(batched[1], single, atol=1e-6)


class TestApplyAttack:
    """Tests for apply_attack and attack_clips"""

    @pytest.mark.parametrize("gen_id", list(GenId))
    def test_length_preserved(self, gen_id):
        gan = build_gan(gen_id, seed=0, clip_length=TINY_LENGTH)
        assert apply_attack(gan, _make_fake().waveform).length == TINY_LENGTH

    def test_wrong_length(self):
        gan = build_gan(GenId.G3, seed=0, clip_length=TINY_LENGTH)
        with pytest.raises(ShapeError):
            apply_attack(gan, _make_fake(length=TINY_LENGTH * 2).waveform)

    def test_attack_clips_keeps_ids_and_order(self):
        gan = build_gan(GenId.G1, seed=0, clip_length=TINY_LENGTH)
        fakes = [_make_fake(seed=s) for s in range(4)]
        attacked = attack_clips(gan, fakes)
        assert [c.clip_id for c in attacked] == [c.clip_id for c in fakes]
        assert all(c.label == ClipLabel.ATTACKED for c in attacked)
        assert all(c.source == "G1" for c in attacked)

    def test_jobs_do_not_change_output(self):
        gan = build_gan(GenId.G3, seed=0, clip_length=TINY_LENGTH)
        _randomize_output(gan)
        fakes = [_make_fake(seed=s) for s in range(6)]
        serial = attack_clips(gan, fakes, jobs=1)
        threaded = attack_clips(gan, fakes, jobs=3)
        for a, b in zip(serial, threaded):
            assert a.waveform.samples.tobytes() == b.waveform.samples.tobytes()

    def test_only_fakes(self):
        gan = build_gan(GenId.G3, seed=0, clip_length=TINY_LENGTH)
        real = _make_fake().model_copy(update={"label": ClipLabel.REAL})
        with pytest.raises(ValueError, match="only fake"):
            attack_clips(gan, [real])
