"""
Tests for min-max attack training.
"""

import numpy as np
import pytest
import torch

from shield.afgan.bundle import build_gan
from shield.afgan.discriminator import DiscriminatorConfig
from shield.afgan.generators import GeneratorConfig
from shield.afgan.trainer import generator_objective, train_attack
from shield.detectors.detector import build_detector
from shield.detectors.networks import DetectorConfig
from shield.detectors.trainer import train_detector
from shield.models.attack import DiscriminatorLossForm, LossWeights
from shield.models.clip import ClipLabel, GenId
from shield.models.training import DetectorArch, TrainConfig
from shield.utils.modules import clips_to_tensor
from tests.conftest import TINY_LENGTH
from tests.gradients import max_gradient_error

_SMALL_DISCRIMINATOR = DiscriminatorConfig(channels=[2, 2], kernel_size=5, stride=4)


def _surrogate(tiny_corpus, arch: DetectorArch = DetectorArch.RAW_CNN):
    config = DetectorConfig.default(arch, clip_length=TINY_LENGTH)
    model = build_detector(arch, seed=5, config=config)
    return train_detector(model, tiny_corpus, TrainConfig(epochs=1, batch_size=8))


def _split(tiny_corpus):
    reals = [c for c in tiny_corpus if c.label == ClipLabel.REAL]
    fakes = [c for c in tiny_corpus if c.label == ClipLabel.FAKE]
    return reals, fakes


class TestTrainAttack:
    """Tests for train_attack"""

    def test_g_loss_identity_every_step(self, tiny_corpus):
        reals, fakes = _split(tiny_corpus)
        gan = build_gan(GenId.G3, seed=0, clip_length=TINY_LENGTH)
        cfg = TrainConfig(epochs=2, batch_size=4)
        _, reports = train_attack(gan, reals, fakes, [_surrogate(tiny_corpus)], cfg)
        assert len(reports) == 2 * 3
        for r in reports:
            assert r.g_loss == r.p_loss + r.a_loss + r.s_loss

    def test_zero_epochs(self, tiny_corpus):
        reals, fakes = _split(tiny_corpus)
        gan = build_gan(GenId.G3, seed=0, clip_length=TINY_LENGTH)
        out, reports = train_attack(
            gan, reals, fakes, [_surrogate(tiny_corpus)], TrainConfig(epochs=0)
        )
        assert out is gan
        assert reports == []

    def test_inputs_untouched_and_marked_trained(self, tiny_corpus):
        reals, fakes = _split(tiny_corpus)
        surrogate = _surrogate(tiny_corpus)
        surrogate_before = surrogate.parameter_vector()
        gan = build_gan(GenId.G1, seed=0, clip_length=TINY_LENGTH)
        gen_before = gan.generator_parameters()
        trained, _ = train_attack(
            gan, reals, fakes, [surrogate], TrainConfig(epochs=1, batch_size=6)
        )
        assert np.array_equal(gan.generator_parameters(), gen_before)
        assert np.array_equal(surrogate.parameter_vector(), surrogate_before)
        assert trained.trained and not gan.trained
        assert not np.array_equal(trained.generator_parameters(), gen_before)
        assert all(p.requires_grad for p in surrogate.parameters())

    def test_deterministic(self, tiny_corpus):
        reals, fakes = _split(tiny_corpus)
        surrogate = _surrogate(tiny_corpus)
        cfg = TrainConfig(epochs=1, batch_size=4, seed=9)
        runs = [
            train_attack(
                build_gan(GenId.G2, seed=1, clip_length=TINY_LENGTH),
                reals,
                fakes,
                [surrogate],
                cfg,
            )[0]
            for _ in range(2)
        ]
        assert (
            runs[0].generator_parameters().tobytes()
            == runs[1].generator_parameters().tobytes()
        )

    @pytest.mark.parametrize("form", list(DiscriminatorLossForm))
    def test_loss_forms_run(self, tiny_corpus, form):
        reals, fakes = _split(tiny_corpus)
        gan = build_gan(GenId.G3, seed=0, clip_length=TINY_LENGTH)
        _, reports = train_attack(
            gan,
            reals,
            fakes,
            [_surrogate(tiny_corpus)],
            TrainConfig(epochs=1, batch_size=12),
            d_loss_form=form,
        )
        if form == DiscriminatorLossForm.AS_PRINTED:
            assert all(r.d_loss <= 0 for r in reports)
        else:
            assert all(r.d_loss >= 0 for r in reports)

    def test_needs_surrogates(self, tiny_corpus):
        reals, fakes = _split(tiny_corpus)
        gan = build_gan(GenId.G3, seed=0, clip_length=TINY_LENGTH)
        with pytest.raises(ValueError, match="surrogate"):
            train_attack(gan, reals, fakes, [], TrainConfig(epochs=1))

    def test_needs_fakes(self, tiny_corpus):
        reals, _ = _split(tiny_corpus)
        gan = build_gan(GenId.G3, seed=0, clip_length=TINY_LENGTH)
        with pytest.raises(ValueError, match="fake"):
            train_attack(gan, reals, [], [_surrogate(tiny_corpus)], TrainConfig())


class TestGeneratorObjective:
    """Tests for the combined generator objective"""

    def test_weights_scale_terms(self, tiny_corpus):
        _, fakes = _split(tiny_corpus)
        gan = build_gan(GenId.G3, seed=0, clip_length=TINY_LENGTH)
        x = clips_to_tensor(fakes[:2])
        surrogates = [_surrogate(tiny_corpus)]
        base = generator_objective(gan, x, surrogates)
        doubled = generator_objective(
            gan, x, surrogates, LossWeights(perceptual=2, adversarial=2, surrogate=2)
        )
        for b, d in zip(base, doubled):
            assert float(d) == pytest.approx(2 * float(b), rel=1e-6)

    @pytest.mark.parametrize("gen_id", list(GenId))
    def test_gradients_match_finite_differences(self, gen_id, tiny_corpus):
        if gen_id == GenId.G3:
            config = GeneratorConfig(
                gen_id=gen_id,
                channels=[2],
                kernel_size=3,
                res_blocks=1,
                clip_length=TINY_LENGTH,
            )
        else:
            config = GeneratorConfig(
                gen_id=gen_id,
                channels=[2, 2, 2, 2],
                kernel_size=3,
                z_channels=1,
                clip_length=TINY_LENGTH,
            )
        gan = build_gan(gen_id, 3, TINY_LENGTH, config, _SMALL_DISCRIMINATOR)
        gan = gan.double()
        with torch.no_grad():
            out = gan.generator.out
            gen = torch.Generator().manual_seed(1)
            noise = torch.randn(out.weight.shape, generator=gen, dtype=torch.float64)
            out.weight.copy_(0.05 * noise)
            # keep the residual away from zero so the L1 term stays smooth
            out.bias.fill_(0.5)
        surrogate_config = DetectorConfig(
            channels=[2, 2, 4, 4],
            kernel_size=3,
            first_stride=4,
            stride=2,
            clip_length=TINY_LENGTH,
        )
        surrogate = build_detector(DetectorArch.RAW_CNN, 2, surrogate_config).double()
        surrogate.requires_grad_(False)
        _, fakes = _split(tiny_corpus)
        x = clips_to_tensor(fakes[:2], torch.float64)
        params = list(gan.generator.parameters())
        assert sum(p.numel() for p in params) <= 1000

        def loss():
            p, a, s = generator_objective(gan, x, [surrogate])
            return p + a + s

        assert max_gradient_error(loss, params) <= 1.0
