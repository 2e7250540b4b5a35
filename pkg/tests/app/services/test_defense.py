import pytest
import torch

from src.app.services.defense import apply_defense, apply_pipeline, evaluate_robustness
from src.app.services.metrics import psnr
from src.app.services.sita import run_sita
from src.domain import AttackConfig, DefenseSpec, ImageTensor, InvalidInputError, parse_defense_pipeline
from tests.conftest import random_image


def smooth_image(size: int = 32) -> ImageTensor:
    ramp = torch.linspace(0.0, 1.0, size)
    return ImageTensor(torch.stack([ramp.view(1, -1).expand(size, -1), ramp.view(-1, 1).expand(-1, size), 0.5 * torch.ones(size, size)]))


def eight_bit(seed: int) -> ImageTensor:
    generator = torch.Generator().manual_seed(seed)
    return ImageTensor(torch.randint(0, 256, (3, 16, 16), generator=generator).float() / 255)


class TestApplyDefense:
    def test_zero_noise_is_identity(self):
        img = random_image(0)
        out = apply_defense(img, DefenseSpec(kind="gaussian_noise", sigma=0.0, seed=3))
        assert torch.equal(out.data, img.data)

    def test_noise_is_seeded_and_clamped(self):
        img = random_image(1)
        spec = DefenseSpec(kind="gaussian_noise", sigma=0.5, seed=7)
        first, second = apply_defense(img, spec), apply_defense(img, spec)
        assert torch.equal(first.data, second.data)
        assert first.is_pixel_valued()
        other = apply_defense(img, DefenseSpec(kind="gaussian_noise", sigma=0.5, seed=8))
        assert not torch.equal(first.data, other.data)

    def test_eight_bit_quantizer_fixes_eight_bit_images(self):
        img = eight_bit(2)
        assert torch.equal(apply_defense(img, DefenseSpec(kind="bit_depth", bits=8)).data, img.data)

    def test_bit_depth_is_idempotent(self):
        spec = DefenseSpec(kind="bit_depth", bits=3)
        once = apply_defense(random_image(3), spec)
        assert torch.equal(apply_defense(once, spec).data, once.data)
        assert once.data.unique().numel() <= 8

    def test_bit_depth_rounds_half_up(self):
        out = apply_defense(ImageTensor(torch.full((3, 2, 2), 0.5)), DefenseSpec(kind="bit_depth", bits=1))
        assert torch.equal(out.data, torch.ones(3, 2, 2))

    def test_jpeg_round_trip(self):
        img = smooth_image()
        spec = DefenseSpec(kind="jpeg", quality=75)
        once = apply_defense(img, spec)
        assert once.shape == img.shape and once.is_pixel_valued()
        assert psnr(once, img) > 28.0
        twice = apply_defense(once, spec)
        assert float((twice.data - once.data).abs().mean()) < 0.01

    def test_blur_keeps_constant_images(self):
        img = ImageTensor(torch.full((3, 8, 8), 0.25))
        out = apply_defense(img, DefenseSpec(kind="gaussian_blur", sigma=1.0))
        assert torch.allclose(out.data, img.data, atol=1e-6)

    def test_rejects_signed_images(self):
        with pytest.raises(InvalidInputError):
            apply_defense(ImageTensor(torch.zeros(3, 4, 4), signed=True), DefenseSpec(kind="bit_depth"))

    def test_pipeline_applies_in_order(self):
        img = random_image(4)
        stages = parse_defense_pipeline("gaussian_noise:0.1:1+bit_depth:2")
        expected = apply_defense(apply_defense(img, stages[0]), stages[1])
        assert torch.equal(apply_pipeline(img, stages).data, expected.data)


class TestEvaluateRobustness:
    @pytest.fixture
    def protected(self, toy_encoder):
        x_s = random_image(5, 16, 16)
        result = run_sita(x_s, AttackConfig(encoder_variant="toy", steps=5), toy_encoder)
        return x_s, result.x_adv

    def test_without_defenses(self, toy_encoder, protected):
        x_s, x_adv = protected
        report = evaluate_robustness(x_s, x_adv, toy_encoder, [])
        assert report.defenses == []
        assert -1.0 <= report.destyle_cos_clean < 1.0

    def test_identity_defense_keeps_the_cosine(self, toy_encoder, protected):
        x_s, x_adv = protected
        spec = DefenseSpec(kind="gaussian_noise", sigma=0.0, seed=0)
        report = evaluate_robustness(x_s, x_adv, toy_encoder, [spec])
        assert report.defenses[0].destyle_cos_defended == pytest.approx(report.destyle_cos_clean, abs=1e-6)

    def test_one_outcome_per_entry(self, toy_encoder, protected):
        x_s, x_adv = protected
        entries = [DefenseSpec(kind="bit_depth", bits=5), parse_defense_pipeline("tvm")]
        report = evaluate_robustness(x_s, x_adv, toy_encoder, entries)
        assert [d.label for d in report.defenses] == [
            "bit_depth:5",
            "gaussian_blur:1+gaussian_noise:0.02:0+bit_depth:5",
        ]
        for outcome in report.defenses:
            assert -1.0 <= outcome.destyle_cos_defended <= 1.0
            assert outcome.report.linf >= 0.0
        record = report.to_record()
        assert set(record) == {"input", "protected", "destyle_cos_clean", "defenses"}
