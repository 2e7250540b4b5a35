import pytest
import torch

from src.app.services.imaging import extract_content
from src.app.services.losses import (
    destylization_loss,
    homogeneous_loss,
    perception_loss,
    structural_loss,
    style_distance,
    total_loss,
)
from src.domain import DegenerateStyleError, ImageTensor, InvalidInputError, InvalidParameterError
from tests.conftest import random_image


def pixels(data) -> ImageTensor:
    return ImageTensor(data, signed=True)


def checkerboard(height: int = 8, width: int = 8, dtype=torch.float64) -> torch.Tensor:
    """+1/-1 pattern whose Haar decomposition is a pure hh band."""
    rows = torch.arange(height).view(-1, 1)
    cols = torch.arange(width).view(1, -1)
    return (1.0 - 2.0 * ((rows + cols) % 2)).to(dtype)


@pytest.fixture
def flat_gray() -> ImageTensor:
    return ImageTensor(torch.full((3, 8, 8), 0.5, dtype=torch.float64))


@pytest.fixture
def styled():
    x_s = random_image(21, 16, 16, dtype=torch.float64)
    return x_s, extract_content(x_s)


class TestHomogeneousLoss:
    def test_zero_at_identity(self, flat_gray):
        assert float(homogeneous_loss(flat_gray, flat_gray)) == 0.0

    def test_constant_shift_costs_one_tenth_per_channel(self, flat_gray):
        shifted = pixels(flat_gray.data + 0.1)
        assert float(homogeneous_loss(shifted, flat_gray)) == pytest.approx(0.3, abs=1e-9)

    def test_hh_pattern_is_invisible(self, flat_gray):
        adv = pixels(flat_gray.data + 0.2 * checkerboard())
        assert float(homogeneous_loss(adv, flat_gray)) == pytest.approx(0.0, abs=1e-6)

    def test_shape_mismatch(self, flat_gray):
        with pytest.raises(InvalidInputError):
            homogeneous_loss(ImageTensor(torch.zeros(3, 4, 4, dtype=torch.float64)), flat_gray)


class TestStructuralLoss:
    def test_zero_at_identity(self, flat_gray):
        assert float(structural_loss(flat_gray, flat_gray)) == 0.0

    def test_red_only_hh_pattern(self, flat_gray):
        data = flat_gray.data.clone()
        data[0] += 0.2 * checkerboard()
        assert float(structural_loss(pixels(data), flat_gray)) == pytest.approx(0.1402, abs=1e-6)

    def test_achromatic_hh_pattern(self, flat_gray):
        adv = pixels(flat_gray.data + 0.2 * checkerboard())
        assert float(structural_loss(adv, flat_gray)) == pytest.approx(0.4, abs=1e-6)

    def test_luminance_discount(self, flat_gray):
        mass = 0.3
        achromatic = pixels(flat_gray.data + (mass / 3) * checkerboard())
        blue = flat_gray.data.clone()
        blue[2] += mass * checkerboard()
        achromatic_cost = float(structural_loss(achromatic, flat_gray)) / mass
        blue_cost = float(structural_loss(pixels(blue), flat_gray)) / mass
        assert achromatic_cost == pytest.approx(2 / 3, abs=1e-6)
        assert blue_cost == pytest.approx(0.886, abs=1e-6)
        assert achromatic_cost < blue_cost

    def test_non_negative_on_random_pairs(self):
        for seed in range(50):
            a = random_image(seed, 12, 12, dtype=torch.float64)
            b = random_image(seed + 1000, 12, 12, dtype=torch.float64)
            assert float(structural_loss(a, b)) >= -1e-12

    def test_invariant_to_common_shift(self):
        a = random_image(1, 12, 12, dtype=torch.float64)
        b = random_image(2, 12, 12, dtype=torch.float64)
        shift = random_image(3, 12, 12, dtype=torch.float64).data
        before = float(structural_loss(a, b))
        after = float(structural_loss(pixels(a.data + shift), pixels(b.data + shift)))
        assert after == pytest.approx(before, abs=1e-12)

    def test_requires_rgb(self):
        gray = ImageTensor(torch.zeros(1, 4, 4))
        with pytest.raises(InvalidInputError):
            structural_loss(gray, gray)


class TestPerceptionLoss:
    def test_constant_shift(self, flat_gray):
        assert float(perception_loss(pixels(flat_gray.data + 0.1), flat_gray)) == pytest.approx(0.3, abs=1e-9)

    def test_red_hh_pattern(self, flat_gray):
        data = flat_gray.data.clone()
        data[0] += 0.2 * checkerboard()
        assert float(perception_loss(pixels(data), flat_gray)) == pytest.approx(0.1402, abs=1e-6)


class TestStyleDistance:
    def test_self_difference_is_zero(self, toy_encoder, styled):
        _, x_c = styled
        assert float(style_distance(toy_encoder, x_c, x_c).norm()) == 0.0

    def test_toy_linearity(self, toy_encoder, styled):
        _, x_c = styled
        lift = random_image(5, 16, 16, dtype=torch.float64).data * 0.1
        d = style_distance(toy_encoder, pixels(x_c.data + lift), x_c)
        assert torch.allclose(d.values, toy_encoder.embed_tensor(lift), atol=1e-6)


class TestDestylizationLoss:
    def test_one_at_identity(self, toy_encoder, styled):
        x_s, x_c = styled
        assert float(destylization_loss(toy_encoder, x_s, x_s, x_c)) == pytest.approx(1.0, abs=1e-12)

    def test_antiparallel_distance(self, toy_encoder, styled):
        x_s, x_c = styled
        mirrored = pixels(2.0 * x_c.data - x_s.data)
        assert float(destylization_loss(toy_encoder, mirrored, x_s, x_c)) == pytest.approx(-1.0, abs=1e-9)

    def test_orthogonal_distance(self, toy_encoder, styled):
        x_s, x_c = styled
        d_clean = toy_encoder.embed_tensor(x_s.data) - toy_encoder.embed_tensor(x_c.data)
        r1 = random_image(31, 16, 16, dtype=torch.float64).data
        r2 = random_image(32, 16, 16, dtype=torch.float64).data
        e1, e2 = toy_encoder.embed_tensor(r1), toy_encoder.embed_tensor(r2)
        delta = r1 - (torch.dot(e1, d_clean) / torch.dot(e2, d_clean)) * r2
        value = destylization_loss(toy_encoder, pixels(x_c.data + delta), x_s, x_c)
        assert float(value) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("mode", ["a", "b"])
    def test_ablation_modes_vanish_at_identity(self, toy_encoder, styled, mode):
        x_s, x_c = styled
        assert float(destylization_loss(toy_encoder, x_s, x_s, x_c, mode=mode)) == pytest.approx(0.0, abs=1e-12)

    def test_mode_a_is_negative_l1(self, toy_encoder, styled):
        x_s, x_c = styled
        x_adv = random_image(40, 16, 16, dtype=torch.float64)
        expected = -(toy_encoder.embed_tensor(x_s.data) - toy_encoder.embed_tensor(x_adv.data)).abs().sum()
        assert float(destylization_loss(toy_encoder, x_adv, x_s, x_c, mode="a")) == pytest.approx(float(expected))

    def test_content_like_image_is_degenerate(self, toy_encoder):
        x_s = ImageTensor(torch.full((3, 16, 16), 0.5, dtype=torch.float64))
        with pytest.raises(DegenerateStyleError):
            destylization_loss(toy_encoder, x_s, x_s, extract_content(x_s))


class TestTotalLoss:
    def test_identity_costs_lambda(self, toy_encoder, styled):
        x_s, x_c = styled
        breakdown = total_loss(toy_encoder, x_s, x_s, x_c, lambda_=100.0)
        assert breakdown.destyle == pytest.approx(1.0, abs=1e-9)
        assert breakdown.per == 0.0
        assert breakdown.total == pytest.approx(100.0, abs=1e-7)

    def test_zero_lambda_is_perception_only(self, toy_encoder, styled):
        x_s, x_c = styled
        x_adv = pixels(x_s.data + 0.05 * checkerboard(16, 16))
        breakdown = total_loss(toy_encoder, x_adv, x_s, x_c, lambda_=0.0)
        assert breakdown.total == breakdown.per

    def test_breakdown_identities(self, toy_encoder, styled):
        x_s, x_c = styled
        x_adv = random_image(7, 16, 16, dtype=torch.float64)
        breakdown = total_loss(toy_encoder, x_adv, x_s, x_c, lambda_=37.5)
        assert breakdown.per == breakdown.homo + breakdown.stru
        assert breakdown.total == 37.5 * breakdown.destyle + breakdown.per
        assert -1.0 <= breakdown.destyle <= 1.0
        assert breakdown.to_record()["lambda"] == 37.5

    def test_negative_lambda_is_rejected(self, toy_encoder, styled):
        x_s, x_c = styled
        with pytest.raises(InvalidParameterError):
            total_loss(toy_encoder, x_s, x_s, x_c, lambda_=-1.0)

    def test_gradient_matches_finite_differences(self, toy_encoder, styled):
        x_s, x_c = styled
        generator = torch.Generator().manual_seed(3)

        def away_from_zero(shape):
            sign = torch.where(torch.rand(shape, generator=generator) < 0.5, -1.0, 1.0).to(torch.float64)
            return sign * (0.02 + 0.03 * torch.rand(shape, generator=generator, dtype=torch.float64))

        def upsample(t):
            return t.repeat_interleave(2, dim=-2).repeat_interleave(2, dim=-1)

        # block-constant part feeds L_homo, a same-signed hh part per block feeds L_stru and its luminance;
        # every L1 argument is then at least 0.02 away from its kink
        homo_part = upsample(away_from_zero((3, 8, 8)))
        block_sign = away_from_zero((1, 8, 8)).sign()
        stru_amplitude = block_sign * away_from_zero((3, 8, 8)).abs()
        delta = homo_part + upsample(stru_amplitude) * checkerboard(16, 16)
        start = (x_s.data + delta).requires_grad_(True)

        def objective(x: torch.Tensor) -> torch.Tensor:
            adv = pixels(x)
            return 100.0 * destylization_loss(toy_encoder, adv, x_s, x_c) + perception_loss(adv, x_s)

        assert torch.autograd.gradcheck(objective, (start,), eps=1e-6, atol=1e-6, rtol=1e-3)
