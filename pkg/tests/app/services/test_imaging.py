import numpy as np
import pytest
import torch

from src.app.services.imaging import (
    blur_radius,
    extract_content,
    gaussian_blur,
    gaussian_kernel1d,
    symmetric_pad,
    to_grayscale,
)
from src.domain import ImageTensor, InvalidInputError, InvalidParameterError
from tests.conftest import random_image


def dense_blur_oracle(x: np.ndarray, sigma: float) -> np.ndarray:
    """Direct 2-D convolution with the outer-product kernel over a numpy symmetric pad."""
    radius = blur_radius(sigma)
    k1 = gaussian_kernel1d(sigma, radius, dtype=torch.float64).numpy()
    kernel = np.outer(k1, k1)
    out = np.empty_like(x)
    for c in range(x.shape[0]):
        padded = np.pad(x[c], radius, mode="symmetric")
        for i in range(x.shape[1]):
            for j in range(x.shape[2]):
                out[c, i, j] = (padded[i : i + 2 * radius + 1, j : j + 2 * radius + 1] * kernel).sum()
    return out


class TestToGrayscale:
    def test_white_maps_to_one(self):
        img = ImageTensor(torch.ones(3, 2, 2))
        assert torch.allclose(to_grayscale(img).data, torch.ones(1, 2, 2))

    def test_pure_red_uses_bt601_weight(self):
        data = torch.zeros(3, 2, 2)
        data[0] = 1.0
        assert torch.allclose(to_grayscale(ImageTensor(data)).data, torch.full((1, 2, 2), 0.299))

    def test_matches_weighted_sum(self):
        img = random_image(3, 12, 9)
        expected = 0.299 * img.data[0] + 0.587 * img.data[1] + 0.114 * img.data[2]
        assert torch.allclose(to_grayscale(img).data[0], expected, atol=1e-6)

    def test_single_channel_is_rejected(self):
        with pytest.raises(InvalidInputError):
            to_grayscale(ImageTensor(torch.zeros(1, 4, 4)))

    def test_keeps_signed_marker(self):
        img = ImageTensor(torch.full((3, 2, 2), -0.5), signed=True)
        out = to_grayscale(img)
        assert out.signed
        assert torch.allclose(out.data, torch.full((1, 2, 2), -0.5))


class TestGaussianBlur:
    def test_kernel_size_at_default_sigma(self):
        assert gaussian_kernel1d(3.0, blur_radius(3.0)).numel() == 13

    def test_constant_image_is_fixed(self):
        img = ImageTensor(torch.full((3, 10, 10), 0.3, dtype=torch.float64))
        assert torch.allclose(gaussian_blur(img).data, img.data, atol=1e-12)

    def test_preserves_global_mean(self):
        img = random_image(0, 24, 20, dtype=torch.float64)
        out = gaussian_blur(img, 3.0)
        assert float(out.data.mean()) == pytest.approx(float(img.data.mean()), abs=1e-10)

    def test_impulse_response_is_the_kernel(self):
        data = torch.zeros(1, 41, 41, dtype=torch.float64)
        data[0, 20, 20] = 1.0
        out = gaussian_blur(ImageTensor(data), 3.0).data[0]
        k1 = gaussian_kernel1d(3.0, 6, dtype=torch.float64)
        assert torch.allclose(out[14:27, 14:27], torch.outer(k1, k1), atol=1e-12)
        assert float(out.sum()) == pytest.approx(1.0, abs=1e-12)

    def test_matches_dense_convolution_with_symmetric_boundary(self):
        checker = (np.indices((3, 15, 17)).sum(axis=0) % 2).astype(np.float64)
        out = gaussian_blur(ImageTensor(torch.from_numpy(checker)), 1.5).data.numpy()
        assert np.allclose(out, dense_blur_oracle(checker, 1.5), atol=1e-10)

    def test_linearity(self):
        a = random_image(1, 16, 16, dtype=torch.float64).data
        b = random_image(2, 16, 16, dtype=torch.float64).data
        blur = lambda x: gaussian_blur(ImageTensor(x, signed=True)).data  # noqa: E731
        assert torch.allclose(blur(2.0 * a - 0.5 * b), 2.0 * blur(a) - 0.5 * blur(b), atol=1e-12)

    @pytest.mark.parametrize("sigma", [0.0, -1.0])
    def test_non_positive_sigma_is_rejected(self, sigma):
        with pytest.raises(InvalidParameterError):
            gaussian_blur(random_image(0), sigma)

    def test_symmetric_pad_repeats_edge_sample(self):
        x = torch.arange(4.0).view(1, 1, 4)
        padded = symmetric_pad(x, 0, 0, 2, 2)
        assert padded[0, 0].tolist() == [1.0, 0.0, 0.0, 1.0, 2.0, 3.0, 3.0, 2.0]


class TestExtractContent:
    def test_output_is_three_identical_channels(self):
        x_c = extract_content(random_image(5))
        assert x_c.shape == (3, 16, 16)
        assert torch.equal(x_c.data[0], x_c.data[1])
        assert torch.equal(x_c.data[1], x_c.data[2])

    def test_constant_color_becomes_its_luminance(self):
        data = torch.stack([torch.full((8, 8), v) for v in (1.0, 0.0, 0.0)])
        x_c = extract_content(ImageTensor(data))
        assert torch.allclose(x_c.data, torch.full((3, 8, 8), 0.299), atol=1e-6)

    def test_stays_pixel_valued(self):
        assert extract_content(random_image(6, 20, 20)).is_pixel_valued()

    def test_stages_can_be_disabled(self):
        img = random_image(7)
        assert torch.equal(extract_content(img, use_gray=False, use_blur=False).data, img.data)
        gray_only = extract_content(img, use_blur=False).data[0]
        assert torch.allclose(gray_only, to_grayscale(img).data[0])

    def test_rejects_grayscale_input(self):
        with pytest.raises(InvalidInputError):
            extract_content(ImageTensor(torch.zeros(1, 8, 8)))

    def test_rejects_signed_input(self):
        with pytest.raises(InvalidInputError):
            extract_content(ImageTensor(torch.zeros(3, 8, 8), signed=True))
