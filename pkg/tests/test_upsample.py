import numpy as np
import pytest

from dealias.raster import Image
from dealias.upsample import (catmull_rom_kernel, tent_kernel,
                              upsample_bilinear, upsample_catmull_rom)


def direct_resample_1d(src, factor, kernel, support):
    """Brute-force separable convolution along one axis, replicated borders."""
    n = len(src)
    out = np.empty(n * factor)
    for X in range(n * factor):
        sx = (X + 0.5) / factor - 0.5
        base = int(np.floor(sx))
        acc = 0.0
        for k in range(1 - support, support + 1):
            idx = min(max(base + k, 0), n - 1)
            acc += src[idx] * kernel(np.array(sx - (base + k)))
        out[X] = acc
    return out


def ramp_image():
    row = np.array([0.0, 1 / 3, 2 / 3, 1.0])
    return Image.from_array(np.tile(row, (4, 1)))


class TestCatmullRom:
    def test_constant_stays_constant(self):
        img = Image.from_array(np.full((4, 4), 0.6))
        out = upsample_catmull_rom(img, 3)
        np.testing.assert_allclose(out.planes[0], 0.6, atol=1e-12)

    def test_interpolates_source_samples(self):
        # With an odd factor, output samples at (3i + 1) sit exactly on
        # source sample centers.
        rng = np.random.default_rng(0)
        img = Image.from_array(rng.random((5, 4)))
        out = upsample_catmull_rom(img, 3)
        centers = out.planes[0][1::3, 1::3]
        np.testing.assert_allclose(centers, img.planes[0], atol=1e-12)

    def test_ramp_matches_direct_convolution(self):
        img = ramp_image()
        out = upsample_catmull_rom(img, 2)
        expected_row = direct_resample_1d(img.planes[0][0], 2,
                                          catmull_rom_kernel, 2)
        expected_row = np.clip(expected_row, 0.0, 1.0)
        # Rows are identical, so the vertical pass is a no-op on them.
        for y in range(out.height):
            np.testing.assert_allclose(out.planes[0][y], expected_row,
                                       atol=1e-12)

    def test_random_matches_direct_convolution(self):
        rng = np.random.default_rng(5)
        src = rng.random((4, 5))
        out = upsample_catmull_rom(Image.from_array(src), 2).planes[0]
        horiz = np.stack([direct_resample_1d(r, 2, catmull_rom_kernel, 2)
                          for r in src])
        full = np.stack([direct_resample_1d(c, 2, catmull_rom_kernel, 2)
                         for c in horiz.T]).T
        np.testing.assert_allclose(out, np.clip(full, 0.0, 1.0), atol=1e-12)

    def test_output_clamped(self):
        plane = np.zeros((4, 8))
        plane[:, 4:] = 1.0  # step edge: the cubic overshoots around it
        out = upsample_catmull_rom(Image.from_array(plane), 4)
        assert out.planes[0].min() >= 0.0
        assert out.planes[0].max() <= 1.0

    def test_too_small_rejected(self):
        with pytest.raises(ValueError):
            upsample_catmull_rom(Image.from_array(np.zeros((3, 3))), 2)

    def test_non_integer_factor_rejected(self):
        img = Image.from_array(np.zeros((4, 4)))
        with pytest.raises(ValueError):
            upsample_catmull_rom(img, 1)


class TestBilinear:
    def test_constant_stays_constant(self):
        img = Image.from_array(np.full((4, 4), 0.25))
        out = upsample_bilinear(img, 2)
        np.testing.assert_allclose(out.planes[0], 0.25, atol=1e-15)

    def test_linear_between_neighbors(self):
        # Center-aligned x2: the two output samples between source values
        # 0 and 1 sit at fractions 0.25 and 0.75 and straddle the
        # midpoint symmetrically.
        row = np.array([0.0, 0.0, 1.0, 1.0])
        img = Image.from_array(np.tile(row, (4, 1)))
        out = upsample_bilinear(img, 2).planes[0][0]
        np.testing.assert_allclose(out, [0, 0, 0, 0.25, 0.75, 1, 1, 1],
                                   atol=1e-15)
        assert (out[3] + out[4]) / 2 == pytest.approx(0.5, abs=1e-15)

    def test_interpolates_source_samples(self):
        rng = np.random.default_rng(1)
        img = Image.from_array(rng.random((4, 4)))
        out = upsample_bilinear(img, 3)
        np.testing.assert_allclose(out.planes[0][1::3, 1::3], img.planes[0],
                                   atol=1e-12)

    def test_extrema_bounded_by_source(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            src = rng.random((4, 6))
            out = upsample_bilinear(Image.from_array(src), 3).planes[0]
            assert out.min() >= src.min() - 1e-12
            assert out.max() <= src.max() + 1e-12

    def test_matches_direct_convolution(self):
        rng = np.random.default_rng(3)
        src = rng.random((4, 4))
        out = upsample_bilinear(Image.from_array(src), 3).planes[0]
        horiz = np.stack([direct_resample_1d(r, 3, tent_kernel, 1)
                          for r in src])
        full = np.stack([direct_resample_1d(c, 3, tent_kernel, 1)
                         for c in horiz.T]).T
        np.testing.assert_allclose(out, full, atol=1e-12)

    def test_multiband(self):
        rng = np.random.default_rng(4)
        img = Image.from_array(rng.random((4, 4, 3)))
        out = upsample_bilinear(img, 2)
        assert out.bands == 3
        for b in range(3):
            single = Image(4, 4, (img.planes[b],))
            np.testing.assert_array_equal(
                out.planes[b], upsample_bilinear(single, 2).planes[0])
