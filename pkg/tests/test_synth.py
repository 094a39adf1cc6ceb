import numpy as np
import pytest

from dealias.synth import (EdgeLine, SyntheticSpec, box_blur3,
                           generate_synthetic, half_plane_coverage)


class TestCoverage:
    def test_column_sums_linear_for_pure_edge(self):
        img, _ = generate_synthetic(SyntheticSpec(size=32, slope=(4, 1)))
        sums = img.planes[0].sum(axis=0)
        second_diff = np.diff(sums, n=2)
        np.testing.assert_allclose(second_diff, 0.0, atol=1e-9)

    def test_values_partition_pixel(self):
        # Coverage of a half-plane plus its complement is the full pixel.
        line = EdgeLine((8.0, 8.0), (3.0, 2.0))
        cov = half_plane_coverage(16, 16, line)
        flipped = half_plane_coverage(16, 16,
                                      EdgeLine((8.0, 8.0), (-3.0, -2.0)))
        np.testing.assert_allclose(cov + flipped, 1.0, atol=1e-9)

    def test_slope_periodicity(self):
        img, _ = generate_synthetic(SyntheticSpec(size=64, slope=(4, 1)))
        plane = img.planes[0]
        # The boundary translates by exactly (4, 1) per period.
        np.testing.assert_allclose(plane[1:, 4:], plane[:-1, :-4], atol=1e-9)

    def test_gamma_darkens_boundary(self):
        plain, _ = generate_synthetic(SyntheticSpec(size=32, slope=(4, 1)))
        dark, _ = generate_synthetic(SyntheticSpec(size=32, slope=(4, 1),
                                                   gamma=2.0))
        boundary = (plain.planes[0] > 0.05) & (plain.planes[0] < 0.95)
        assert boundary.any()
        assert np.all(dark.planes[0][boundary] < plain.planes[0][boundary])
        np.testing.assert_allclose(dark.planes[0], plain.planes[0] ** 2.0,
                                   atol=1e-12)

    def test_unsharp_increases_contrast(self):
        plain, _ = generate_synthetic(SyntheticSpec(size=32, slope=(4, 1)))
        sharp, _ = generate_synthetic(SyntheticSpec(size=32, slope=(4, 1),
                                                    unsharp=1.0))
        assert sharp.planes[0].std() > plain.planes[0].std()
        assert sharp.planes[0].min() >= 0.0
        assert sharp.planes[0].max() <= 1.0

    def test_degenerate_slope_rejected(self):
        with pytest.raises(ValueError):
            SyntheticSpec(slope=(0, 0))


class TestBoxBlur:
    def test_matches_window_mean_in_interior(self):
        rng = np.random.default_rng(0)
        plane = rng.random((6, 6))
        blurred = box_blur3(plane)
        for y in range(1, 5):
            for x in range(1, 5):
                window = plane[y - 1:y + 2, x - 1:x + 2]
                assert blurred[y, x] == pytest.approx(window.mean())

    def test_constant_fixed_point(self):
        plane = np.full((5, 5), 0.3)
        np.testing.assert_allclose(box_blur3(plane), 0.3, atol=1e-15)
