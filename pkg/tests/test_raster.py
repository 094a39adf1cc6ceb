import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import PIL.Image

from dealias.raster import (Image, TruncatedFileError, UnsupportedFormatError,
                            ZeroDimensionError, band_average, load_image,
                            quantize, save_image)


def write_pgm(path, width, height, payload, maxval=255, magic=b"P5"):
    path.write_bytes(magic + b"\n%d %d\n%d\n" % (width, height, maxval) + payload)


class TestLoad:
    def test_pgm_values_scaled(self, tmp_path):
        p = tmp_path / "t.pgm"
        write_pgm(p, 2, 2, bytes([0, 255, 128, 64]))
        img = load_image(p)
        assert img.bands == 1
        expected = np.array([[0, 255], [128, 64]]) / 255.0
        np.testing.assert_array_equal(img.planes[0], expected)

    def test_ppm_three_bands(self, tmp_path):
        p = tmp_path / "t.ppm"
        write_pgm(p, 1, 1, bytes([255, 0, 0]), magic=b"P6")
        img = load_image(p)
        assert img.bands == 3
        assert [float(pl[0, 0]) for pl in img.planes] == [1.0, 0.0, 0.0]

    def test_zero_width_rejected(self, tmp_path):
        p = tmp_path / "z.pgm"
        write_pgm(p, 0, 2, b"")
        with pytest.raises(ZeroDimensionError):
            load_image(p)

    def test_truncated_raster(self, tmp_path):
        p = tmp_path / "t.pgm"
        write_pgm(p, 4, 4, bytes(7))
        with pytest.raises(TruncatedFileError):
            load_image(p)

    def test_unknown_magic(self, tmp_path):
        p = tmp_path / "t.pgm"
        p.write_bytes(b"P3\n1 1\n255\n0")
        with pytest.raises(UnsupportedFormatError):
            load_image(p)

    def test_bad_maxval(self, tmp_path):
        p = tmp_path / "t.pgm"
        write_pgm(p, 1, 1, bytes([0, 0]), maxval=65535)
        with pytest.raises(UnsupportedFormatError):
            load_image(p)

    def test_header_comments_skipped(self, tmp_path):
        p = tmp_path / "t.pgm"
        p.write_bytes(b"P5\n# a comment\n2 1\n# another\n255\n\x10\x20")
        img = load_image(p)
        assert img.width == 2 and img.height == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_image(tmp_path / "nope.pgm")

    def test_png_roundtrip(self, tmp_path):
        rng = np.random.default_rng(0)
        img = Image.from_array(rng.integers(0, 256, (5, 7)) / 255.0)
        p = tmp_path / "t.png"
        save_image(img, p)
        back = load_image(p)
        np.testing.assert_array_equal(back.planes[0], img.planes[0])

    def test_png_alpha_rejected(self, tmp_path):
        p = tmp_path / "a.png"
        PIL.Image.new("RGBA", (3, 3)).save(p)
        with pytest.raises(UnsupportedFormatError):
            load_image(p)

    def test_png_palette_rejected(self, tmp_path):
        p = tmp_path / "p.png"
        PIL.Image.new("P", (3, 3)).save(p)
        with pytest.raises(UnsupportedFormatError):
            load_image(p)


class TestSave:
    def test_half_rounds_up(self, tmp_path):
        img = Image.from_array(np.full((1, 1), 0.5))
        p = tmp_path / "t.pgm"
        save_image(img, p)
        assert p.read_bytes()[-1] == 128

    def test_endpoint(self, tmp_path):
        img = Image.from_array(np.full((1, 1), 1.0))
        p = tmp_path / "t.pgm"
        save_image(img, p)
        assert p.read_bytes()[-1] == 255

    def test_band_count_enforced(self, tmp_path):
        gray = Image.from_array(np.zeros((2, 2)))
        with pytest.raises(UnsupportedFormatError):
            save_image(gray, tmp_path / "t.ppm")
        rgb = Image.from_array(np.zeros((2, 2, 3)))
        with pytest.raises(UnsupportedFormatError):
            save_image(rgb, tmp_path / "t.pgm")

    def test_unknown_extension(self, tmp_path):
        img = Image.from_array(np.zeros((2, 2)))
        with pytest.raises(UnsupportedFormatError):
            save_image(img, tmp_path / "t.bmp")

    def test_unwritable_path(self, tmp_path):
        img = Image.from_array(np.zeros((2, 2)))
        with pytest.raises(OSError):
            save_image(img, tmp_path / "missing" / "dir" / "t.pgm")

    @given(st.integers(1, 16), st.integers(1, 16), st.integers(0, 2 ** 32 - 1),
           st.sampled_from([".pgm", ".png"]))
    @settings(max_examples=40, deadline=None)
    def test_roundtrip_is_identity_on_quantized(self, tmp_path_factory,
                                                w, h, seed, suffix):
        rng = np.random.default_rng(seed)
        img = Image.from_array(rng.integers(0, 256, (h, w)) / 255.0)
        p = tmp_path_factory.mktemp("rt") / f"rt{suffix}"
        save_image(img, p)
        back = load_image(p)
        np.testing.assert_array_equal(back.planes[0], img.planes[0])

    def test_ppm_roundtrip(self, tmp_path):
        rng = np.random.default_rng(3)
        img = Image.from_array(rng.integers(0, 256, (4, 6, 3)) / 255.0)
        p = tmp_path / "c.ppm"
        save_image(img, p)
        back = load_image(p)
        for a, b in zip(back.planes, img.planes):
            np.testing.assert_array_equal(a, b)

    def test_quantize_half_away_from_zero(self):
        vals = np.array([0.0, 0.5 / 255, 1.5 / 255, 127.5 / 255, 1.0])
        np.testing.assert_array_equal(quantize(vals), [0, 1, 2, 128, 255])


class TestImageInvariants:
    def test_plane_shape_checked(self):
        with pytest.raises(ValueError):
            Image(2, 2, (np.zeros((3, 2)),))

    def test_range_checked(self):
        with pytest.raises(ValueError):
            Image(2, 2, (np.full((2, 2), 1.5),))

    def test_zero_dims_checked(self):
        with pytest.raises(ZeroDimensionError):
            Image(0, 2, (np.zeros((2, 0)),))

    def test_copy_is_deep(self):
        img = Image.from_array(np.zeros((2, 2)))
        dup = img.copy()
        dup.planes[0][0, 0] = 1.0
        assert img.planes[0][0, 0] == 0.0


class TestBandAverage:
    def test_single_band_identity(self):
        img = Image.from_array(np.random.default_rng(1).random((3, 3)))
        np.testing.assert_array_equal(band_average(img).planes[0], img.planes[0])

    def test_mean_of_three(self):
        arr = np.zeros((1, 1, 3))
        arr[0, 0] = [0.0, 0.5, 1.0]
        assert band_average(Image.from_array(arr)).planes[0][0, 0] == 0.5

    def test_equal_bands_unchanged(self):
        plane = np.random.default_rng(2).random((4, 4))
        img = Image(4, 4, (plane.copy(), plane.copy(), plane.copy()))
        np.testing.assert_array_equal(band_average(img).planes[0], plane)

    def test_bounded_by_band_extremes(self):
        rng = np.random.default_rng(4)
        img = Image.from_array(rng.random((5, 5, 3)))
        avg = band_average(img).planes[0]
        stacked = np.stack(img.planes)
        assert np.all(avg >= stacked.min(axis=0) - 1e-15)
        assert np.all(avg <= stacked.max(axis=0) + 1e-15)
