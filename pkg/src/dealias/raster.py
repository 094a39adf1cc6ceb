"""Image container and bit-exact file I/O.

Supported formats are binary PGM (P5) and PPM (P6) with maxval 255, and
8-bit grayscale or truecolor PNG.  Intensities are kept as normalized
floats in [0, 1]; quantization to bytes happens exactly once, on save.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import PIL.Image


class RasterError(Exception):
    """Base class for image I/O failures."""


class UnsupportedFormatError(RasterError):
    """File is not a binary PGM/PPM or an 8-bit gray/RGB PNG."""


class TruncatedFileError(RasterError):
    """File ended before the full raster could be read."""


class ZeroDimensionError(RasterError):
    """Header declares a zero (or negative) width or height."""


_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True, eq=False)
class Image:
    """Multi-band raster of normalized intensities.

    Each plane is a float64 array of shape ``(height, width)``; pixel
    ``(x, y)`` of band ``b`` is ``planes[b][y, x]``.  All stored values
    satisfy ``0.0 <= v <= 1.0``.
    """

    width: int
    height: int
    planes: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ZeroDimensionError(
                f"zero dimensions: {self.width}x{self.height}"
            )
        if not self.planes:
            raise ValueError("image needs at least one band")
        for plane in self.planes:
            if plane.shape != (self.height, self.width):
                raise ValueError(
                    f"plane shape {plane.shape} does not match "
                    f"{self.height}x{self.width}"
                )
            if float(plane.min()) < 0.0 or float(plane.max()) > 1.0:
                raise ValueError("intensities must lie in [0, 1]")

    @property
    def bands(self) -> int:
        return len(self.planes)

    def copy(self) -> "Image":
        return Image(self.width, self.height,
                     tuple(p.copy() for p in self.planes))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Image":
        """Build an image from an (H, W) or (H, W, C) float array."""
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim == 2:
            return cls(arr.shape[1], arr.shape[0], (arr.copy(),))
        if arr.ndim == 3:
            planes = tuple(arr[:, :, c].copy() for c in range(arr.shape[2]))
            return cls(arr.shape[1], arr.shape[0], planes)
        raise ValueError(f"expected 2-D or 3-D array, got {arr.ndim}-D")

    def to_array(self) -> np.ndarray:
        """Return an (H, W) array for 1 band, else (H, W, C)."""
        if self.bands == 1:
            return self.planes[0].copy()
        return np.stack(self.planes, axis=-1)


def quantize(plane: np.ndarray) -> np.ndarray:
    """Map [0, 1] floats to bytes, rounding halves away from zero."""
    return np.floor(plane * 255.0 + 0.5).astype(np.uint8)


def _skip_pnm_space(data: bytes, i: int) -> int:
    while i < len(data):
        c = data[i:i + 1]
        if c.isspace():
            i += 1
        elif c == b"#":
            while i < len(data) and data[i:i + 1] != b"\n":
                i += 1
        else:
            break
    return i


def _read_pnm_token(data: bytes, i: int) -> tuple[bytes, int]:
    i = _skip_pnm_space(data, i)
    start = i
    while i < len(data) and not data[i:i + 1].isspace():
        i += 1
    if start == i:
        raise TruncatedFileError("header ended before raster data")
    return data[start:i], i


def _load_pnm(data: bytes) -> Image:
    magic = data[:2]
    bands = 1 if magic == b"P5" else 3
    i = 2
    fields = []
    for _ in range(3):
        token, i = _read_pnm_token(data, i)
        if not token.isdigit():
            raise UnsupportedFormatError(f"bad header token {token!r}")
        fields.append(int(token))
    width, height, maxval = fields
    if width == 0 or height == 0:
        raise ZeroDimensionError(f"zero dimensions: {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormatError(f"unsupported maxval {maxval}")
    # Exactly one whitespace byte separates the header from the raster.
    if i >= len(data) or not data[i:i + 1].isspace():
        raise TruncatedFileError("missing raster separator")
    raster = data[i + 1:]
    needed = width * height * bands
    if len(raster) < needed:
        raise TruncatedFileError(
            f"raster has {len(raster)} bytes, needs {needed}"
        )
    samples = np.frombuffer(raster[:needed], dtype=np.uint8)
    samples = samples.reshape(height, width, bands).astype(np.float64) / 255.0
    planes = tuple(samples[:, :, b].copy() for b in range(bands))
    return Image(width, height, planes)


def _load_png(data: bytes) -> Image:
    try:
        pil = PIL.Image.open(io.BytesIO(data))
        pil.load()
    except PIL.UnidentifiedImageError as exc:
        raise UnsupportedFormatError(str(exc)) from exc
    except OSError as exc:
        raise TruncatedFileError(str(exc)) from exc
    if pil.mode in ("LA", "RGBA", "PA"):
        raise UnsupportedFormatError("alpha channel is not supported")
    if pil.mode not in ("L", "RGB"):
        raise UnsupportedFormatError(f"unsupported PNG mode {pil.mode}")
    arr = np.asarray(pil, dtype=np.float64) / 255.0
    return Image.from_array(arr)


def load_image(path) -> Image:
    """Load a binary PGM/PPM or 8-bit PNG as a normalized image."""
    data = Path(path).read_bytes()
    if data[:2] in (b"P5", b"P6"):
        return _load_pnm(data)
    if data[:8] == _PNG_MAGIC:
        return _load_png(data)
    raise UnsupportedFormatError(f"unrecognized file magic in {path}")


def save_image(image: Image, path) -> None:
    """Write an 8-bit file; the format is chosen by the extension.

    ``.pgm`` requires one band, ``.ppm`` three; ``.pnm`` picks P5/P6 from
    the band count; ``.png`` accepts either.
    """
    path = Path(path)
    suffix = path.suffix.lower()
    raw = np.stack([quantize(p) for p in image.planes], axis=-1)
    if suffix in (".pgm", ".ppm", ".pnm"):
        if suffix == ".pgm" and image.bands != 1:
            raise UnsupportedFormatError("PGM requires a single band")
        if suffix == ".ppm" and image.bands != 3:
            raise UnsupportedFormatError("PPM requires three bands")
        if image.bands == 1:
            magic = b"P5"
        elif image.bands == 3:
            magic = b"P6"
        else:
            raise UnsupportedFormatError(
                f"cannot store {image.bands} bands as PNM"
            )
        header = magic + b"\n%d %d\n255\n" % (image.width, image.height)
        path.write_bytes(header + raw.tobytes())
    elif suffix == ".png":
        if image.bands == 1:
            pil = PIL.Image.fromarray(raw[:, :, 0], mode="L")
        elif image.bands == 3:
            pil = PIL.Image.fromarray(raw, mode="RGB")
        else:
            raise UnsupportedFormatError(
                f"cannot store {image.bands} bands as PNG"
            )
        pil.save(path)
    else:
        raise UnsupportedFormatError(f"unsupported extension {suffix!r}")


def band_average(image: Image) -> Image:
    """Average all bands into a single-band image.

    Computed as band 0 plus the mean deviation from it, so an image
    whose bands are identical averages to them bit-exactly.
    """
    if image.bands == 1:
        return image.copy()
    first = image.planes[0]
    deviation = np.zeros_like(first)
    for plane in image.planes[1:]:
        deviation += plane - first
    mean = np.clip(first + deviation / image.bands, 0.0, 1.0)
    return Image(image.width, image.height, (mean,))
