"""Separable integer-factor upsampling.

Output pixel centers map to source coordinates via
``(X + 0.5) / U - 0.5``; source sampling outside the image is
border-replicated.
"""

from __future__ import annotations

import numpy as np

from .raster import Image


def catmull_rom_kernel(t: np.ndarray) -> np.ndarray:
    """Cubic convolution kernel with a = -0.5 (Catmull-Rom)."""
    a = -0.5
    t = np.abs(np.asarray(t, dtype=np.float64))
    out = np.zeros_like(t)
    near = t <= 1.0
    far = (t > 1.0) & (t < 2.0)
    out[near] = (a + 2.0) * t[near] ** 3 - (a + 3.0) * t[near] ** 2 + 1.0
    out[far] = a * t[far] ** 3 - 5.0 * a * t[far] ** 2 + 8.0 * a * t[far] - 4.0 * a
    return out


def tent_kernel(t: np.ndarray) -> np.ndarray:
    t = np.abs(np.asarray(t, dtype=np.float64))
    return np.maximum(0.0, 1.0 - t)


def _axis_taps(src_len: int, factor: int, kernel, support: int):
    """Tap indices (clamped) and weights for one resampled axis."""
    out_len = src_len * factor
    sx = (np.arange(out_len, dtype=np.float64) + 0.5) / factor - 0.5
    base = np.floor(sx).astype(np.int64)
    frac = sx - base
    offsets = np.arange(1 - support, support + 1)
    idx = base[:, None] + offsets[None, :]
    weights = kernel(frac[:, None] - offsets[None, :])
    idx = np.clip(idx, 0, src_len - 1)
    return idx, weights


def _resample_plane(plane: np.ndarray, factor: int, kernel, support: int) -> np.ndarray:
    h, w = plane.shape
    xi, xw = _axis_taps(w, factor, kernel, support)
    horiz = np.einsum("hot,ot->ho", plane[:, xi], xw)
    yi, yw = _axis_taps(h, factor, kernel, support)
    return np.einsum("oth,ot->oh", horiz[yi, :], yw)


def _upsample(image: Image, factor: int, kernel, support: int, clamp: bool) -> Image:
    if not isinstance(factor, (int, np.integer)) or factor < 2:
        raise ValueError(f"scale factor must be an integer >= 2, got {factor}")
    if image.width < 4 or image.height < 4:
        raise ValueError(
            f"image smaller than 4x4: {image.width}x{image.height}"
        )
    planes = []
    for plane in image.planes:
        out = _resample_plane(plane, factor, kernel, support)
        if clamp:
            out = np.clip(out, 0.0, 1.0)
        planes.append(out)
    return Image(image.width * factor, image.height * factor, tuple(planes))


def upsample_catmull_rom(image: Image, factor: int) -> Image:
    """Upsample by an integer factor with the Catmull-Rom cubic.

    The cubic can overshoot, so the result is clamped to [0, 1].
    """
    return _upsample(image, factor, catmull_rom_kernel, 2, clamp=True)


def upsample_bilinear(image: Image, factor: int) -> Image:
    """Upsample by an integer factor with the tent kernel."""
    return _upsample(image, factor, tent_kernel, 1, clamp=False)
