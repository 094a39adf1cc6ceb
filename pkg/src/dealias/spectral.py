"""Directional spectral flattening of edge-parallel brightness profiles.

Each fragment contributes one brightness profile per band and per
parallel offset.  A profile is padded with mirror margins to a power of
two, transformed, and its magnitude peak near the aliasing frequency
``f0 = N_C / l0`` is flattened down toward a weighted spectral mean,
phase untouched; the inverse transform is written back to the exact
pixels the profile came from.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .fragments import Fragment
from .raster import Image

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FilterParams:
    """Fragment-length gate (s_l), region growth (s_u), and the widths
    of the spectral-mean weighting (w_s) and of the flattening valley
    (m_s)."""

    s_l: float = 2.0
    s_u: float = 0.25
    w_s: float = 3.0
    m_s: float = 0.03

    def __post_init__(self):
        for name in ("s_l", "s_u", "w_s", "m_s"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def filter_strength(n_b: int, l0: float | None,
                    params: FilterParams | None = None) -> int:
    """Number of one-pixel parallel offsets filtered on each side.

    Zero for fragments shorter than ``s_l * l0``: a profile spanning
    less than a couple of aliasing periods is too easily confused with
    genuine image matter.
    """
    if params is None:
        params = FilterParams()
    if l0 is None or l0 <= 0:
        raise ValueError("fragment period is undefined")
    if n_b < params.s_l * l0:
        return 0
    return int(math.floor(params.s_u * n_b))


@dataclass
class BrightnessProfile:
    """Intensities sampled along one parallel placement of a fragment."""

    values: np.ndarray
    band: int
    offset: int

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))


def profile_coords(fragment: Fragment, offset: int):
    """Pixel coordinates of the fragment shifted ``offset`` pixels
    perpendicular to its orientation (rows for 'h', columns for 'v')."""
    xs = np.array([p[0] for p in fragment.pixels], dtype=np.int64)
    ys = np.array([p[1] for p in fragment.pixels], dtype=np.int64)
    if fragment.orientation == "h":
        ys = ys + offset
    else:
        xs = xs + offset
    return xs, ys


def extract_profile(image: Image, fragment: Fragment, offset: int,
                    band: int) -> BrightnessProfile | None:
    """Brightness profile for one offset, or None when it leaves the image."""
    xs, ys = profile_coords(fragment, offset)
    if xs.min() < 0 or xs.max() >= image.width:
        return None
    if ys.min() < 0 or ys.max() >= image.height:
        return None
    return BrightnessProfile(image.planes[band][ys, xs].copy(), band, offset)


def padded_length(n_b: int) -> int:
    """Smallest power of two leaving at least ``n_b // 2`` pad samples."""
    n_c = 1
    while n_c - n_b < n_b // 2:
        n_c *= 2
    return n_c


@dataclass(frozen=True)
class PaddedSignal:
    """Profile embedded in a power-of-two buffer with mirror margins."""

    values: np.ndarray
    n_b: int

    @property
    def n_c(self) -> int:
        return len(self.values)

    @property
    def m_c(self) -> int:
        return (self.n_c - self.n_b) // 2

    @property
    def e_c(self) -> int:
        return self.m_c + self.n_b - 1


def pad_signal(values) -> PaddedSignal:
    """Center a profile in a power-of-two buffer between mirror margins.

    Each margin reflects the signal about the adjacent buffer edge and
    blends linearly toward the profile mean at the outermost samples,
    which keeps spurious high-frequency content out of the spectrum.
    Margins too short for the blend ramp are filled with the mean.
    """
    b = np.asarray(values, dtype=np.float64).ravel()
    n_b = len(b)
    if n_b < 2:
        raise ValueError("profile needs at least 2 samples")
    n_c = padded_length(n_b)
    m_c = (n_c - n_b) // 2
    e_c = m_c + n_b - 1
    t = float(np.mean(b))
    out = np.empty(n_c, dtype=np.float64)
    out[m_c:e_c + 1] = b
    if m_c > 1:
        x = np.arange(m_c)
        w = x / (m_c - 1)
        out[:m_c] = w * b[m_c - x] + (1.0 - w) * t
    elif m_c == 1:
        out[0] = t
    right = n_c - 1 - e_c
    if right > 0:
        if n_c - 2 - e_c > 0:
            x = np.arange(e_c + 1, n_c)
            w = (n_c - 1 - x) / (n_c - 2 - e_c)
            out[e_c + 1:] = w * b[2 * e_c - x - m_c] + (1.0 - w) * t
        else:
            out[e_c + 1:] = t
    return PaddedSignal(out, n_b)


def _bit_reverse_indices(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def fft(values) -> np.ndarray:
    """Unnormalized forward DFT via iterative radix-2 butterflies.

    The input length must be a power of two.
    """
    x = np.asarray(values, dtype=np.complex128).ravel().copy()
    n = x.size
    if n == 0 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    x = x[_bit_reverse_indices(n)]
    m = 2
    while m <= n:
        half = m // 2
        twiddle = np.exp(-2j * np.pi * np.arange(half) / m)
        blocks = x.reshape(-1, m)
        upper = blocks[:, :half].copy()
        lower = blocks[:, half:] * twiddle
        blocks[:, :half] = upper + lower
        blocks[:, half:] = upper - lower
        m *= 2
    return x


def ifft(spectrum) -> np.ndarray:
    """Inverse DFT scaled by 1/N; complex output.

    For conjugate-symmetric input the imaginary part is numerical noise;
    callers take ``.real``.
    """
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    return np.conj(fft(np.conj(spectrum))) / spectrum.size


def weight_function(f, f0: float, w_s: float = 3.0):
    """Spectral mean weight, peaking near f0/2 and 3 f0/2.

    Both lobes sit away from f0 and from its harmonics, so aliasing
    peaks cannot skew the mean they define.
    """
    f = np.asarray(f, dtype=np.float64)
    w = (1.0 / (1.0 + w_s * (f - 0.5 * f0) ** 2)
         + 1.0 / (1.0 + w_s * (f - 1.5 * f0) ** 2))
    if w.ndim == 0:
        return float(w)
    return w


def weighted_mean(spectrum, f0: float, w_s: float = 3.0) -> float:
    """Weighted mean of spectral magnitudes over the full frequency range."""
    mags = np.abs(np.asarray(spectrum))
    weights = weight_function(np.arange(len(mags)), f0, w_s)
    return float(np.sum(weights * mags) / np.sum(weights))


def mask_function(f, l0: float, n_c: int, m_s: float = 0.03):
    """Flattening mask: 1 leaves a bin alone, 0 pulls it fully to the mean.

    The valley bottoms out at the bin whose period equals ``l0``; the DC
    bin is always exempt.
    """
    f = np.asarray(f, dtype=np.float64)
    scalar = f.ndim == 0
    f = np.atleast_1d(f)
    out = np.ones_like(f)
    nz = f > 0
    out[nz] = np.tanh(m_s * (n_c / f[nz] - l0) ** 2)
    if scalar:
        return float(out[0])
    return out


def flatten_peak(spectrum, m: float, mask) -> np.ndarray:
    """Pull magnitudes above ``m`` toward it where the mask dips below 1.

    ``mask`` covers bins 0 .. N/2; every magnitude edit is applied
    jointly to a bin and its conjugate mirror so the inverse transform
    of a real signal's spectrum stays real.  Phases are preserved
    exactly.
    """
    spectrum = np.asarray(spectrum, dtype=np.complex128).copy()
    n = len(spectrum)
    half = n // 2
    mask = np.asarray(mask, dtype=np.float64).ravel()
    if len(mask) != half + 1:
        raise ValueError(f"mask must cover bins 0..{half}, got {len(mask)}")
    mags = np.abs(spectrum[:half + 1])
    scale = np.ones(half + 1)
    above = mags > m
    target = mask[above] * mags[above] + (1.0 - mask[above]) * m
    scale[above] = target / mags[above]
    spectrum[:half + 1] *= scale
    if half > 1:
        spectrum[half + 1:] *= scale[1:half][::-1]
    return spectrum


def filter_fragment(image: Image, fragment: Fragment,
                    params: FilterParams | None = None,
                    spectrum_sink=None) -> None:
    """Filter every in-bounds profile of a fragment and write it back.

    Mutates ``image`` in place.  Fragments with an undefined or
    sub-Nyquist period, fewer than 4 pixels, or zero filter strength are
    skipped silently (the offset set is empty for strength 0, so even
    the fragment's own pixels stay untouched).

    ``spectrum_sink(band, offset, mags, mask, out_mags, m)`` receives
    the half-spectrum magnitudes before and after flattening plus the
    weighted mean, for dumps.
    """
    if params is None:
        params = FilterParams()
    if fragment.l0 is None or fragment.l0 < 2.0:
        logger.debug("skip fragment: period %s unusable", fragment.l0)
        return
    n_b = fragment.n_b
    if n_b < 4:
        logger.debug("skip fragment: only %d pixels", n_b)
        return
    s_f = filter_strength(n_b, fragment.l0, params)
    if s_f == 0:
        logger.debug("skip fragment: zero filter strength")
        return
    n_c = padded_length(n_b)
    f0 = n_c / fragment.l0
    if f0 > n_c / 2:
        logger.debug("skip fragment: peak above Nyquist")
        return
    half_mask = mask_function(np.arange(n_c // 2 + 1), fragment.l0, n_c,
                              params.m_s)
    for offset in range(-s_f, s_f + 1):
        xs, ys = profile_coords(fragment, offset)
        if (xs.min() < 0 or xs.max() >= image.width
                or ys.min() < 0 or ys.max() >= image.height):
            continue
        for band in range(image.bands):
            padded = pad_signal(image.planes[band][ys, xs])
            spectrum = fft(padded.values)
            m = weighted_mean(spectrum, f0, params.w_s)
            flattened = flatten_peak(spectrum, m, half_mask)
            restored = ifft(flattened).real[padded.m_c:padded.e_c + 1]
            np.clip(restored, 0.0, 1.0, out=restored)
            image.planes[band][ys, xs] = restored
            if spectrum_sink is not None:
                spectrum_sink(band, offset,
                              np.abs(spectrum[:n_c // 2 + 1]),
                              half_mask,
                              np.abs(flattened[:n_c // 2 + 1]),
                              m)
