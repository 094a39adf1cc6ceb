"""Edge detection tuned for aliased boundaries.

The detector marks "roof" ridges of the Sobel gradient map by counting,
per pixel, how many angled scan-line bump tests it passes (its
peakiness), thresholds the counts, and thins the result to unit width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .raster import Image

# Largest Sobel response reachable on [0, 1] input; pins the meaning of
# the bump thresholds d_p on the normalized gradient scale.
SOBEL_NORM = 4.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class PeakinessConfig:
    """Scan-angle count, pass schedule and edge threshold.

    ``radii``/``deltas`` override the default per-pass schedule
    (r_p = p + 2, d_p = 0.015 + 0.005 p for p = 1..p_max).  Mirrored
    angles extend the scans into (-pi/2, 0) for symmetric orientation
    coverage; the default scans (0, pi/2) only.
    """

    n_angles: int = 7
    p_max: int = 3
    e_min: int = 6
    radii: tuple[int, ...] | None = None
    deltas: tuple[float, ...] | None = None
    include_mirrored: bool = False

    def schedule(self) -> list[tuple[int, float]]:
        radii = self.radii
        if radii is None:
            radii = tuple(p + 2 for p in range(1, self.p_max + 1))
        deltas = self.deltas
        if deltas is None:
            deltas = tuple(0.015 + 0.005 * p for p in range(1, self.p_max + 1))
        if len(radii) != self.p_max or len(deltas) != self.p_max:
            raise ValueError("pass schedule length must equal p_max")
        return list(zip(radii, deltas))

    def angles(self) -> list[float]:
        base = [(i + 0.5) * (math.pi / 2) / self.n_angles
                for i in range(self.n_angles)]
        if self.include_mirrored:
            base = base + [-a for a in base]
        return base


def sobel_gradient(image: Image, normalization: float = SOBEL_NORM) -> np.ndarray:
    """Normalized Sobel gradient magnitude, one band.

    Multi-band images are processed per band and the magnitude maps
    averaged.  Borders are edge-replicated.
    """
    mags = []
    for plane in image.planes:
        p = np.pad(plane, 1, mode="edge")
        left = p[:-2, :-2] + 2.0 * p[1:-1, :-2] + p[2:, :-2]
        right = p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:]
        top = p[:-2, :-2] + 2.0 * p[:-2, 1:-1] + p[:-2, 2:]
        bottom = p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:]
        gx = right - left
        gy = bottom - top
        mags.append(np.hypot(gx, gy))
    return np.mean(mags, axis=0) / normalization


def _minor_offsets(slope: float, n: int) -> np.ndarray:
    # Midpoint digitization: ties at .5 round up.
    return np.floor(slope * np.arange(n) + 0.5).astype(np.int64)


def scan_lines(angle: float, width: int, height: int) -> list[list[tuple[int, int]]]:
    """Digitized scan lines at ``angle`` to the horizontal axis.

    For |angle| <= pi/4 lines advance one pixel at a time along x and
    consecutive lines are one vertical pixel apart; steeper angles swap
    the roles of the axes.  Together the lines for one angle cover every
    pixel exactly once.  Negative angles mirror the direction.
    """
    if width <= 0 or height <= 0:
        raise ValueError(f"degenerate dimensions {width}x{height}")
    if not 0.0 < abs(angle) < math.pi / 2:
        raise ValueError(f"angle must lie in (0, pi/2), got {angle}")
    if abs(angle) <= math.pi / 4:
        off = _minor_offsets(math.tan(angle), width)
        lines = []
        for k in range(-int(off.max()), height - int(off.min())):
            line = [(x, k + int(off[x])) for x in range(width)
                    if 0 <= k + off[x] < height]
            if line:
                lines.append(line)
        return lines
    off = _minor_offsets(1.0 / math.tan(angle), height)
    lines = []
    for k in range(-int(off.max()), width - int(off.min())):
        line = [(k + int(off[y]), y) for y in range(height)
                if 0 <= k + off[y] < width]
        if line:
            lines.append(line)
    return lines


def _bump_pass(grad: np.ndarray, slope: float, r: int, d: float) -> np.ndarray:
    """One bump test per pixel for shallow lines of the given slope.

    Pixel (x, y) lies on exactly one line per angle, at line position x,
    so the test against the two same-line pixels r steps away reduces to
    per-column row offsets; positions past either end of a line yield no
    increment.
    """
    h, w = grad.shape
    off = _minor_offsets(slope, w)
    cols = np.arange(w)
    rows = np.arange(h)[:, None]

    def side(sign: int) -> np.ndarray:
        shifted_cols = cols + sign * r
        ok = (shifted_cols >= 0) & (shifted_cols < w)
        safe_cols = np.clip(shifted_cols, 0, w - 1)
        dy = off[safe_cols] - off[cols]
        nbr_rows = rows + dy[None, :]
        valid = ok[None, :] & (nbr_rows >= 0) & (nbr_rows < h)
        vals = grad[np.clip(nbr_rows, 0, h - 1), safe_cols[None, :]]
        return valid & (grad > vals + d)

    return side(-1) & side(+1)


def accumulate_peakiness(grad: np.ndarray, cfg: PeakinessConfig | None = None) -> np.ndarray:
    """Count passed bump tests per pixel across all passes and angles."""
    if cfg is None:
        cfg = PeakinessConfig()
    peak = np.zeros(grad.shape, dtype=np.int64)
    for r, d in cfg.schedule():
        for a in cfg.angles():
            if abs(a) <= math.pi / 4:
                peak += _bump_pass(grad, math.tan(a), r, d)
            else:
                peak += _bump_pass(grad.T, 1.0 / math.tan(a), r, d).T
    return peak


def threshold_edges(peak: np.ndarray, e_min: int = 6) -> np.ndarray:
    """Edge mask of pixels whose peakiness reaches ``e_min``."""
    return peak >= e_min


# Neighbor bit order N, NE, E, SE, S, SW, W, NW as (dx, dy).
_OFFSETS = ((0, -1), (1, -1), (1, 0), (1, 1),
            (0, 1), (-1, 1), (-1, 0), (-1, -1))


def _component_count(cells, adjacent) -> int:
    remaining = list(cells)
    count = 0
    while remaining:
        count += 1
        stack = [remaining.pop()]
        while stack:
            cur = stack.pop()
            linked = [c for c in remaining if adjacent(cur, c)]
            for c in linked:
                remaining.remove(c)
            stack.extend(linked)
    return count


def _build_tables():
    simple = np.zeros(256, dtype=bool)
    b_ok = np.zeros(256, dtype=bool)
    step0 = np.zeros(256, dtype=bool)
    step1 = np.zeros(256, dtype=bool)
    four_positions = {(0, -1), (1, 0), (0, 1), (-1, 0)}
    for code in range(256):
        fg = [_OFFSETS[i] for i in range(8) if code >> i & 1]
        bg = [_OFFSETS[i] for i in range(8) if not code >> i & 1]
        b = len(fg)
        b_ok[code] = 2 <= b <= 6

        n, ne, e, se, s, sw, wst, nw = (bool(code >> i & 1) for i in range(8))
        step0[code] = not (n and e and s) and not (e and s and wst)
        step1[code] = not (n and e and wst) and not (n and s and wst)

        if not fg:
            continue
        fg_comps = _component_count(
            fg, lambda a, c: max(abs(a[0] - c[0]), abs(a[1] - c[1])) == 1)
        if fg_comps != 1:
            continue
        # Background components (4-connected within the ring) that touch
        # a 4-neighbor; exactly one means deletion keeps the local
        # background topology intact.
        bg_remaining = list(bg)
        touching = 0
        while bg_remaining:
            stack = [bg_remaining.pop()]
            comp = [stack[0]]
            while stack:
                cur = stack.pop()
                linked = [c for c in bg_remaining
                          if abs(cur[0] - c[0]) + abs(cur[1] - c[1]) == 1]
                for c in linked:
                    bg_remaining.remove(c)
                comp.extend(linked)
                stack.extend(linked)
            if any(c in four_positions for c in comp):
                touching += 1
        simple[code] = touching == 1
    return simple, b_ok, step0, step1


_SIMPLE, _B_OK, _STEP0, _STEP1 = _build_tables()


def _neighbor_codes(padded: np.ndarray) -> np.ndarray:
    h, w = padded.shape[0] - 2, padded.shape[1] - 2
    code = np.zeros((h, w), dtype=np.int64)
    for i, (dx, dy) in enumerate(_OFFSETS):
        code |= padded[1 + dy:1 + dy + h, 1 + dx:1 + dx + w].astype(np.int64) << i
    return code


def _local_code(padded: np.ndarray, y: int, x: int) -> int:
    code = 0
    for i, (dx, dy) in enumerate(_OFFSETS):
        if padded[y + dy, x + dx]:
            code |= 1 << i
    return code


def thin(mask: np.ndarray) -> np.ndarray:
    """Thin an edge mask to unit width.

    Two-subiteration thinning in the Zhang-Suen style: each subiteration
    collects candidates in parallel, then deletes them sequentially in
    row-major order, re-testing against the live mask so that deletion
    never splits or erases an 8-connected component and never shortens a
    line end.  Runs to a fixed point, hence idempotent.
    """
    m = np.pad(np.asarray(mask, dtype=bool), 1, constant_values=False)
    changed = True
    while changed:
        changed = False
        for step in (_STEP0, _STEP1):
            code = _neighbor_codes(m)
            cand = m[1:-1, 1:-1] & _SIMPLE[code] & _B_OK[code] & step[code]
            ys, xs = np.nonzero(cand)
            for y, x in zip(ys.tolist(), xs.tolist()):
                c = _local_code(m, y + 1, x + 1)
                if _SIMPLE[c] and _B_OK[c] and step[c]:
                    m[y + 1, x + 1] = False
                    changed = True
    return m[1:-1, 1:-1]


def detect_edges(image: Image, cfg: PeakinessConfig | None = None,
                 normalization: float = SOBEL_NORM) -> np.ndarray:
    """Gradient -> peakiness -> threshold -> thin, in one call."""
    if cfg is None:
        cfg = PeakinessConfig()
    grad = sobel_gradient(image, normalization)
    peak = accumulate_peakiness(grad, cfg)
    return thin(threshold_edges(peak, cfg.e_min))


def mask_to_image(mask: np.ndarray) -> Image:
    """Edge mask as a saveable image (background 0, edges full white)."""
    return Image.from_array(np.asarray(mask, dtype=np.float64))


def image_to_mask(image: Image) -> np.ndarray:
    """Inverse of :func:`mask_to_image` for golden-file comparisons."""
    return image.planes[0] > 0.5
