"""Approximately straight edge fragments and their aliasing periods.

A fragment is a coordinate-monotone stretch of a chain whose pixels all
stay within ``s_d * U`` of the straight line between its endpoints; the
staircase period of such a stretch follows from the endpoint slope and
the upsampling scale.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chains import Chain, trace_chains  # re-exported surface

__all__ = [
    "Fragment", "FragmentConfig", "Chain", "trace_chains",
    "is_approximately_straight", "monotone_orientation",
    "extract_fragments", "estimate_period", "dump_fragments",
]


@dataclass(frozen=True)
class FragmentConfig:
    """Straightness coefficient and the upsampling scale it is tied to."""

    s_d: float = 0.4
    scale: int = 4

    def __post_init__(self):
        if self.s_d <= 0:
            raise ValueError("s_d must be positive")
        if self.scale < 2:
            raise ValueError("scale must be at least 2")

    @property
    def max_distance(self) -> float:
        return self.s_d * self.scale


@dataclass
class Fragment:
    """Ordered pixels of one approximately straight stretch.

    ``orientation`` is 'h' when the x coordinates are strictly monotone
    (ties resolve to 'h'), 'v' when only the y coordinates are.  ``l0``
    is the aliasing period in upsampled pixels, ``None`` when the
    endpoints are axis-aligned.
    """

    pixels: list[tuple[int, int]]
    orientation: str
    l0: float | None = None

    def __len__(self) -> int:
        return len(self.pixels)

    @property
    def n_b(self) -> int:
        return len(self.pixels)

    @property
    def endpoints(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return self.pixels[0], self.pixels[-1]


def is_approximately_straight(pixels, d: float) -> bool:
    """True when every pixel is within ``d`` of the endpoint line."""
    if len(pixels) < 2:
        raise ValueError("need at least 2 pixels")
    (x0, y0), (x1, y1) = pixels[0], pixels[-1]
    dx, dy = x1 - x0, y1 - y0
    norm_sq = dx * dx + dy * dy
    if norm_sq == 0:
        return all((px - x0) ** 2 + (py - y0) ** 2 <= d * d for px, py in pixels)
    # |cross| / |line| <= d, compared without the division.
    limit = d * d * norm_sq
    for px, py in pixels:
        cross = dx * (py - y0) - dy * (px - x0)
        if cross * cross > limit:
            return False
    return True


def _strictly_monotone(values) -> bool:
    increasing = all(b > a for a, b in zip(values, values[1:]))
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    return increasing or decreasing


def monotone_orientation(pixels) -> str | None:
    """'h' for strictly monotone x, 'v' for strictly monotone y only."""
    xs = [p[0] for p in pixels]
    ys = [p[1] for p in pixels]
    if _strictly_monotone(xs):
        return "h"
    if _strictly_monotone(ys):
        return "v"
    return None


def estimate_period(fragment: Fragment, scale: int) -> float | None:
    """Aliasing period from the endpoint slope, in upsampled pixels.

    ``None`` when the fragment is exactly axis-aligned (the staircase
    has no finite period there).
    """
    (x0, y0), (xl, yl) = fragment.endpoints
    dx, dy = xl - x0, yl - y0
    if dx == 0 and dy == 0:
        raise ValueError("fragment endpoints coincide")
    if abs(dx) >= abs(dy):
        if dy == 0:
            return None
        return scale * abs(dx / dy)
    if dx == 0:
        return None
    return scale * abs(dy / dx)


def extract_fragments(chain: Chain, cfg: FragmentConfig | None = None) -> list[Fragment]:
    """Greedily split a chain into disjoint consecutive fragments.

    Starting from the chain's first pixel, the candidate grows until
    adding the next pixel would break either coordinate monotonicity or
    straightness; the fragment is then emitted and the next one starts
    at the first unassigned pixel.
    """
    if cfg is None:
        cfg = FragmentConfig()
    d = cfg.max_distance
    pixels = chain.pixels
    fragments: list[Fragment] = []
    i = 0
    while i < len(pixels):
        j = i + 1
        while j < len(pixels):
            candidate = pixels[i:j + 1]
            if monotone_orientation(candidate) is None:
                break
            if not is_approximately_straight(candidate, d):
                break
            j += 1
        part = pixels[i:j]
        orientation = monotone_orientation(part) or "h"
        fragment = Fragment(list(part), orientation)
        if len(part) >= 2:
            fragment.l0 = estimate_period(fragment, cfg.scale)
        fragments.append(fragment)
        i = j
    return fragments


def dump_fragments(fragments) -> str:
    """One text record per fragment (stage-dump format)."""
    lines = []
    for idx, frag in enumerate(fragments):
        (x0, y0), (xl, yl) = frag.endpoints
        l0 = "undefined" if frag.l0 is None else f"{frag.l0:.6g}"
        lines.append(
            f"id={idx} orientation={frag.orientation} "
            f"x0={x0} y0={y0} xl={xl} yl={yl} n_b={frag.n_b} l0={l0}"
        )
    return "\n".join(lines) + ("\n" if lines else "")
