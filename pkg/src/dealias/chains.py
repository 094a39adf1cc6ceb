"""Ordered pixel chains traced from thinned edge masks.

Branch pixels (three or more edge neighbors) delimit chains and belong
to none of them; the rest of the mask decomposes into simple 8-connected
paths, each further decomposable into maximal axis-aligned runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Fixed scan order for neighbor visits: row-major by (dy, dx).
NEIGHBOR_OFFSETS = ((-1, -1), (0, -1), (1, -1),
                    (-1, 0), (1, 0),
                    (-1, 1), (0, 1), (1, 1))


def neighbor_counts(mask: np.ndarray) -> np.ndarray:
    """Number of set 8-neighbors per pixel."""
    padded = np.pad(np.asarray(mask, dtype=bool), 1, constant_values=False)
    h, w = mask.shape
    counts = np.zeros((h, w), dtype=np.int64)
    for dx, dy in NEIGHBOR_OFFSETS:
        counts += padded[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]
    return counts


def branch_points(mask: np.ndarray) -> np.ndarray:
    """Pixels with more than two edge neighbors (chain delimiters)."""
    return mask & (neighbor_counts(mask) >= 3)


# Clockwise 8-cycle around a pixel, used for arc counting.
_CYCLE = ((0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1))


def arc_counts(mask: np.ndarray) -> np.ndarray:
    """Number of distinct edge arcs leaving each pixel.

    Counts 0-to-1 transitions around the 8-neighbor cycle; a straight
    path pixel scores 2, a junction joining three branches scores 3,
    and a stub tip whose neighbors are one contiguous arc scores 1.
    """
    padded = np.pad(np.asarray(mask, dtype=bool), 1, constant_values=False)
    h, w = mask.shape
    ring = [padded[1 + dy:1 + dy + h, 1 + dx:1 + dx + w] for dx, dy in _CYCLE]
    count = np.zeros((h, w), dtype=np.int64)
    for i in range(8):
        count += ~ring[i] & ring[(i + 1) % 8]
    return count


def junction_points(mask: np.ndarray) -> np.ndarray:
    """Pixels connecting three or more branches (segment delimiters).

    Uses the arc count rather than the raw neighbor count, so the tip of
    a one-pixel stub leaning against a straight run is part of the stub,
    not a delimiter.
    """
    return mask & (arc_counts(mask) >= 3)


@dataclass
class Run:
    """Maximal horizontal or vertical stretch of 4-adjacent chain pixels.

    ``orientation`` is 'h' or 'v'; single-pixel runs carry ``None`` and
    are compatible with either.
    """

    orientation: str | None
    pixels: list[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.pixels)


@dataclass
class Chain:
    """Ordered simple path of 8-adjacent edge pixels."""

    pixels: list[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.pixels)

    @property
    def endpoints(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return self.pixels[0], self.pixels[-1]

    def runs(self) -> list[Run]:
        return decompose_runs(self.pixels)


def decompose_runs(pixels: list[tuple[int, int]]) -> list[Run]:
    """Split an ordered pixel path into maximal axis-aligned runs.

    A diagonal step always closes the current run; a 4-adjacent step of
    the other axis closes it too, so the runs concatenate exactly back
    to the input.
    """
    if not pixels:
        return []
    runs: list[Run] = []
    cur = [pixels[0]]
    axis: str | None = None
    for a, b in zip(pixels, pixels[1:]):
        dx, dy = b[0] - a[0], b[1] - a[1]
        if dx != 0 and dy != 0:
            runs.append(Run(axis, cur))
            cur, axis = [b], None
            continue
        step_axis = "h" if dy == 0 else "v"
        if axis is None or axis == step_axis:
            axis = step_axis
            cur.append(b)
        else:
            runs.append(Run(axis, cur))
            cur, axis = [b], None
    runs.append(Run(axis, cur))
    return runs


def _neighbors_of(p, member) -> list[tuple[int, int]]:
    x, y = p
    return [(x + dx, y + dy) for dx, dy in NEIGHBOR_OFFSETS
            if member(x + dx, y + dy)]


def trace_chains(mask: np.ndarray) -> list[Chain]:
    """Trace every non-branch edge pixel into exactly one chain.

    Chains are maximal simple 8-connected paths delimited by endpoints
    or branch pixels.  Open paths are traced from their row-major first
    endpoint; closed loops start at their row-major first pixel.
    """
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    keep = mask & ~branch_points(mask)

    def member(x: int, y: int) -> bool:
        return 0 <= x < w and 0 <= y < h and keep[y, x]

    degree = np.zeros((h, w), dtype=np.int64)
    padded = np.pad(keep, 1, constant_values=False)
    for dx, dy in NEIGHBOR_OFFSETS:
        degree += padded[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]

    visited = np.zeros((h, w), dtype=bool)
    chains: list[Chain] = []

    def walk(start: tuple[int, int]) -> Chain:
        pixels = [start]
        visited[start[1], start[0]] = True
        cur = start
        while True:
            nxt = None
            for q in _neighbors_of(cur, member):
                if not visited[q[1], q[0]]:
                    nxt = q
                    break
            if nxt is None:
                return Chain(pixels)
            visited[nxt[1], nxt[0]] = True
            pixels.append(nxt)
            cur = nxt

    # Open paths first, anchored at their endpoints.
    ys, xs = np.nonzero(keep & (degree <= 1))
    for y, x in zip(ys.tolist(), xs.tolist()):
        if not visited[y, x]:
            chains.append(walk((x, y)))
    # What remains are closed loops of degree-2 pixels.
    ys, xs = np.nonzero(keep)
    for y, x in zip(ys.tolist(), xs.tolist()):
        if not visited[y, x]:
            chains.append(walk((x, y)))
    return chains
