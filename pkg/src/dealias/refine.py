"""Edge-map cleanup: branch deletion, protruding pixels, waving reduction.

Short branches are deleted in rounds of increasing length so that a
genuine long edge interrupted by tiny branches survives intact.
Staircase "waving" is then reduced by balancing the axis-aligned runs on
either side of movable junctions, each junction limited to a per-pixel
move budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chains import (NEIGHBOR_OFFSETS, Run, decompose_runs, junction_points,
                     neighbor_counts, trace_chains)


@dataclass(frozen=True)
class CleaningConfig:
    """Branch-length cutoff and waving-reduction constants."""

    l_min: int = 4
    l1: int = 3
    l2: int = 1
    n_w: int = 50

    def __post_init__(self):
        if self.l_min < 2:
            raise ValueError("l_min must be at least 2")
        if self.n_w < 1:
            raise ValueError("n_w must be at least 1")


def _m_adjacent(mask: np.ndarray, ax: int, ay: int, bx: int, by: int) -> bool:
    """Mixed adjacency: a diagonal link is void when both pixels share a
    4-neighbor inside the mask (the path runs through that pixel)."""
    if abs(ax - bx) + abs(ay - by) == 1:
        return True
    return not (mask[ay, bx] or mask[by, ax])


def _segments(mask: np.ndarray) -> list[list[tuple[int, int]]]:
    """Edge segments delimited by junction pixels, row-major order.

    Components are taken under mixed adjacency so that a stub leaning
    diagonally against a run does not merge with it around the junction.
    """
    keep = mask & ~junction_points(mask)
    h, w = keep.shape
    seen = np.zeros_like(keep)
    segments = []
    ys, xs = np.nonzero(keep)
    for y, x in zip(ys.tolist(), xs.tolist()):
        if seen[y, x]:
            continue
        seen[y, x] = True
        comp = [(x, y)]
        stack = [(x, y)]
        while stack:
            cx, cy = stack.pop()
            for dx, dy in NEIGHBOR_OFFSETS:
                nx, ny = cx + dx, cy + dy
                if not (0 <= nx < w and 0 <= ny < h):
                    continue
                if keep[ny, nx] and not seen[ny, nx] \
                        and _m_adjacent(mask, cx, cy, nx, ny):
                    seen[ny, nx] = True
                    comp.append((nx, ny))
                    stack.append((nx, ny))
        segments.append(comp)
    return segments


def clean_short_branches(mask: np.ndarray, l_min: int = 4) -> np.ndarray:
    """Delete edge segments of length k for k = 1 .. l_min - 1, in rounds.

    Segments are delimited by branch pixels and re-measured after every
    round, so segments merged by an earlier deletion are judged at their
    new length.
    """
    m = np.asarray(mask, dtype=bool).copy()
    for k in range(1, l_min):
        for seg in _segments(m):
            if len(seg) == k:
                for x, y in seg:
                    m[y, x] = False
    return m


def remove_protruding_pixels(mask: np.ndarray) -> np.ndarray:
    """Drop pixels whose two edge neighbors are adjacent to each other.

    Such a pixel is a triangle jog the chain does not need; removing it
    keeps the neighbors connected.  Deletion is sequential against the
    live mask and repeats until stable, so a second application is a
    no-op.
    """
    m = np.asarray(mask, dtype=bool).copy()
    h, w = m.shape
    changed = True
    while changed:
        changed = False
        counts = neighbor_counts(m)
        ys, xs = np.nonzero(m & (counts == 2))
        for y, x in zip(ys.tolist(), xs.tolist()):
            nbrs = [(x + dx, y + dy) for dx, dy in NEIGHBOR_OFFSETS
                    if 0 <= x + dx < w and 0 <= y + dy < h and m[y + dy, x + dx]]
            if len(nbrs) != 2:
                continue
            (ax, ay), (bx, by) = nbrs
            if max(abs(ax - bx), abs(ay - by)) == 1:
                m[y, x] = False
                changed = True
    return m


def junction_move_limit(s1: int, s2: int, l1: int = 3, l2: int = 1) -> int:
    """Move budget for a junction between runs of lengths s1 and s2."""
    if s1 < 1 or s2 < 1:
        raise ValueError("run lengths must be at least 1")
    return min(max(s1, s2), l1 * min(s1, s2) + l2)


@dataclass
class Junction:
    """Corner between two consecutive runs of a chain.

    ``orientation`` is 'h' or 'v' for movable junctions and ``None``
    otherwise; ``moved`` accumulates every executed one-pixel move
    against the ``l_max`` budget.
    """

    chain_id: int
    run_index: int
    corner: tuple[int, int]
    orientation: str | None
    l_max: int
    moved: int = 0

    @property
    def movable(self) -> bool:
        return self.orientation is not None


@dataclass
class WavingResult:
    mask: np.ndarray
    junctions: list[Junction]
    final_lengths: list[tuple[int, int]]
    sweeps: int


def _classify_junction(a: Run, b: Run) -> str | None:
    """Junction orientation, or None when the junction must not move.

    Movable junctions have both runs on one axis (a single pixel counts
    as either) with exactly one of them a single pixel, and sit on
    adjacent rows or columns.
    """
    s1, s2 = len(a), len(b)
    if (s1 == 1) == (s2 == 1):
        return None
    multi = a if s1 > 1 else b
    orientation = multi.orientation
    single = b if multi is a else a
    if single.orientation not in (None, orientation):
        return None
    if orientation == "h":
        rows = a.pixels[0][1], b.pixels[0][1]
    else:
        rows = a.pixels[0][0], b.pixels[0][0]
    if abs(rows[0] - rows[1]) != 1:
        return None
    return orientation


def _apply_move(mask: np.ndarray, a: Run, b: Run, orientation: str) -> bool:
    """Transfer one pixel across the junction from the longer run.

    Returns False (and changes nothing) when the target cell is occupied
    or outside the image.
    """
    h, w = mask.shape
    axis = 0 if orientation == "h" else 1
    other = 1 - axis
    s1, s2 = len(a), len(b)
    if s1 > s2:
        donor, donor_end, recv_head = a, a.pixels[-1], b.pixels[0]
        direction = int(np.sign(a.pixels[-1][axis] - a.pixels[0][axis]))
        target = [0, 0]
        target[axis] = recv_head[axis] - direction
        target[other] = recv_head[other]
    else:
        donor, donor_end, recv_head = b, b.pixels[0], a.pixels[-1]
        direction = int(np.sign(b.pixels[-1][axis] - b.pixels[0][axis]))
        target = [0, 0]
        target[axis] = recv_head[axis] + direction
        target[other] = recv_head[other]
    tx, ty = target
    if not (0 <= tx < w and 0 <= ty < h) or mask[ty, tx]:
        return False
    mask[donor_end[1], donor_end[0]] = False
    mask[ty, tx] = True
    if donor is a:
        a.pixels.pop()
        b.pixels.insert(0, (tx, ty))
    else:
        b.pixels.pop(0)
        a.pixels.append((tx, ty))
    return True


def reduce_waving_detailed(mask: np.ndarray,
                           cfg: CleaningConfig | None = None) -> WavingResult:
    """Balance movable junctions by whole-image sweeps.

    Junctions are found and classified once, and their move budgets are
    fixed from the initial run lengths.  Each sweep visits junctions in
    (chain, position) order and moves those with |s1 - s2| > 1 and
    budget left; sweeps stop at stability or after ``n_w`` rounds.  A
    junction whose target cell is blocked retires its remaining budget
    so sweeps cannot stall on it.
    """
    if cfg is None:
        cfg = CleaningConfig()
    m = np.asarray(mask, dtype=bool).copy()
    chain_runs: list[list[Run]] = []
    junctions: list[Junction] = []
    pairs: list[tuple[Run, Run]] = []
    for cid, chain in enumerate(trace_chains(m)):
        runs = decompose_runs(chain.pixels)
        chain_runs.append(runs)
        for k in range(len(runs) - 1):
            a, b = runs[k], runs[k + 1]
            orientation = _classify_junction(a, b)
            pa, pb = a.pixels[-1], b.pixels[0]
            corner = (max(pa[0], pb[0]), max(pa[1], pb[1]))
            l_max = 0
            if orientation is not None:
                l_max = junction_move_limit(len(a), len(b), cfg.l1, cfg.l2)
            junctions.append(Junction(cid, k, corner, orientation, l_max))
            pairs.append((a, b))

    sweeps = 0
    while sweeps < cfg.n_w:
        sweeps += 1
        changed = False
        for junction, (a, b) in zip(junctions, pairs):
            if not junction.movable or junction.moved >= junction.l_max:
                continue
            if abs(len(a) - len(b)) <= 1:
                continue
            if _apply_move(m, a, b, junction.orientation):
                junction.moved += 1
                changed = True
            else:
                junction.moved = junction.l_max
        if not changed:
            break
    final = [(len(a), len(b)) for a, b in pairs]
    return WavingResult(m, junctions, final, sweeps)


def reduce_waving(mask: np.ndarray, cfg: CleaningConfig | None = None) -> np.ndarray:
    """Waving-reduced copy of the mask; see :func:`reduce_waving_detailed`."""
    return reduce_waving_detailed(mask, cfg).mask


def dump_junctions(result: WavingResult) -> str:
    """One text record per junction (debug/stage-dump format)."""
    lines = []
    for junction, (s1, s2) in zip(result.junctions, result.final_lengths):
        orientation = junction.orientation or "-"
        lines.append(
            f"chain={junction.chain_id} corner={junction.corner[0]},{junction.corner[1]} "
            f"s1={s1} s2={s2} orientation={orientation} "
            f"l_max={junction.l_max} moved={junction.moved}"
        )
    return "\n".join(lines) + ("\n" if lines else "")
