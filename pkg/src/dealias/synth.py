"""Synthetic aliased test images.

A half-plane edge is rendered with exact pixel-coverage anti-aliasing,
then optionally distorted by a gamma response curve and an unsharp mask;
upsampling such an image reproduces the classic staircase aliasing with
a known geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .raster import Image


@dataclass(frozen=True)
class SyntheticSpec:
    """Low-res size, edge direction (dx, dy), distortions, and scale."""

    size: int = 64
    slope: tuple[int, int] = (4, 1)
    gamma: float = 1.0
    unsharp: float = 0.0
    scale: int = 4

    def __post_init__(self):
        if self.slope == (0, 0):
            raise ValueError("degenerate slope (0, 0)")
        if self.size < 4:
            raise ValueError("size must be at least 4")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class EdgeLine:
    """Ground-truth boundary: a point on the line and its direction."""

    point: tuple[float, float]
    direction: tuple[float, float]


def _halfplane_area(x: int, y: int, nx: float, ny: float, c: float) -> float:
    """Area of {p : nx*px + ny*py <= c} inside the unit pixel (x, y)."""
    square = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)]
    poly = []
    for i, p in enumerate(square):
        q = square[(i + 1) % 4]
        dp = nx * p[0] + ny * p[1] - c
        dq = nx * q[0] + ny * q[1] - c
        if dp <= 0:
            poly.append(p)
        if (dp <= 0) != (dq <= 0):
            s = dp / (dp - dq)
            poly.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    area = 0.0
    for i, p in enumerate(poly):
        q = poly[(i + 1) % len(poly)]
        area += p[0] * q[1] - q[0] * p[1]
    return abs(area) / 2.0


def half_plane_coverage(width: int, height: int, line: EdgeLine) -> np.ndarray:
    """Per-pixel coverage of the bright side of the line, in [0, 1]."""
    dx, dy = line.direction
    norm = math.hypot(dx, dy)
    nx, ny = -dy / norm, dx / norm
    c = nx * line.point[0] + ny * line.point[1]
    out = np.empty((height, width), dtype=np.float64)
    for y in range(height):
        for x in range(width):
            out[y, x] = _halfplane_area(x, y, nx, ny, c)
    # Exact areas lie in [0, 1]; the clip only strips float round-off.
    return np.clip(out, 0.0, 1.0)


def box_blur3(plane: np.ndarray) -> np.ndarray:
    """3x3 box blur with edge replication."""
    p = np.pad(plane, 1, mode="edge")
    acc = np.zeros_like(plane)
    for dy in (0, 1, 2):
        for dx in (0, 1, 2):
            acc += p[dy:dy + plane.shape[0], dx:dx + plane.shape[1]]
    return acc / 9.0


def generate_synthetic(spec: SyntheticSpec) -> tuple[Image, EdgeLine]:
    """Render the distorted low-res edge image and its true boundary."""
    center = (spec.size / 2.0, spec.size / 2.0)
    line = EdgeLine(center, (float(spec.slope[0]), float(spec.slope[1])))
    values = half_plane_coverage(spec.size, spec.size, line)
    if spec.gamma != 1.0:
        values = values ** spec.gamma
    if spec.unsharp != 0.0:
        values = values + spec.unsharp * (values - box_blur3(values))
        values = np.clip(values, 0.0, 1.0)
    return Image.from_array(values), line
