"""Shared test oracles and fixture builders."""

from __future__ import annotations

import numpy as np


def dft_oracle(values) -> np.ndarray:
    """Direct O(N^2) DFT, the independent reference for the fast path."""
    x = np.asarray(values, dtype=np.complex128)
    n = len(x)
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) @ x


def label_components(mask: np.ndarray) -> int:
    """Count 8-connected components by BFS (independent of the package)."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    seen = np.zeros_like(mask)
    count = 0
    for sy in range(h):
        for sx in range(w):
            if not mask[sy, sx] or seen[sy, sx]:
                continue
            count += 1
            stack = [(sx, sy)]
            seen[sy, sx] = True
            while stack:
                x, y = stack.pop()
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        nx, ny = x + dx, y + dy
                        if (0 <= nx < w and 0 <= ny < h
                                and mask[ny, nx] and not seen[ny, nx]):
                            seen[ny, nx] = True
                            stack.append((nx, ny))
    return count


def random_staircase(rng: np.random.Generator, max_pixels: int,
                     transpose: bool = False) -> np.ndarray:
    """A single monotone staircase chain with random run lengths.

    Horizontal runs on consecutive rows, joined by diagonal steps, so
    every junction sits between two same-orientation runs.
    """
    runs = []
    total = 0
    while total < max_pixels:
        length = int(rng.integers(1, 9))
        if total + length > max_pixels:
            break
        runs.append(length)
        total += length
    if not runs:
        runs = [1]
    width = sum(runs) + 2
    height = len(runs) + 2
    mask = np.zeros((height, width), dtype=bool)
    x = 1
    for row, length in enumerate(runs, start=1):
        mask[row, x:x + length] = True
        x += length
    if transpose:
        mask = mask.T
    return mask
