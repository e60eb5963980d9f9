"""Random instance generators shared by the test modules."""

from __future__ import annotations

import math

import numpy as np

from imagepers.rips import DistanceMatrix, FiltrationPair

ACCEPTANCE_LINES: list[str] = []


def report(label: str, ok: bool, detail: str = "") -> None:
    line = f"{label} {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def symmetric(rng: np.random.Generator, n: int, low: float = 0.0, high: float = 1.0,
              integer: bool = False) -> np.ndarray:
    if integer:
        a = rng.integers(int(low), int(high) + 1, size=(n, n)).astype(float)
    else:
        a = rng.uniform(low, high, size=(n, n))
    a = np.triu(a, 1)
    return a + a.T


def random_dK(rng: np.random.Generator, n: int) -> np.ndarray:
    """Symmetric with off-diagonal entries uniform on (0, 1]."""
    a = np.triu(1.0 - rng.uniform(size=(n, n)), 1)
    return a + a.T


def dominated_pair(rng: np.random.Generator, n: int, max_dim: int = 2, spread: float = 0.5,
                   threshold: float = math.inf) -> FiltrationPair:
    """``dK`` uniform in (0, 1], ``dL = dK`` plus a nonnegative perturbation."""
    dK = random_dK(rng, n)
    bump = symmetric(rng, n, 0.0, spread)
    # leave some edges untouched so that both regimes are exercised
    bump *= symmetric(rng, n, 0, 1, integer=True) > 0
    return FiltrationPair(DistanceMatrix(dK + bump), DistanceMatrix(dK), max_dim, threshold)


def integer_pair(rng: np.random.Generator, n: int, max_dim: int = 2, top: int = 3,
                 threshold: float = math.inf) -> FiltrationPair:
    """Small integer distances, so that ties are everywhere."""
    dK = symmetric(rng, n, 1, top, integer=True)
    dL = dK + symmetric(rng, n, 0, 2, integer=True)
    return FiltrationPair(DistanceMatrix(dL), DistanceMatrix(dK), max_dim, threshold)


def identical_pair(rng: np.random.Generator, n: int, max_dim: int = 2) -> FiltrationPair:
    D = DistanceMatrix(random_dK(rng, n))
    return FiltrationPair(D, D, max_dim)


def square_on_circle(max_dim: int = 1) -> FiltrationPair:
    angles = np.arange(4) * math.pi / 2
    pts = np.c_[np.cos(angles), np.sin(angles)]
    chord = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
    arc = 2 * np.arcsin(np.clip(chord / 2, 0, 1))
    return FiltrationPair(DistanceMatrix(arc), DistanceMatrix(chord), max_dim)


def sphere_pair(rng: np.random.Generator, n: int, max_dim: int = 2) -> FiltrationPair:
    pts = rng.normal(size=(n, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    chord = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
    geo = 2 * np.arcsin(np.clip(chord / 2, 0, 1))
    # geodesic >= chord holds exactly in theory; guard against rounding
    geo = np.maximum(geo, chord)
    return FiltrationPair(DistanceMatrix(geo), DistanceMatrix(chord), max_dim)
