"""Vietoris-Rips filtrations for a pair of dominated dissimilarities.

Simplices are identified by their dimension and their index in the
combinatorial number system: a simplex with vertices ``v_d > ... > v_0`` has
index ``sum(comb(v_i, i + 1))``.

Two orders on the ``d``-simplices are used throughout:

* filtration order: by value ascending, ties by index descending;
* reverse order: the exact reverse, i.e. value descending, index ascending.

The coboundary matrices of relative cochains use the reverse order for both
rows and columns, so the pivot of a coboundary column is the cofacet that
appears *first* in the filtration.
"""

from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

import numpy as np

FILTRATION = "filtration"
REVERSE = "reverse"
FORMATS = ("lower-distance", "full-matrix", "point-cloud")


class InputError(ValueError):
    """Malformed distance input."""


class DominanceError(ValueError):
    """The domain dissimilarity does not dominate the codomain one."""

    def __init__(self, report: "DominanceReport"):
        self.report = report
        super().__init__(report.describe())


class DistanceMatrix:
    """Symmetric, nonnegative dissimilarity matrix with zero diagonal.

    The triangle inequality is not required.  The underlying array is made
    read-only.
    """

    def __init__(self, d):
        a = np.array(d, dtype=float, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputError(f"distance matrix must be square, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InputError("distance matrix has non-finite entries")
        if np.any(a < 0):
            i, j = np.argwhere(a < 0)[0]
            raise InputError(f"negative distance at ({i}, {j}): {a[i, j]}")
        if np.any(np.diag(a) != 0):
            raise InputError("distance matrix must have a zero diagonal")
        scale = max(1.0, float(np.abs(a).max(initial=0.0)))
        bad = np.abs(a - a.T) > 1e-12 * scale
        if np.any(bad):
            i, j = np.argwhere(bad)[0]
            raise InputError(f"distance matrix is not symmetric at ({i}, {j}): "
                             f"{a[i, j]} vs {a[j, i]}")
        # symmetrize exactly so both triangles give identical values
        a = np.minimum(a, a.T)
        a.setflags(write=False)
        self.d = a

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def __getitem__(self, ij):
        return self.d[ij]

    def __array__(self, dtype=None, copy=None):
        return self.d if dtype is None else self.d.astype(dtype)

    def __eq__(self, other):
        return isinstance(other, DistanceMatrix) and np.array_equal(self.d, other.d)

    def __repr__(self):
        return f"DistanceMatrix(n={self.n})"


_TOKEN_SPLIT = re.compile(r"[,\s]+")


def _numeric_rows(text: str) -> list[list[float]]:
    rows = []
    for lineno, line in enumerate(io.StringIO(text), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = [t for t in _TOKEN_SPLIT.split(line) if t]
        try:
            rows.append([float(t) for t in tokens])
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    return rows


def parse_distance_input(text: str, format: str = "lower-distance") -> DistanceMatrix:
    """Parse distance data in one of the supported text formats.

    ``lower-distance``: row ``i`` holds the ``i`` entries ``d(i, 0..i-1)``;
    the row for point 0 is implicit (an empty first line is tolerated).
    ``full-matrix``: ``n`` rows of ``n`` entries.
    ``point-cloud``: rows of equal-length coordinates, Euclidean distances.
    Values may be separated by whitespace or commas; ``#`` starts a comment line.
    """
    rows = _numeric_rows(text)
    if format == "lower-distance":
        values = [v for row in rows for v in row]
        m = len(values)
        n = int(round((1 + math.sqrt(1 + 8 * m)) / 2))
        if n * (n - 1) // 2 != m:
            raise InputError(f"{m} values do not form a lower triangular distance matrix")
        expected = 1
        for row in rows:
            if len(row) != expected:
                raise InputError(f"ragged lower-distance input: row with {len(row)} "
                                 f"entries where {expected} expected")
            expected += 1
        d = np.zeros((n, n))
        d[np.tril_indices(n, -1)] = values
        return DistanceMatrix(d + d.T)
    if format == "full-matrix":
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise InputError("full-matrix input must have n rows of n values")
        return DistanceMatrix(np.array(rows, dtype=float).reshape(n, n))
    if format == "point-cloud":
        if not rows:
            return DistanceMatrix(np.zeros((0, 0)))
        if len({len(row) for row in rows}) != 1:
            raise InputError("point-cloud rows must have equal length")
        x = np.array(rows, dtype=float)
        diff = x[:, None, :] - x[None, :, :]
        return DistanceMatrix(np.sqrt((diff ** 2).sum(-1)))
    raise InputError(f"unknown input format {format!r}; expected one of {FORMATS}")


@dataclass
class DominanceReport:
    ok: bool
    violations: list = field(default_factory=list)  # (i, j, dL, dK)
    count: int = 0

    def describe(self) -> str:
        if self.ok:
            return "domain distances dominate codomain distances"
        lines = [f"{self.count} pair(s) with domain distance below codomain distance:"]
        lines += [f"  ({i}, {j}): {a!r} < {b!r}" for i, j, a, b in self.violations]
        return "\n".join(lines)


def validate_dominance(dL: DistanceMatrix, dK: DistanceMatrix, limit: int = 10) -> DominanceReport:
    if dL.n != dK.n:
        raise ValueError(f"size mismatch: {dL.n} vs {dK.n} points")
    bad = np.argwhere(np.triu(dL.d < dK.d))
    violations = [(int(i), int(j), float(dL.d[i, j]), float(dK.d[i, j])) for i, j in bad[:limit]]
    return DominanceReport(len(bad) == 0, violations, len(bad))


@dataclass(frozen=True)
class FiltrationPair:
    """Domain ``dL`` (the larger dissimilarity) and codomain ``dK``."""

    dL: DistanceMatrix
    dK: DistanceMatrix
    max_dim: int = 1
    threshold: float = math.inf

    def __post_init__(self):
        if self.dL.n != self.dK.n:
            raise ValueError(f"size mismatch: {self.dL.n} vs {self.dK.n} points")
        if self.max_dim < 0:
            raise ValueError("max_dim must be nonnegative")
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")

    @property
    def n(self) -> int:
        return self.dL.n

    def check(self) -> None:
        report = validate_dominance(self.dL, self.dK)
        if not report.ok:
            raise DominanceError(report)


# -- combinatorial number system ------------------------------------------------

class Simplex(NamedTuple):
    index: int
    dim: int

    def vertices(self) -> tuple[int, ...]:
        return simplex_vertices(self.index, self.dim)


def simplex_index(vertices: Iterable[int]) -> int:
    vs = sorted(vertices)
    if len(set(vs)) != len(vs):
        raise ValueError(f"repeated vertex in {vs}")
    return sum(math.comb(v, i + 1) for i, v in enumerate(vs))


def simplex_vertices(index: int, dim: int) -> tuple[int, ...]:
    """Decode a simplex index into its vertices, strictly decreasing."""
    out = []
    for k in range(dim + 1, 0, -1):
        # largest v with comb(v, k) <= index
        v = k - 1
        while math.comb(v + 1, k) <= index:
            v += 1
        out.append(v)
        index -= math.comb(v, k)
    return tuple(out)


def binomial_table(n: int, k: int) -> np.ndarray:
    table = np.zeros((n + 1, k + 1), dtype=np.int64)
    for i in range(n + 1):
        for j in range(min(i, k) + 1):
            table[i, j] = math.comb(i, j)
    return table


def simplex_diameter(s: Simplex | Sequence[int], D: DistanceMatrix) -> float:
    vs = s.vertices() if isinstance(s, Simplex) else tuple(s)
    if len(vs) < 2:
        return 0.0
    return float(max(D.d[a, b] for a, b in combinations(vs, 2)))


# -- explicit orders and columns -----------------------------------------------

@dataclass
class FiltrationOrder:
    """The ``dim``-simplices of a filtration in a fixed linear order."""

    dim: int
    direction: str
    simplices: list  # simplex indices
    values: list

    def __post_init__(self):
        self.position = {s: i for i, s in enumerate(self.simplices)}

    def __len__(self):
        return len(self.simplices)

    def value_of(self, index: int) -> float:
        return self.values[self.position[index]]

    def permutation_to(self, other: "FiltrationOrder") -> list[int]:
        """``perm[i]`` is the position in ``other`` of the simplex at position ``i`` here."""
        return [other.position[s] for s in self.simplices]


def _sorted_order(dim: int, indices: Sequence[int], values: Sequence[float],
                  direction: str) -> FiltrationOrder:
    if direction not in (FILTRATION, REVERSE):
        raise ValueError(f"unknown direction {direction!r}")
    items = sorted(zip(values, indices), key=lambda vi: (vi[0], -vi[1]))
    if direction == REVERSE:
        items.reverse()
    return FiltrationOrder(dim, direction, [i for _, i in items], [v for v, _ in items])


def build_order(D: DistanceMatrix, dim: int, threshold: float = math.inf,
                direction: str = FILTRATION) -> FiltrationOrder:
    """All ``dim``-simplices with diameter at most ``threshold``, sorted."""
    indices, values = [], []
    for vs in combinations(range(D.n), dim + 1):
        diam = simplex_diameter(vs, D)
        if diam <= threshold:
            indices.append(simplex_index(vs))
            values.append(diam)
    return _sorted_order(dim, indices, values, direction)


def pair_order(pair: FiltrationPair, dim: int, metric: str, direction: str = FILTRATION) -> FiltrationOrder:
    """Order of the simplices shared by both filtrations of ``pair``.

    The common complex is the codomain complex at the threshold.  Under the
    domain metric, simplices that only enter the domain beyond the threshold
    get the value infinity (they are reached only in the final, common step).
    """
    indices, lvals, kvals = [], [], []
    t = pair.threshold
    for vs in combinations(range(pair.n), dim + 1):
        k = simplex_diameter(vs, pair.dK)
        if k <= t:
            l = simplex_diameter(vs, pair.dL)
            indices.append(simplex_index(vs))
            kvals.append(k)
            lvals.append(l if l <= t else math.inf)
    if metric == "L":
        return _sorted_order(dim, indices, lvals, direction)
    if metric == "K":
        return _sorted_order(dim, indices, kvals, direction)
    raise ValueError(f"metric must be 'L' or 'K', not {metric!r}")


def coboundary_column(s: Simplex, row_order: FiltrationOrder, D_for_rows: DistanceMatrix | None = None,
                      threshold: float = math.inf, p: int = 2) -> list:
    """Coboundary of ``s`` with rows at positions of ``row_order``.

    The coefficient of the cofacet obtained by inserting vertex ``w`` is
    ``(-1)**(number of vertices of s below w)``, which makes the result the
    anti-transpose of the boundary matrix.  Cofacets missing from
    ``row_order`` or with diameter above ``threshold`` are omitted.
    """
    if row_order.dim != s.dim + 1:
        raise ValueError("row order must be one dimension above the simplex")
    vs = sorted(s.vertices())
    n = D_for_rows.n if D_for_rows is not None else None
    if n is None:
        raise ValueError("a distance matrix is needed to enumerate cofacets")
    entries = []
    for w in range(n):
        if w in vs:
            continue
        below = sum(1 for v in vs if v < w)
        cof = vs[:below] + [w] + vs[below:]
        if math.isfinite(threshold) and simplex_diameter(cof, D_for_rows) > threshold:
            continue
        pos = row_order.position.get(simplex_index(cof))
        if pos is None:
            continue
        entries.append((pos, 1 if below % 2 == 0 else p - 1))
    entries.sort()
    return entries


def boundary_column(s: Simplex, row_order: FiltrationOrder, p: int = 2) -> list:
    """Boundary of ``s`` with rows at positions of ``row_order``."""
    if s.dim == 0:
        return []
    vs = sorted(s.vertices())
    entries = []
    for i in range(len(vs)):
        face = simplex_index(vs[:i] + vs[i + 1:])
        entries.append((row_order.position[face], 1 if i % 2 == 0 else p - 1))
    entries.sort()
    return entries


# -- implicit columns for the fast path -----------------------------------------

class RankedMetric:
    """Distances replaced by the rank of their value.

    Ranks index the sorted distinct values at most ``threshold``; larger values
    share the sentinel rank ``beyond`` whose value is infinity.  Since the
    diameter of a simplex is one of its edge lengths, simplex values are
    always ranks in this table.
    """

    def __init__(self, D: DistanceMatrix, threshold: float = math.inf):
        vals = np.unique(D.d[D.d <= threshold])
        if vals.size == 0 or vals[0] != 0.0:
            vals = np.union1d(vals, [0.0])
        self.beyond = len(vals)
        self.values = np.append(vals, math.inf)
        self.rank = np.searchsorted(vals, D.d).astype(np.int64)
        self.rank[D.d > threshold] = self.beyond
        np.fill_diagonal(self.rank, 0)

    def value(self, r: int) -> float:
        return float(self.values[r])

    def diameters(self, simplices: np.ndarray) -> np.ndarray:
        """Rank diameters of an ``(m, d + 1)`` array of vertex rows."""
        m, k = simplices.shape
        out = np.zeros(m, dtype=np.int64)
        for a in range(k):
            for b in range(a + 1, k):
                np.maximum(out, self.rank[simplices[:, a], simplices[:, b]], out=out)
        return out


def enumerate_simplices(n: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """All ``dim``-simplices on ``n`` points as (ascending vertex rows, indices)."""
    k = dim + 1
    if k > n:
        return np.zeros((0, k), dtype=np.int64), np.zeros(0, dtype=np.int64)
    verts = np.fromiter((v for c in combinations(range(n), k) for v in c),
                        dtype=np.int64, count=math.comb(n, k) * k).reshape(-1, k)
    idx = np.zeros(len(verts), dtype=np.int64)
    for i in range(k):
        idx += np.array([math.comb(int(v), i + 1) for v in range(n)], dtype=np.int64)[verts[:, i]]
    return verts, idx


class CofacetEnumerator:
    """Vectorized cofacets of ``dim``-simplices on ``n`` points.

    Returns, for a simplex given by ascending vertices, the indices of its
    cofacets, the inserted vertex's position parity (the coboundary sign) and
    the inserted vertex, all as arrays in decreasing index order.
    """

    def __init__(self, n: int, dim: int):
        self.n = n
        self.dim = dim
        self.binom = binomial_table(n, dim + 3)
        self.stride = int(self.binom[n, dim + 2]) if n >= dim + 2 else 1
        self.all_vertices = np.arange(n, dtype=np.int64)

    def __call__(self, verts: np.ndarray):
        mask = np.ones(self.n, dtype=bool)
        mask[verts] = False
        w = self.all_vertices[mask][::-1]
        below = verts[None, :] < w[:, None]
        nbelow = below.sum(axis=1)
        pos = np.arange(len(verts))
        low = self.binom[verts, pos + 1]
        high = self.binom[verts, pos + 2]
        idx = self.binom[w, nbelow + 1] + high.sum() - below @ (high - low)
        return idx, nbelow & 1, w
