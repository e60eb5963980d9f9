"""Brute-force image barcodes from ranks of induced maps.

For scales ``s <= t`` the rank of ``H_d(L_s) -> H_d(K_t)`` equals
``rank [Z_d(L_s) | B_d(K_t)] - rank B_d(K_t)``, everything written in the
basis of ``d``-simplices.  Ranks are tabulated on the grid of critical
values and turned into bars by inclusion-exclusion.  Dense arithmetic mod
``p``, no clearing, no shortcuts: this module shares nothing with the
reduction code it is used to check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .barcode import Barcode, Interval
from .rips import FiltrationPair

MAX_SIMPLICES = 20_000


class OracleError(RuntimeError):
    """The rank data is inconsistent, which means a bug in the oracle."""


class InstanceTooLarge(ValueError):
    pass


def _inv(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def rank_mod_p(A: np.ndarray, p: int) -> int:
    return len(_rref(A, p)[1])


def _rref(A: np.ndarray, p: int):
    """Row-reduced echelon form mod p; returns (matrix, pivot columns)."""
    M = np.array(A, dtype=np.int64) % p
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            M[[r, i]] = M[[i, r]]
        M[r] = M[r] * _inv(M[r, c], p) % p
        others = np.flatnonzero(M[:, c])
        others = others[others != r]
        if others.size:
            M[others] = (M[others] - np.outer(M[others, c], M[r])) % p
        pivots.append(c)
        r += 1
    return M, pivots


def nullspace_mod_p(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of the kernel of ``A`` mod p, as rows."""
    rows, cols = A.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    M, pivots = _rref(A, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, c in enumerate(pivots):
            basis[k, c] = (-M[r, f]) % p
    return basis


class _Echelon:
    """Incrementally grown basis, one normalized vector per pivot."""

    def __init__(self, p: int):
        self.p = p
        self.rows: dict[int, np.ndarray] = {}

    def insert(self, v: np.ndarray) -> bool:
        p = self.p
        v = v % p
        while True:
            nz = np.flatnonzero(v)
            if nz.size == 0:
                return False
            piv = int(nz[-1])
            b = self.rows.get(piv)
            if b is None:
                self.rows[piv] = v * _inv(v[piv], p) % p
                return True
            v = (v - v[piv] * b) % p

    def __len__(self):
        return len(self.rows)


@dataclass
class _Complex:
    """Simplices of one dimension with both filtration values."""

    vertices: list
    l: np.ndarray
    k: np.ndarray

    def __post_init__(self):
        self.index = {vs: i for i, vs in enumerate(self.vertices)}


def _simplices(pair: FiltrationPair, dim: int) -> _Complex:
    dL, dK = pair.dL.d, pair.dK.d
    vs_list, ls, ks = [], [], []
    for vs in combinations(range(pair.n), dim + 1):
        pairs_ = list(combinations(vs, 2))
        l = max((dL[a, b] for a, b in pairs_), default=0.0)
        k = max((dK[a, b] for a, b in pairs_), default=0.0)
        if k <= pair.threshold:
            vs_list.append(vs)
            ls.append(l)
            ks.append(k)
    return _Complex(vs_list, np.array(ls, dtype=float), np.array(ks, dtype=float))


def _boundary(high: _Complex, low: _Complex, p: int) -> np.ndarray:
    """Dense boundary matrix, rows ``low`` simplices, columns ``high`` ones."""
    B = np.zeros((len(low.vertices), len(high.vertices)), dtype=np.int64)
    for j, vs in enumerate(high.vertices):
        if len(vs) < 2:
            continue
        for i in range(len(vs)):
            face = vs[:i] + vs[i + 1:]
            B[low.index[face], j] = 1 if i % 2 == 0 else p - 1
    return B


class _Degree:
    """Everything the oracle needs for one homological degree."""

    def __init__(self, pair: FiltrationPair, degree: int, p: int):
        self.p = p
        self.degree = degree
        self.threshold = pair.threshold
        self.cells = _simplices(pair, degree)
        self.cofaces = _simplices(pair, degree + 1)
        total = len(self.cells.vertices) + len(self.cofaces.vertices)
        if degree > 0:
            self.faces = _simplices(pair, degree - 1)
            total += len(self.faces.vertices)
            self.d_low = _boundary(self.cells, self.faces, p)
        else:
            self.d_low = np.zeros((0, len(self.cells.vertices)), dtype=np.int64)
        if total > MAX_SIMPLICES:
            raise InstanceTooLarge(f"instance too large for the oracle ({total} simplices)")
        self.d_high = _boundary(self.cofaces, self.cells, p)

    def cycles(self, s: float) -> np.ndarray:
        """Basis of ``Z_d(L_s)`` as rows in the coordinates of all cells."""
        cols = np.flatnonzero(self.cells.l <= s)
        out = np.zeros((0, len(self.cells.vertices)), dtype=np.int64)
        if cols.size:
            null = nullspace_mod_p(self.d_low[:, cols], self.p)
            out = np.zeros((len(null), len(self.cells.vertices)), dtype=np.int64)
            out[:, cols] = null
        return out

    def boundaries(self, t: float) -> np.ndarray:
        """Generators of ``B_d(K_t)`` as rows."""
        return self.d_high[:, self.cofaces.k <= t].T

    def rank(self, s: float, t: float) -> int:
        Z, B = self.cycles(s), self.boundaries(t)
        return rank_mod_p(np.vstack([Z, B]).T, self.p) - rank_mod_p(B.T, self.p)


def induced_rank(pair: FiltrationPair, degree: int, s: float, t: float, p: int = 2) -> int:
    """Rank of ``H_degree(L_s) -> H_degree(K_t)``."""
    if s > t:
        raise ValueError(f"need s <= t, got s={s}, t={t}")
    if t > pair.threshold:
        raise ValueError(f"scale {t} beyond threshold {pair.threshold}")
    return _Degree(pair, degree, p).rank(s, t)


@dataclass
class RankGrid:
    """``ranks[a][b]`` = rank of ``H(L_{scales[a]}) -> H(K_{scales[b]})`` for ``a <= b``.

    Entries with ``a > b`` are -1.  Classes alive at the last scale are
    treated as never dying.
    """

    degree: int
    scales: list
    ranks: np.ndarray

    def check(self) -> None:
        r, m = self.ranks, len(self.scales)
        for a in range(m):
            for b in range(a, m):
                if b + 1 < m and r[a, b + 1] > r[a, b]:
                    raise OracleError(f"rank increases in t at ({a}, {b})")
                if a > 0 and r[a - 1, b] > r[a, b]:
                    raise OracleError(f"rank decreases in s at ({a}, {b})")


def rank_grid(pair: FiltrationPair, degree: int, p: int = 2) -> RankGrid:
    deg = _Degree(pair, degree, p)
    vals = np.concatenate([deg.cells.l, deg.cells.k, deg.cofaces.l, deg.cofaces.k, [0.0]])
    scales = sorted({float(v) for v in vals if v <= pair.threshold})
    m = len(scales)
    ranks = np.full((m, m), -1, dtype=np.int64)

    # rank B_d(K_t) along the grid, one sweep
    b_rank = np.zeros(m, dtype=np.int64)
    coface_order = np.argsort(deg.cofaces.k, kind="stable")
    basis = _Echelon(p)
    j = 0
    for b, t in enumerate(scales):
        while j < len(coface_order) and deg.cofaces.k[coface_order[j]] <= t:
            basis.insert(deg.d_high[:, coface_order[j]])
            j += 1
        b_rank[b] = len(basis)

    # one sweep in t per distinct cycle space Z_d(L_s)
    cache: dict[int, np.ndarray] = {}
    for a, s in enumerate(scales):
        n_cells = int(np.count_nonzero(deg.cells.l <= s))
        if n_cells in cache:
            ranks[a, a:] = cache[n_cells][a:]
            continue
        row = np.full(m, -1, dtype=np.int64)
        basis = _Echelon(p)
        for z in deg.cycles(s):
            basis.insert(z)
        j = 0
        for b, t in enumerate(scales):
            while j < len(coface_order) and deg.cofaces.k[coface_order[j]] <= t:
                basis.insert(deg.d_high[:, coface_order[j]])
                j += 1
            if b >= a:
                row[b] = len(basis) - b_rank[b]
        cache[n_cells] = row
        ranks[a, a:] = row[a:]
    grid = RankGrid(degree, scales, ranks)
    grid.check()
    return grid


def barcode_from_ranks(grid: RankGrid) -> list[Interval]:
    """Bars ``[scales[a], scales[b])`` by inclusion-exclusion of ranks.

    The multiplicity of ``[a, b)`` is
    ``r[a][b-1] - r[a][b] - r[a-1][b-1] + r[a-1][b]`` with ``r[-1][.] = 0``
    and ``r[.][m] = 0``; a bar ending at ``m`` (past the last scale) is
    reported with death infinity.
    """
    r, m = grid.ranks, len(grid.scales)

    def rank(a, b):
        if a < 0 or b >= m:
            return 0
        return int(r[a, b])

    out = []
    for a in range(m):
        for b in range(a + 1, m + 1):
            mult = rank(a, b - 1) - rank(a, b) - rank(a - 1, b - 1) + rank(a - 1, b)
            if mult < 0:
                raise OracleError(f"negative multiplicity {mult} for [{a}, {b})")
            death = grid.scales[b] if b < m else math.inf
            out.extend(Interval(grid.degree, grid.scales[a], death) for _ in range(mult))
    return out


def image_barcode_oracle(pair: FiltrationPair, max_dim: int | None = None, p: int = 2) -> Barcode:
    """Image barcode up to ``max_dim`` (default ``pair.max_dim``) by brute force."""
    pair.check()
    top = pair.max_dim if max_dim is None else max_dim
    out = []
    for d in range(top + 1):
        out += barcode_from_ranks(rank_grid(pair, d, p))
    return Barcode(out)
