"""Image persistence barcodes for inclusions of Rips filtrations.

Given dissimilarities ``dL >= dK`` on the same points, ``L_t = Rips_t(dL)``
is a subcomplex of ``K_t = Rips_t(dK)`` and we compute the barcode of the
image of ``H_*(L_t) -> H_*(K_t)``.

The main path works with relative cohomology.  Per degree ``d`` two
coboundary matrices share the same columns (``d``-simplices in reverse
``l``-order, ``l`` the diameter under ``dL``):

* ``R``: rows are ``(d+1)``-simplices in reverse ``l``-order;
* ``S``: rows are ``(d+1)``-simplices in reverse ``k``-order.

``R`` is reduced with the usual clearing (pivots of degree ``d - 1`` zero out
their columns), and every column of ``R`` that ends up zero is cleared in
``S`` before ``S`` is reduced; after that no column of ``S`` can reduce to
zero.  A nonzero column ``σ`` of ``S`` with pivot ``τ`` gives the bar
``[l(σ), k(τ))`` when nonempty, and a zero column of ``R`` that is not a pivot
of degree ``d - 1`` gives ``[l(σ), inf)``.

With a finite threshold the common complex is ``K`` at the threshold;
simplices entering ``L`` only beyond it get ``l = inf`` and bars born there
are dropped, so infinite bars mean "alive at the threshold".
"""

from __future__ import annotations

import math
from typing import Callable, Container, Iterable

import numpy as np

from .algebra import ColumnReducer, InvariantError, reduce_matrix
from .barcode import Barcode, Interval
from .rips import (REVERSE, CofacetEnumerator, DistanceMatrix, FiltrationPair, RankedMetric, Simplex,
                   boundary_column, coboundary_column, enumerate_simplices, pair_order)


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> tuple[int, int] | None:
        """Merge the classes of ``a`` and ``b``; return ``(survivor, absorbed)`` roots."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return None
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra, rb


def _zero_dim_pairs(n: int, order_metric: RankedMetric, member: RankedMetric):
    """Kruskal over the member edges in filtration order of ``order_metric``.

    Returns the merging edges as ``(edge index, edge rank, absorbed root,
    (u, v))`` and the surviving roots.
    """
    verts, idx = enumerate_simplices(n, 1)
    keep = member.rank[verts[:, 0], verts[:, 1]] < member.beyond
    verts, idx = verts[keep], idx[keep]
    ranks = order_metric.rank[verts[:, 0], verts[:, 1]]
    uf = UnionFind(n)
    merges = []
    for e in np.lexsort((-idx, ranks)):
        u, v = int(verts[e, 0]), int(verts[e, 1])
        merged = uf.union(u, v)
        if merged is not None:
            merges.append((int(idx[e]), int(ranks[e]), merged[1], (v, u)))
    roots = sorted({uf.find(x) for x in range(n)})
    return merges, roots


def emergent_shortcut(column_value, keys: np.ndarray, values: np.ndarray,
                      assigned: Container[int]) -> int | None:
    """Pivot of an unreduced coboundary column if it can be read off directly.

    ``keys`` are the row keys of the column's cofacets (larger key = later
    row, so the pivot is the maximum) and ``values`` their filtration values
    in the metric that orders the rows.  Every cofacet value is at least
    ``column_value``.  If the pivot cofacet appears simultaneously with the
    column simplex and no reduced column owns that pivot yet, the column is
    already reduced and its pivot is returned; otherwise ``None``.
    """
    if len(keys) == 0:
        return None
    j = int(np.argmax(keys))
    if values[j] != column_value:
        return None
    key = int(keys[j])
    return None if key in assigned else key


def _reduce_coboundary(verts: np.ndarray, order: Iterable[int], column_ranks: np.ndarray,
                       rows: RankedMetric, member: RankedMetric, enum: CofacetEnumerator,
                       p: int, shortcut: bool, skip: np.ndarray | None,
                       forbid_zero: bool = False):
    """Reduce the implicit coboundary matrix of the given ``d``-simplices.

    Row keys encode reverse filtration order under ``rows``:
    ``key = (rows.beyond - rank) * stride + index``.  Returns a dict mapping
    column positions to pivot keys (``None`` for zero columns) and the
    reducer.
    """
    stride = enum.stride
    top = rows.beyond
    minus_one = p - 1

    def generate(pos):
        idx, parity, w = enum(verts[pos])
        v = verts[pos]
        mrank = member.rank[v][:, w].max(axis=0) if len(v) > 1 else member.rank[v[0], w]
        ok = mrank < member.beyond
        rrank = rows.rank[v][:, w].max(axis=0) if len(v) > 1 else rows.rank[v[0], w]
        rrank = np.maximum(rrank[ok], column_ranks[pos])
        keys = (top - rrank) * stride + idx[ok]
        coeffs = np.where(parity[ok] == 1, minus_one, 1)
        return keys, coeffs, rrank

    def fetch(pos):
        keys, coeffs, _ = generate(pos)
        return sorted(zip(keys.tolist(), coeffs.tolist()))

    reducer = ColumnReducer(p, fetch=fetch)
    results = {}
    for pos in order:
        pos = int(pos)
        if skip is not None and skip[pos]:
            reducer.stats.cleared += 1
            continue
        keys, coeffs, rrank = generate(pos)
        if shortcut:
            key = emergent_shortcut(column_ranks[pos], keys, rrank, reducer.pivots)
            if key is not None:
                reducer.register(pos, key)
                results[pos] = key
                continue
        col = reducer.reduce(pos, zip(keys.tolist(), coeffs.tolist()))
        if not col and forbid_zero:
            raise InvariantError("a column of the mixed coboundary matrix reduced to zero "
                                 "after clearing")
        results[pos] = col[-1][0] if col else None
    return results, reducer


def assemble_intervals(pairs: Iterable[tuple[Simplex, Simplex]], zero_columns: Iterable[Simplex],
                       previous_pivots: Container[int], l: Callable[[Simplex], float],
                       k: Callable[[Simplex], float], degree: int) -> list[Interval]:
    """Turn reduction results into bars of one degree.

    ``pairs`` holds ``(σ, τ)`` for every nonzero reduced column of the mixed
    matrix: ``σ`` is the column's own simplex (the pivot of the triangular
    reduction matrix) and ``τ`` the pivot simplex, giving ``[l(σ), k(τ))``
    whenever that is nonempty.  ``zero_columns`` are the simplices whose
    column of the domain matrix reduced to zero; those whose index is not in
    ``previous_pivots`` give ``[l(σ), inf)``.  Bars born at infinity are
    dropped.
    """
    out = []
    for sigma, tau in pairs:
        birth, death = l(sigma), k(tau)
        if birth < death:
            out.append(Interval(degree, birth, death, sigma.vertices(), tau.vertices()))
    for sigma in zero_columns:
        if sigma.index in previous_pivots:
            continue
        birth = l(sigma)
        if math.isfinite(birth):
            out.append(Interval(degree, birth, math.inf, sigma.vertices(), None))
    return out


def _zero_dim_intervals(n: int, metric: RankedMetric, member: RankedMetric) -> list[Interval]:
    merges, roots = _zero_dim_pairs(n, metric, member)
    out = []
    for _, rank, absorbed, edge in merges:
        death = metric.value(rank)
        if death > 0:
            out.append(Interval(0, 0.0, death, (absorbed,), edge))
    out.extend(Interval(0, 0.0, math.inf, (r,), None) for r in roots)
    return out


def _simplices_in(n: int, dim: int, member: RankedMetric):
    verts, idx = enumerate_simplices(n, dim)
    keep = member.diameters(verts) < member.beyond
    return verts[keep], idx[keep]


def compute_image_barcode(pair: FiltrationPair, p: int = 2, clearing: bool = True,
                          shortcut: bool = True, stats: dict | None = None) -> Barcode:
    """Barcode of the image of ``H_*(L_t) -> H_*(K_t)`` up to ``pair.max_dim``.

    Raises ``DominanceError`` unless ``dL >= dK`` entrywise.  ``clearing`` and
    ``shortcut`` switch the two optimizations; results do not depend on them.
    If given, ``stats`` is filled with per-degree ``ReductionStats`` of both
    matrices.
    """
    pair.check()
    n, t = pair.n, pair.threshold
    L = RankedMetric(pair.dL, t)
    K = RankedMetric(pair.dK, t)
    intervals = []
    if n == 0:
        return Barcode()

    # the degree-0 image is all of H_0(K_t): vertices enter both at 0
    intervals += _zero_dim_intervals(n, K, K)
    previous_pivots = {e for e, *_ in _zero_dim_pairs(n, L, K)[0]}

    for d in range(1, pair.max_dim + 1):
        verts, idx = _simplices_in(n, d, K)
        if len(idx) == 0:
            break
        lrank = L.diameters(verts)
        krank = K.diameters(verts)
        order = np.lexsort((idx, -lrank))
        enum = CofacetEnumerator(n, d)
        stride = enum.stride
        cleared = np.isin(idx, np.fromiter(previous_pivots, dtype=np.int64, count=len(previous_pivots)))

        r_results, r_reducer = _reduce_coboundary(
            verts, order, lrank, L, K, enum, p, shortcut, cleared if clearing else None)
        zero = cleared.copy() if clearing else np.zeros(len(idx), dtype=bool)
        for pos, piv in r_results.items():
            if piv is None:
                zero[pos] = True

        s_results, s_reducer = _reduce_coboundary(
            verts, order, krank, K, K, enum, p, shortcut, zero if clearing else None,
            forbid_zero=clearing)
        if stats is not None:
            s_zero = {int(idx[pos]) for pos, piv in s_results.items() if piv is None}
            if clearing:
                s_zero |= set(idx[zero].tolist())
            stats[d] = {"R": r_reducer.stats, "S": s_reducer.stats,
                        "R_zero": set(idx[zero].tolist()), "S_zero": s_zero}

        lvals = {int(i): L.value(r) for i, r in zip(idx, lrank)}
        tau_vals = {}
        pairs = []
        for pos, key in s_results.items():
            if key is None:
                continue
            rank_part, tau = divmod(key, stride)
            tau_vals[tau] = K.value(K.beyond - rank_part)
            pairs.append((Simplex(int(idx[pos]), d), Simplex(tau, d + 1)))
        zero_cols = [Simplex(int(i), d) for i in idx[zero]]
        intervals += assemble_intervals(pairs, zero_cols, previous_pivots,
                                        lambda s: lvals[s.index], lambda s: tau_vals[s.index], d)
        previous_pivots = {key % stride for key in r_reducer.pivots}
    return Barcode(intervals)


def compute_single_barcode(D: DistanceMatrix, max_dim: int = 1, threshold: float = math.inf,
                           p: int = 2, clearing: bool = True, shortcut: bool = True,
                           zero_dim: str = "union-find") -> Barcode:
    """Persistence barcode of ``Rips(D)`` up to degree ``max_dim``.

    Computed in relative cohomology with clearing.  Degree 0 uses union-find
    by default; ``zero_dim="matrix"`` reduces the vertex coboundary columns
    like every other degree.
    """
    n = D.n
    M = RankedMetric(D, threshold)
    if n == 0:
        return Barcode()
    intervals = []
    if zero_dim == "union-find":
        intervals += _zero_dim_intervals(n, M, M)
        previous_pivots = {e for e, *_ in _zero_dim_pairs(n, M, M)[0]}
        first = 1
    elif zero_dim == "matrix":
        previous_pivots = set()
        first = 0
    else:
        raise ValueError(f"unknown zero_dim strategy {zero_dim!r}")

    for d in range(first, max_dim + 1):
        verts, idx = _simplices_in(n, d, M)
        if len(idx) == 0:
            break
        rank = M.diameters(verts)
        order = np.lexsort((idx, -rank))
        enum = CofacetEnumerator(n, d)
        stride = enum.stride
        cleared = np.isin(idx, np.fromiter(previous_pivots, dtype=np.int64, count=len(previous_pivots)))
        results, reducer = _reduce_coboundary(
            verts, order, rank, M, M, enum, p, shortcut, cleared if clearing else None)
        col_values = {int(i): M.value(r) for i, r in zip(idx, rank)}
        row_values = {}
        pairs = []
        zero_cols = [Simplex(int(i), d) for i in idx[cleared]] if clearing else []
        for pos, key in results.items():
            if key is None:
                zero_cols.append(Simplex(int(idx[pos]), d))
                continue
            rank_part, tau = divmod(key, stride)
            row_values[tau] = M.value(M.beyond - rank_part)
            pairs.append((Simplex(int(idx[pos]), d), Simplex(tau, d + 1)))
        intervals += assemble_intervals(pairs, zero_cols, previous_pivots,
                                        lambda s: col_values[s.index],
                                        lambda s: row_values[s.index], d)
        previous_pivots = {key % stride for key in reducer.pivots}
    return Barcode(intervals)


def compute_image_barcode_homology(pair: FiltrationPair, p: int = 2) -> Barcode:
    """Reference computation of the image barcode by reducing boundary matrices.

    Reduces ``D^L`` (rows and columns in ``l``-order) and the mixed matrix
    ``D^f`` (rows in ``l``-order, columns in ``k``-order).  A nonzero reduced
    column of ``D^f`` for the ``(d+1)``-simplex ``τ`` with pivot ``σ`` gives
    ``[l(σ), k(τ))`` when nonempty; a ``d``-simplex with zero reduced column
    in ``D^L`` that is not a pivot of the reduced ``D^f`` gives an infinite
    bar.  Meant for small instances.
    """
    pair.check()
    top = pair.max_dim + 1
    orders_L = [pair_order(pair, q, "L") for q in range(top + 1)]
    orders_K = [pair_order(pair, q, "K") for q in range(top + 1)]
    reduced_L, reduced_f = [], []
    for q in range(top + 1):
        if q == 0:
            block_L = [[] for _ in orders_L[0].simplices]
            block_f = [[] for _ in orders_K[0].simplices]
        else:
            block_L = [boundary_column(Simplex(s, q), orders_L[q - 1], p) for s in orders_L[q].simplices]
            block_f = [boundary_column(Simplex(s, q), orders_L[q - 1], p) for s in orders_K[q].simplices]
        reduced_L.append(reduce_matrix(block_L, p, track_V=False))
        reduced_f.append(reduce_matrix(block_f, p, track_V=False))

    intervals = []
    for d in range(pair.max_dim + 1):
        low, high = orders_L[d], orders_K[d + 1]
        pairs = []
        for j, col in enumerate(reduced_f[d + 1].R):
            if col:
                pairs.append((Simplex(low.simplices[col[-1][0]], d), Simplex(high.simplices[j], d + 1)))
        pivots = {low.simplices[i] for i in reduced_f[d + 1].pivot_index}
        zero_cols = [Simplex(low.simplices[i], d) for i in sorted(reduced_L[d].zero_columns())]
        intervals += assemble_intervals(pairs, zero_cols, pivots,
                                        lambda s: low.value_of(s.index),
                                        lambda s: high.value_of(s.index), d)
    return Barcode(intervals)


def explicit_coboundary_blocks(pair: FiltrationPair, dim: int, p: int = 2):
    """Explicit degree-``dim`` coboundary matrices of the pair, for small instances.

    Returns ``(columns, domain, mixed)``: the column order (``dim``-simplices
    in reverse ``l``-order), the domain matrix with rows at reverse
    ``l``-order positions of the ``(dim+1)``-simplices, and the mixed matrix
    with rows at their reverse ``k``-order positions.
    """
    columns = pair_order(pair, dim, "L", REVERSE)
    rows_l = pair_order(pair, dim + 1, "L", REVERSE)
    rows_k = pair_order(pair, dim + 1, "K", REVERSE)
    domain = [coboundary_column(Simplex(s, dim), rows_l, pair.dK, p=p) for s in columns.simplices]
    mixed = [coboundary_column(Simplex(s, dim), rows_k, pair.dK, p=p) for s in columns.simplices]
    return columns, domain, mixed
