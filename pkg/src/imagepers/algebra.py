"""Prime-field arithmetic, sparse columns and column reduction with clearing.

Columns are plain lists of ``(row, coefficient)`` pairs sorted by row, with
coefficients fully reduced modulo ``p`` and never zero.  Row labels only need
to be totally ordered integers; the pivot of a column is its largest row.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

SparseColumn = list  # list[tuple[int, int]]

MAX_MODULUS = 1 << 15


class InvariantError(RuntimeError):
    """An internal algebraic invariant was violated."""


class GradingError(ValueError):
    """Column blocks do not fit together as a graded (co)boundary."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class PrimeField:
    """The field of integers modulo a prime ``p < 2**15``.

    Inverses are tabulated once, so the reduction inner loop never calls
    ``pow``.
    """

    def __init__(self, p: int = 2):
        if not isinstance(p, int) or not is_prime(p) or p >= MAX_MODULUS:
            raise ValueError(f"modulus must be a prime below {MAX_MODULUS}, got {p!r}")
        self.p = p
        inv = [0] * p
        if p > 1:
            inv[1] = 1
        for a in range(2, p):
            # standard recurrence: inv[a] = -(p // a) * inv[p % a]
            inv[a] = (p - (p // a) * inv[p % a] % p) % p
        self._inv = inv

    def inverse(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in a field")
        return self._inv[a]

    def reduce(self, a: int) -> int:
        return a % self.p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"


def field_inverse(a: int, p: int) -> int:
    """Multiplicative inverse of ``a`` modulo the prime ``p``."""
    if a % p == 0:
        raise ZeroDivisionError(f"{a} is zero modulo {p}")
    return pow(a, p - 2, p)


def make_column(entries: Iterable[tuple[int, int]], p: int = 2) -> SparseColumn:
    """Normalize arbitrary ``(row, coeff)`` pairs into a valid sparse column.

    Duplicate rows are summed and zero coefficients dropped.
    """
    acc: dict[int, int] = {}
    for row, c in entries:
        acc[row] = (acc.get(row, 0) + c) % p
    return sorted((r, c) for r, c in acc.items() if c)


def pivot(column: Sequence[tuple[int, int]]) -> int | None:
    """Largest row with a nonzero coefficient, ``None`` for the zero column."""
    if not column:
        return None
    return column[-1][0]


def add_columns(a: SparseColumn, b: SparseColumn, factor: int, p: int) -> SparseColumn:
    """Return ``a + factor * b`` as a sorted sparse column."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        ra, ca = a[i]
        rb, cb = b[j]
        if ra < rb:
            out.append(a[i])
            i += 1
        elif rb < ra:
            c = factor * cb % p
            if c:
                out.append((rb, c))
            j += 1
        else:
            c = (ca + factor * cb) % p
            if c:
                out.append((ra, c))
            i += 1
            j += 1
    out.extend(a[i:])
    for rb, cb in b[j:]:
        c = factor * cb % p
        if c:
            out.append((rb, c))
    return out


class WorkingColumn:
    """Accumulator for one column under reduction.

    A dict holds the coefficients and a heap of negated rows tracks the
    maximum; heap entries for rows that cancelled are discarded lazily.
    """

    __slots__ = ("p", "coeffs", "heap")

    def __init__(self, entries: Iterable[tuple[int, int]], p: int):
        self.p = p
        self.coeffs: dict[int, int] = {}
        for r, c in entries:
            c = (self.coeffs.get(r, 0) + c) % p
            if c:
                self.coeffs[r] = c
            else:
                self.coeffs.pop(r, None)
        self.heap = [-r for r in self.coeffs]
        heapq.heapify(self.heap)

    def pivot(self) -> int | None:
        heap, coeffs = self.heap, self.coeffs
        while heap:
            r = -heap[0]
            if r in coeffs:
                return r
            heapq.heappop(heap)
        return None

    def add(self, column: Iterable[tuple[int, int]], factor: int) -> None:
        p, coeffs, heap = self.p, self.coeffs, self.heap
        for r, c in column:
            old = coeffs.get(r)
            if old is None:
                coeffs[r] = factor * c % p
                heapq.heappush(heap, -r)
            else:
                new = (old + factor * c) % p
                if new:
                    coeffs[r] = new
                else:
                    del coeffs[r]

    def finish(self) -> SparseColumn:
        return sorted(self.coeffs.items())


@dataclass
class ReductionStats:
    columns: int = 0
    zero_columns: int = 0
    additions: int = 0
    cleared: int = 0
    emergent: int = 0


class ColumnReducer:
    """Left-to-right column reduction keeping one column per pivot.

    ``fetch`` regenerates the unreduced column for a column id; it is used for
    columns registered without stored entries (emergent pairs, whose reduced
    column equals the unreduced one).
    """

    def __init__(self, p: int = 2, fetch: Callable[[Hashable], SparseColumn] | None = None,
                 track_v: bool = False):
        self.field = PrimeField(p)
        self.p = p
        self.fetch = fetch
        self.track_v = track_v
        self.pivots: dict[int, Hashable] = {}
        self.columns: dict[Hashable, SparseColumn | None] = {}
        self.v: dict[Hashable, dict[Hashable, int]] = {}
        self.stats = ReductionStats()

    def column(self, col_id: Hashable) -> SparseColumn:
        entries = self.columns[col_id]
        if entries is None:
            entries = self.fetch(col_id)
        return entries

    def register(self, col_id: Hashable, piv: int, entries: SparseColumn | None = None) -> None:
        """Record an already reduced column whose pivot is known to be new."""
        if piv in self.pivots:
            raise InvariantError(f"pivot {piv} registered twice")
        self.pivots[piv] = col_id
        self.columns[col_id] = entries
        if self.track_v:
            self.v[col_id] = {col_id: 1}
        self.stats.columns += 1
        self.stats.emergent += 1

    def reduce(self, col_id: Hashable, entries: Iterable[tuple[int, int]]) -> SparseColumn:
        """Reduce one column against the stored ones and store the result."""
        p = self.p
        work = WorkingColumn(entries, p)
        v = {col_id: 1} if self.track_v else None
        self.stats.columns += 1
        while True:
            piv = work.pivot()
            if piv is None:
                break
            other = self.pivots.get(piv)
            if other is None:
                break
            other_col = self.column(other)
            # other_col has pivot piv as its last entry
            factor = (-work.coeffs[piv] * self.field.inverse(other_col[-1][1])) % p
            work.add(other_col, factor)
            self.stats.additions += 1
            if v is not None:
                for k, c in self.v[other].items():
                    c = (v.get(k, 0) + factor * c) % p
                    if c:
                        v[k] = c
                    else:
                        v.pop(k, None)
        result = work.finish()
        if result:
            self.pivots[result[-1][0]] = col_id
            self.columns[col_id] = result
        else:
            self.stats.zero_columns += 1
        if v is not None:
            self.v[col_id] = v
        return result


@dataclass
class ReducedDecomposition:
    """Result ``R = D V`` of reducing a matrix ``D`` given by its columns."""

    R: list
    V: list | None
    pivot_index: dict = field(default_factory=dict)
    stats: ReductionStats = field(default_factory=ReductionStats)

    def pivots(self) -> set[int]:
        return set(self.pivot_index)

    def zero_columns(self) -> set[int]:
        return {j for j, c in enumerate(self.R) if not c}


def reduce_matrix(D: Sequence[SparseColumn], p: int = 2, track_V: bool = True,
                  skip: Iterable[int] = ()) -> ReducedDecomposition:
    """Reduce the columns of ``D`` from left to right.

    Columns listed in ``skip`` are taken to be zero without any work (this is
    how clearing enters).  With ``track_V`` the returned ``V`` holds sparse
    columns indexed by column position, so that ``R = D V``.
    """
    skip = set(skip)
    reducer = ColumnReducer(p, track_v=track_V)
    R = []
    for j, col in enumerate(D):
        if j in skip:
            R.append([])
            if track_V:
                reducer.v[j] = {j: 1}
            reducer.stats.cleared += 1
            continue
        R.append(reducer.reduce(j, col))
    V = None
    if track_V:
        V = [sorted(reducer.v[j].items()) for j in range(len(D))]
    return ReducedDecomposition(R, V, dict(reducer.pivots), reducer.stats)


def clear_columns(zero_set: Iterable[int], target: Sequence[SparseColumn]) -> list:
    """Replace the columns of ``target`` listed in ``zero_set`` by zero columns."""
    zero_set = set(zero_set)
    bad = [j for j in zero_set if not 0 <= j < len(target)]
    if bad:
        raise IndexError(f"column indices out of range: {sorted(bad)}")
    return [[] if j in zero_set else list(col) for j, col in enumerate(target)]


def reduce_with_clearing(blocks: Sequence[Sequence[SparseColumn]], direction: str = "cohomological",
                         p: int = 2, clearing: bool = True,
                         track_V: bool = False) -> list[ReducedDecomposition]:
    """Reduce a graded family of (co)boundary column blocks with clearing.

    ``blocks[d]`` holds the columns of the degree-``d`` basis elements.  In the
    cohomological direction their rows index degree ``d + 1`` elements and
    degrees are processed upwards; homologically rows index degree ``d - 1``
    elements and degrees are processed downwards.  A pivot found in one block
    is the index of a column in the next processed block, which is then
    cleared.
    """
    if direction not in ("cohomological", "homological"):
        raise ValueError(f"unknown direction {direction!r}")
    step = 1 if direction == "cohomological" else -1
    for d, block in enumerate(blocks):
        target = d + step
        if not 0 <= target < len(blocks):
            continue
        n_rows = len(blocks[target])
        for col in block:
            if col and (col[-1][0] >= n_rows or col[0][0] < 0):
                raise GradingError(f"degree {d} column references a row outside degree {target}")
    order = range(len(blocks)) if step == 1 else range(len(blocks) - 1, -1, -1)
    results: list[ReducedDecomposition | None] = [None] * len(blocks)
    to_clear: set[int] = set()
    for d in order:
        res = reduce_matrix(blocks[d], p, track_V, skip=to_clear if clearing else ())
        results[d] = res
        to_clear = res.pivots()
    return results


def matmul_columns(D: Sequence[SparseColumn], V: Sequence[SparseColumn], p: int) -> list:
    """Sparse product ``D V``, each column of ``V`` indexing columns of ``D``."""
    out = []
    for vcol in V:
        acc: dict[int, int] = {}
        for j, c in vcol:
            for r, a in D[j]:
                acc[r] = (acc.get(r, 0) + c * a) % p
        out.append(sorted((r, c) for r, c in acc.items() if c))
    return out
