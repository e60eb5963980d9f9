"""Intervals and barcodes."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True)
class Interval:
    """Half-open bar ``[birth, death)`` in homological degree ``degree``.

    ``death`` is ``math.inf`` for essential classes.  The optional witnesses
    are vertex tuples (strictly decreasing) of the simplex creating the class
    and the simplex killing it.
    """

    degree: int
    birth: float
    death: float = math.inf
    birth_simplex: tuple | None = None
    death_simplex: tuple | None = None

    def __post_init__(self):
        if not self.birth < self.death:
            raise ValueError(f"empty interval [{self.birth}, {self.death})")

    @property
    def essential(self) -> bool:
        return math.isinf(self.death)

    def sort_key(self):
        return (self.degree, self.birth, self.death,
                self.birth_simplex or (), self.death_simplex or ())


class Barcode:
    """Multiset of intervals grouped by degree.

    Equality compares the multisets of ``(degree, birth, death)`` and ignores
    witnesses, which depend on tie-breaking.
    """

    def __init__(self, intervals: Iterable[Interval] = ()):
        self.intervals = sorted(intervals, key=Interval.sort_key)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def degrees(self) -> list[int]:
        return sorted({iv.degree for iv in self.intervals})

    def in_degree(self, degree: int) -> list[Interval]:
        return [iv for iv in self.intervals if iv.degree == degree]

    def diagram(self, degree: int) -> list[tuple[float, float]]:
        return [(iv.birth, iv.death) for iv in self.in_degree(degree)]

    def multiset(self, degree: int | None = None) -> Counter:
        return Counter((iv.degree, iv.birth, iv.death) for iv in self.intervals
                       if degree is None or iv.degree == degree)

    def finite(self, degree: int) -> list[Interval]:
        return [iv for iv in self.in_degree(degree) if not iv.essential]

    def essential(self, degree: int) -> list[Interval]:
        return [iv for iv in self.in_degree(degree) if iv.essential]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Barcode):
            return NotImplemented
        return self.multiset() == other.multiset()

    def difference(self, other: "Barcode") -> tuple[Counter, Counter]:
        """Bars only in ``self`` and bars only in ``other``."""
        a, b = self.multiset(), other.multiset()
        return a - b, b - a

    def __repr__(self) -> str:
        body = ", ".join(f"{iv.degree}:[{iv.birth:g}, {iv.death:g})" for iv in self.intervals)
        return f"Barcode({body})"
