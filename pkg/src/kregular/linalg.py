"""Incremental exact span membership for integer vectors.

Rows are kept in echelon form with integer entries (fraction-free updates,
gcd-normalised), each row remembering which integer combination of the
inserted vectors it equals.  Queries may use a window shorter than the stored
rows: projecting onto the first ``w`` coordinates commutes with row
operations, so rows whose pivot lies at or beyond ``w`` simply drop out.
"""

from __future__ import annotations

from bisect import insort
from fractions import Fraction
from math import gcd


class _Row:
    __slots__ = ("pivot", "vec", "trans")

    def __init__(self, pivot, vec, trans):
        self.pivot = pivot
        self.vec = vec
        self.trans = trans

    def __lt__(self, other):
        return self.pivot < other.pivot


def _normalise(scale, trans, vec):
    g = abs(scale)
    for x in trans:
        if g == 1:
            break
        g = gcd(g, x)
    for x in vec:
        if g == 1:
            break
        g = gcd(g, x)
    if g > 1:
        scale //= g
        trans = [x // g for x in trans]
        vec = [x // g for x in vec]
    return scale, trans, vec


class SpanBasis:
    """Vectors inserted so far, in insertion order, plus an echelon form of their span."""

    def __init__(self):
        self.size = 0
        self._rows: list[_Row] = []

    def _reduce(self, vector):
        w = len(vector)
        residual = list(vector)
        scale = 1
        trans = [0] * self.size
        for row in self._rows:
            p = row.pivot
            if p >= w:
                break
            b = residual[p]
            if not b:
                continue
            a = row.vec[p]
            rv = row.vec
            residual = [a * x - b * rv[i] for i, x in enumerate(residual)]
            rt = row.trans
            trans = [a * x - b * (rt[i] if i < len(rt) else 0) for i, x in enumerate(trans)]
            scale *= a
            scale, trans, residual = _normalise(scale, trans, residual)
        return scale, trans, residual

    def express(self, vector):
        """Coefficients ``c`` with ``vector == sum(c[l] * inserted[l])`` on its window, or None."""
        scale, trans, residual = self._reduce(vector)
        if any(residual):
            return None
        # scale*v + sum(trans*b) == 0
        return [Fraction(-t, scale) for t in trans]

    def insert(self, vector):
        """Add ``vector`` as basis element ``self.size`` when it is independent.

        Returns the coefficient list when dependent (nothing is added) and
        None after a successful insertion.
        """
        scale, trans, residual = self._reduce(vector)
        pivot = next((i for i, x in enumerate(residual) if x), None)
        if pivot is None:
            return [Fraction(-t, scale) for t in trans]
        for row in self._rows:
            row.trans.append(0)
        trans.append(scale)
        self.size += 1
        if residual[pivot] < 0:
            residual = [-x for x in residual]
            trans = [-x for x in trans]
        insort(self._rows, _Row(pivot, residual, trans))
        return None

    @property
    def rank(self) -> int:
        return self.size

