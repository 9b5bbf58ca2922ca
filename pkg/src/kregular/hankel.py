"""Hankel determinants of the characteristic sequence of powers of two.

``d(m, n)`` is the determinant of the ``n x n`` matrix ``(p(m+i+j))`` where
``p(n) = 1`` iff ``n`` is a power of two.  Two independent routes compute it:

* :func:`d_oracle` builds the matrix and runs fraction-free elimination;
* :func:`d_recurrence` / :func:`d_table` use the halving recurrences below,
  with ``d(m, 0) = 1`` and ``d(m, -1) = 0``::

      d(0, 2n)      = d(0, n) d(1, n) - d(2, n-1) d(3, n-1)
      d(0, 2n+1)    = d(0, n+1) d(1, n) - d(2, n) d(3, n-1)
      d(1, 2n)      = (-1)^n d(1, n)^2
      d(1, 2n+1)    = (-1)^n d(2, n)^2
      d(2s, 2n)     = d(s, n) d(s+1, n)              (s >= 1)
      d(2s, 2n+1)   = d(s, n+1) d(s+1, n)
      d(2s+1, 2n)   = (-1)^n d(s+1, n)^2
      d(2s+1, 2n+1) = 0

The remaining helpers are closed forms and structural descriptions that the
test-suite checks against the recurrence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import UsageError
from .polygen import GeneratedRule, GeneratedSystem
from .seq_core import CHI_POW2, Sequence, SequencePolynomial, periodic

P = CHI_POW2


@dataclass(frozen=True)
class HankelSpec:
    m: int
    rows: int
    cols: int
    source: Sequence = P

    def realize(self) -> list[list[int]]:
        return hankel_matrix(self.source, self.m, self.rows, self.cols)


@dataclass(frozen=True)
class DeterminantValue:
    m: int
    n: int
    value: int
    provenance: str  # "oracle" | "recurrence" | "closed_form"


def hankel_matrix(source: Sequence, m: int, rows: int, cols: int | None = None) -> list[list[int]]:
    cols = rows if cols is None else cols
    if rows < 1 or cols < 1:
        raise UsageError("Hankel matrix needs at least one row and column")
    window = source.values(m + rows + cols - 1)
    return [window[m + i : m + i + cols] for i in range(rows)]


def det_bareiss(matrix) -> int:
    """Exact determinant of a square integer matrix by fraction-free elimination.

    Zero pivots are replaced by the first lower row with a nonzero entry in
    the pivot column; each swap flips the sign.  The empty matrix has
    determinant 1.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise UsageError("det_bareiss needs a square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            f = ri[k]
            if f == 0:
                if piv != prev:
                    for j in range(k + 1, n):
                        ri[j] = ri[j] * piv // prev
            else:
                for j in range(k + 1, n):
                    ri[j] = (piv * ri[j] - f * rk[j]) // prev
        prev = piv
    return sign * a[n - 1][n - 1]


def d_oracle(m: int, n: int) -> DeterminantValue:
    if m < 0 or n < 0:
        raise UsageError("d_oracle needs m >= 0 and n >= 0")
    value = 1 if n == 0 else det_bareiss(hankel_matrix(P, m, n, n))
    return DeterminantValue(m, n, value, "oracle")


# -------------------------------------------------------------- recurrence


def _step(m: int, n: int, d) -> int:
    """One application of the halving recurrence; ``d`` looks up smaller cases."""
    h, odd = divmod(n, 2)
    sign = -1 if h & 1 else 1
    if m == 0:
        if odd:
            return d(0, h + 1) * d(1, h) - d(2, h) * d(3, h - 1)
        return d(0, h) * d(1, h) - d(2, h - 1) * d(3, h - 1)
    if m == 1:
        if odd:
            return sign * d(2, h) ** 2
        return sign * d(1, h) ** 2
    s, m_odd = divmod(m, 2)
    if m_odd:
        if odd:
            return 0
        return sign * d(s + 1, h) ** 2
    if odd:
        return d(s, h + 1) * d(s + 1, h)
    return d(s, h) * d(s + 1, h)


class HankelRecurrence:
    """Memoized ``d(m, n)`` for ``m >= 0``, ``n >= -1``.

    ``d(0, 1) = 0`` is seeded: the odd ``m = 0`` rule at ``n = 1`` only
    restates itself.  The memo is an unbounded dict; concurrent writers can
    only ever store identical values.
    """

    def __init__(self):
        self._memo: dict[tuple[int, int], int] = {(0, 1): 0}

    def __call__(self, m: int, n: int) -> int:
        if n <= 0:
            if n == 0:
                return 1
            if n == -1:
                return 0
            raise UsageError(f"d({m}, {n}) is undefined below n = -1")
        if m < 0:
            raise UsageError("m must be nonnegative")
        key = (m, n)
        try:
            return self._memo[key]
        except KeyError:
            pass
        value = _step(m, n, self)
        self._memo[key] = value
        return value

    def clear(self):
        self._memo = {(0, 1): 0}

    def __len__(self):
        return len(self._memo)


_default = HankelRecurrence()


def d_value(m: int, n: int) -> int:
    return _default(m, n)


def d_recurrence(m: int, n: int) -> DeterminantValue:
    return DeterminantValue(m, n, _default(m, n), "recurrence")


def d_table(max_m: int, max_n: int) -> list[list[int]]:
    """``table[m][n] = d(m, n)`` for ``m <= max_m``, ``0 <= n <= max_n``, built bottom-up.

    Same recurrence as :class:`HankelRecurrence` without a dict; entries are
    filled by increasing ``n`` and, within one ``n``, increasing ``m``, which
    is the order the rules consume them in.
    """
    width = max(max_m, 3) + 1
    # the rules for m read rows up to m//2 + 1, but m = 0, 1 need rows 2 and 3
    cols = [[0] * (max_n + 1) for _ in range(width)]
    for m in range(width):
        cols[m][0] = 1

    def d(mm, nn):
        if nn == -1:
            return 0
        return cols[mm][nn]

    for n in range(1, max_n + 1):
        for m in range(width):
            if m == 0 and n == 1:
                cols[0][1] = 0
                continue
            cols[m][n] = _step(m, n, d)
    return cols[: max_m + 1]


def d_sequence(m: int) -> Sequence:
    """``n -> d(m, n)`` via the recurrence."""
    return Sequence(lambda n: _default(m, n), f"hankel_d({m})", spec={"builtin": "hankel_d", "params": {"m": m}})


# ----------------------------------------------------------- closed forms


def d1_closed(n: int) -> int:
    return -1 if (n // 2) & 1 else 1


@dataclass(frozen=True)
class MorphismWords:
    level: int
    a: tuple
    b: tuple


def morphism_words(level: int) -> MorphismWords:
    """``A_0 = 1 1``, ``B_0 = 1 -1``, ``A_n = A_{n-1} B_{n-1}``, ``B_n = -A_{n-1} B_{n-1}``."""
    if level < 0:
        raise UsageError("level must be nonnegative")
    return _morphism(level)


@lru_cache(maxsize=None)
def _morphism(level: int) -> MorphismWords:
    if level == 0:
        return MorphismWords(0, (1, 1), (1, -1))
    prev = _morphism(level - 1)
    return MorphismWords(level, prev.a + prev.b, tuple(-x for x in prev.a) + prev.b)


def d2_morphism_prefix(level: int) -> list[int]:
    return list(morphism_words(level).a)


def d2_from_morphism(n: int) -> int:
    level = max(0, (n + 1).bit_length() - 1)
    while len(_morphism(level).a) <= n:
        level += 1
    return _morphism(level).a[n]


def epsilon(r: int, first: int = 1) -> int:
    """``eps_1 = first``, ``eps_2r = (eps_r + r) mod 2``, ``eps_2r+1 = eps_{r+1}``."""
    if r < 1:
        raise UsageError("epsilon is defined for r >= 1")
    return _epsilon(r, first)


@lru_cache(maxsize=None)
def _epsilon(r: int, first: int) -> int:
    if r == 1:
        return first
    h, odd = divmod(r, 2)
    if odd:
        return _epsilon(h + 1, first)
    return (_epsilon(h, first) + h) % 2


def support_exponent(m: int) -> int:
    """The ``k`` with ``2^k < m <= 2^(k+1)``."""
    if m < 2:
        raise UsageError("needs m >= 2")
    return (m - 1).bit_length() - 1


def support_predicate(m: int, n: int) -> str:
    """``"nonzero_unit"`` iff ``n = 0`` or ``n = 1 - m`` modulo ``2^(k+1)``, else ``"zero"``."""
    if m < 3 or n < 0:
        raise UsageError("support_predicate needs m >= 3 and n >= 0")
    mod = 2 ** (support_exponent(m) + 1)
    r = n % mod
    return "nonzero_unit" if r == 0 or r == (1 - m) % mod else "zero"


def cigler_values(m: int, n: int, eps_first: int = 1) -> tuple[int, int]:
    """Closed forms for ``(d(m, 2^(k+1) n), d(m, 2^(k+1) n - m + 1))``.

    Odd ``m = 2r+1`` gives ``(1, (-1)^r)``.  Even ``m = 2r`` gives
    ``(d(2, 2^(k+1) n), (-1)^(n + eps_r) d(2, 2^(k+1) n - m + 1))`` with
    ``d(2, .)`` read off the morphism word.  ``eps_first`` is the value of
    ``eps_1`` (default 1).
    """
    if m < 3:
        raise UsageError("cigler_values needs m >= 3 (2^k < m <= 2^(k+1), k >= 1)")
    if n < 1:
        raise UsageError("cigler_values needs n >= 1")
    k = support_exponent(m)
    base = 2 ** (k + 1) * n
    r, odd = divmod(m, 2)
    if odd:
        return 1, (-1) ** r
    sign = (-1) ** (n + epsilon(r, eps_first))
    return d2_from_morphism(base), sign * d2_from_morphism(base - m + 1)


def cigler_indices(m: int, n: int) -> tuple[int, int]:
    base = 2 ** (support_exponent(m) + 1) * n
    return base, base - m + 1


# ------------------------------------------------- interleave conjugation


def interleave_permutation(n: int) -> list[int]:
    """Row order ``0, 2, 4, ..., 1, 3, 5, ...``."""
    return list(range(0, n, 2)) + list(range(1, n, 2))


def interleave_conjugate(matrix) -> list[list[int]]:
    """``P M P^T`` for the even-then-odd permutation ``P``.

    The result has the block form ``[[M_ee, M_eo], [M_oe, M_oo]]`` where
    ``e`` runs over even 0-based indices (``ceil(n/2)`` of them) and ``o``
    over odd ones.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise UsageError("interleave_conjugate needs a square matrix")
    perm = interleave_permutation(n)
    return [[matrix[i][j] for j in perm] for i in perm]


def random_integer_matrix(size: int, rng: random.Random, lo: int = -9, hi: int = 9) -> list[list[int]]:
    return [[rng.randint(lo, hi) for _ in range(size)] for _ in range(size)]


# --------------------------------------------- d(0, .) as a generated system


def _b_coeff(n: int) -> int:
    return _default(2, n - 1) * _default(3, n - 1)


def _c_coeff(n: int) -> int:
    return _default(2, n) * _default(3, n - 1)


def d0_generated_system() -> GeneratedSystem:
    """``d(0, 2n) = a(n) d(0, n) - b(n)``, ``d(0, 2n+1) = a(n) d(0, n+1) - c(n)``.

    ``a = d(1, .)``, ``b(n) = d(2, n-1) d(3, n-1)``, ``c(n) = d(2, n) d(3, n-1)``
    with ``d(., -1) = 0`` folded into the coefficient sequences.
    """
    a = periodic([1, 1, -1, -1])
    minus_b = Sequence(lambda n: -_b_coeff(n), "neg_hankel_b")
    minus_c = Sequence(lambda n: -_c_coeff(n), "neg_hankel_c")
    rules = (
        GeneratedRule(0, SequencePolynomial([minus_b, a]), 0),
        GeneratedRule(1, SequencePolynomial([minus_c, a]), 1),
    )
    # index 0 would otherwise get the u(0) = 0 default; d(0, 0) = 1 by convention
    return GeneratedSystem(2, rules, 0, {0: 1, 1: 0})
