"""Exact integer sequences and the pointwise ring operations on them.

A :class:`Sequence` is a deterministic map from nonnegative indices to Python
integers, paired with a textual descriptor that identifies its definition.
Everything else in the package consumes sequences through :meth:`Sequence.eval`
or :func:`prefix`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import DefinitionError, UsageError


class Sequence:
    """An immutable, exactly evaluable integer sequence.

    ``fn`` must be total on ``n >= 0`` and deterministic.  When ``memo`` is
    true, values are cached per instance.  The cache is a plain dict whose
    writes are idempotent, so concurrent ``eval`` calls from several threads
    can at worst compute the same value twice.
    """

    __slots__ = ("_fn", "descriptor", "_memo", "spec")

    def __init__(self, fn: Callable[[int], int], descriptor: str, memo: bool = False, spec=None):
        self._fn = fn
        self.descriptor = descriptor
        self._memo = {} if memo else None
        # JSON-ready coefficient spec when the sequence came from a named definition
        self.spec = spec

    def eval(self, n: int) -> int:
        if n < 0:
            raise UsageError(f"negative index {n} for {self.descriptor}")
        memo = self._memo
        if memo is None:
            return self._fn(n)
        try:
            return memo[n]
        except KeyError:
            value = self._fn(n)
            memo[n] = value
            return value

    __call__ = eval

    def __getitem__(self, n: int) -> int:
        return self.eval(n)

    def prefix(self, length: int) -> "TruncatedSequence":
        return prefix(self, length)

    def values(self, length: int) -> list[int]:
        return [self.eval(n) for n in range(length)]

    def __add__(self, other):
        return combine("add", self, as_sequence(other))

    __radd__ = __add__

    def __mul__(self, other):
        return combine("mul", self, as_sequence(other))

    __rmul__ = __mul__

    def __neg__(self):
        return scale(-1, self)

    def __sub__(self, other):
        return combine("add", self, scale(-1, as_sequence(other)))

    def __repr__(self):
        return f"Sequence({self.descriptor})"


@dataclass(frozen=True)
class TruncatedSequence:
    values: tuple
    origin: str

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)


@dataclass(frozen=True)
class SequencePolynomial:
    """``a_0 + a_1 x + ... + a_m x^m`` with sequence coefficients (index = degree)."""

    coefficients: tuple

    def __init__(self, coefficients: Iterable):
        coeffs = tuple(as_sequence(c) for c in coefficients)
        if not coeffs:
            coeffs = (constant(0),)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def declared_degree(self) -> int:
        return len(self.coefficients) - 1

    def degree(self, horizon: int = 64) -> int:
        """Degree judged on ``horizon`` terms: the highest coefficient not all-zero there."""
        for m in range(len(self.coefficients) - 1, 0, -1):
            if any(self.coefficients[m].eval(n) for n in range(horizon)):
                return m
        return 0

    def at(self, n: int, x: int) -> int:
        """Evaluate the coefficients at ``n`` and the polynomial at ``x`` (Horner)."""
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c.eval(n)
        return acc

    @property
    def descriptor(self) -> str:
        return "[" + ", ".join(c.descriptor for c in self.coefficients) + "]"


def as_sequence(x) -> Sequence:
    if isinstance(x, Sequence):
        return x
    if isinstance(x, bool) or not isinstance(x, int):
        raise DefinitionError(f"cannot use {x!r} as a sequence")
    return constant(x)


def eval_at(seq: Sequence, n: int) -> int:
    return seq.eval(n)


def prefix(seq: Sequence, length: int) -> TruncatedSequence:
    if length < 1:
        raise UsageError("prefix length must be >= 1")
    return TruncatedSequence(tuple(seq.eval(n) for n in range(length)), seq.descriptor)


def combine(op: str, u: Sequence, v: Sequence) -> Sequence:
    if op == "add":
        return Sequence(lambda n: u.eval(n) + v.eval(n), f"add({u.descriptor}, {v.descriptor})")
    if op == "mul":
        return Sequence(lambda n: u.eval(n) * v.eval(n), f"mul({u.descriptor}, {v.descriptor})")
    raise UsageError(f"unknown operation {op!r}")


def scale(c: int, u: Sequence) -> Sequence:
    return Sequence(lambda n: c * u.eval(n), f"scale({c}, {u.descriptor})")


def shift(u: Sequence, j: int) -> Sequence:
    if j < 0:
        raise UsageError("shift amount must be nonnegative")
    if j == 0:
        return u
    return Sequence(lambda n: u.eval(n + j), f"shift({u.descriptor}, {j})")


def apply_poly(f: SequencePolynomial, u: Sequence) -> Sequence:
    return Sequence(lambda n: f.at(n, u.eval(n)), f"poly({f.descriptor}, {u.descriptor})")


def subsequence(u: Sequence, step: int, offset: int) -> Sequence:
    """``n -> u(step*n + offset)``; kernel nodes are built from this."""
    if step == 1 and offset == 0:
        return u
    return Sequence(lambda n: u.eval(step * n + offset), f"sub({u.descriptor}, {step}, {offset})")


def agree_on(u: Sequence, v: Sequence, horizon: int) -> bool:
    return all(u.eval(n) == v.eval(n) for n in range(horizon))


# ---------------------------------------------------------------- builtins


def _chi_pow2(n: int) -> int:
    return 1 if n > 0 and n & (n - 1) == 0 else 0


def _thue_morse(n: int) -> int:
    return bin(n).count("1") & 1


def digit_sum_value(n: int, k: int) -> int:
    s = 0
    while n:
        n, d = divmod(n, k)
        s += d
    return s


CHI_POW2 = Sequence(_chi_pow2, "chi_pow2", spec={"builtin": "chi_pow2"})
THUE_MORSE = Sequence(_thue_morse, "thue_morse", spec={"builtin": "thue_morse"})
IDENTITY = Sequence(lambda n: n, "identity", spec={"builtin": "identity"})


def constant(c: int) -> Sequence:
    return Sequence(lambda n: c, f"const({c})", spec={"const": str(c)})


def digit_sum(k: int) -> Sequence:
    if k < 2:
        raise DefinitionError(f"digit_sum needs base >= 2, got {k}")
    return Sequence(
        lambda n: digit_sum_value(n, k), f"digit_sum({k})", spec={"builtin": "digit_sum", "params": {"k": k}}
    )


def periodic(values, preperiod=()) -> Sequence:
    values = tuple(int(v) for v in values)
    preperiod = tuple(int(v) for v in preperiod)
    if not values:
        raise DefinitionError("periodic sequence needs at least one value")
    q, p = len(preperiod), len(values)

    def fn(n):
        if n < q:
            return preperiod[n]
        return values[(n - q) % p]

    desc = f"periodic({list(values)}, {list(preperiod)})"
    spec = {"periodic": {"values": [str(v) for v in values], "preperiod": [str(v) for v in preperiod]}}
    return Sequence(fn, desc, spec=spec)


BUILTIN_NAMES = ("chi_pow2", "thue_morse", "digit_sum", "identity", "constant", "periodic")


def builtin(name: str, **params) -> Sequence:
    """Look up a named sequence.

    ``digit_sum`` takes ``k``; ``constant`` takes ``c``; ``periodic`` takes
    ``values`` and optionally ``preperiod``.
    """
    try:
        if name == "chi_pow2":
            return CHI_POW2
        if name == "thue_morse":
            return THUE_MORSE
        if name == "identity":
            return IDENTITY
        if name == "digit_sum":
            return digit_sum(int(params["k"]))
        if name == "constant":
            return constant(int(params["c"]))
        if name == "periodic":
            return periodic(params["values"], params.get("preperiod", ()))
    except KeyError as exc:
        raise DefinitionError(f"builtin {name!r} is missing parameter {exc.args[0]!r}") from None
    raise DefinitionError(f"unknown builtin {name!r}")
