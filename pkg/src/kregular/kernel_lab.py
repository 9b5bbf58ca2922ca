"""Empirical k-kernel machinery.

Every detector here is a semi-decision: kernel nodes are compared through
finite windows of the sequence, and every returned witness is replayed
against the sequence before it is handed back.  Caps and horizons are part
of the result so that a caller can tell what was actually checked.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    CorruptRepresentation,
    HorizonExhausted,
    HorizonTooSmall,
    NotWithinCaps,
    ProbeInapplicable,
    UsageError,
)
from .linalg import SpanBasis
from .seq_core import Sequence

DEFAULT_HORIZON = 2**12
DEFAULT_EXTENDED_HORIZON = 2**14
DEFAULT_RANK_CAP = 64
DEFAULT_STATE_CAP = 256


@dataclass(frozen=True, order=True)
class KernelNode:
    """The subsequence ``n -> u(k**i * n + j)``."""

    i: int = 0
    j: int = 0

    def child(self, digit: int, k: int) -> "KernelNode":
        return kernel_child(self, digit, k)

    def window(self, values, k: int):
        """The node's first ``len(values) // k**i`` terms, read out of a prefix of ``u``."""
        step = k**self.i
        return values[self.j :: step][: len(values) // step]


def kernel_child(node: KernelNode, digit: int, k: int) -> KernelNode:
    if not 0 <= digit < k:
        raise UsageError(f"digit {digit} out of range for base {k}")
    return KernelNode(node.i + 1, node.j + digit * k**node.i)


def digits_lsd(n: int, k: int) -> list[int]:
    out = []
    while n:
        n, d = divmod(n, k)
        out.append(d)
    return out


# ------------------------------------------------------------------- DFAO


@dataclass
class DFAO:
    k: int
    nodes: list  # KernelNode per state; state 0 is the root
    windows: list
    transitions: list  # transitions[state][digit] -> state
    outputs: list
    horizon: int

    @property
    def num_states(self) -> int:
        return len(self.nodes)

    def evaluate(self, n: int) -> int:
        """Read ``n`` least-significant digit first from the root."""
        s = 0
        while n:
            n, d = divmod(n, self.k)
            s = self.transitions[s][d]
        return self.outputs[s]

    def as_sequence(self) -> Sequence:
        return Sequence(self.evaluate, f"dfao[k={self.k}, states={self.num_states}]")

    def replay(self, u: Sequence, horizon: int) -> list:
        return [(n, self.evaluate(n), u.eval(n)) for n in range(horizon) if self.evaluate(n) != u.eval(n)]


def detect_automatic(u: Sequence, k: int, horizon: int = DEFAULT_HORIZON, state_cap: int = DEFAULT_STATE_CAP) -> DFAO:
    """Close the k-kernel of ``u`` under truncation equality.

    Raises NotWithinCaps when more than ``state_cap`` distinct windows
    appear, HorizonExhausted when the windows get shorter than two terms
    before closure, and HorizonTooSmall if the closed automaton does not
    replay ``u`` on the horizon.
    """
    if k < 2 or horizon < 16 or state_cap < 1:
        raise UsageError("need k >= 2, horizon >= 16, state_cap >= 1")
    values = u.values(horizon)
    root = KernelNode()
    nodes = [root]
    windows = [values]
    transitions: list[list[int]] = []
    queue = deque([0])
    while queue:
        s = queue.popleft()
        row = []
        for d in range(k):
            c = nodes[s].child(d, k)
            w = horizon // k**c.i
            if w < 2:
                raise HorizonExhausted(f"window for node {c} has {w} terms at horizon {horizon}")
            cw = c.window(values, k)
            target = next((t for t, tw in enumerate(windows) if tw[:w] == cw), None)
            if target is None:
                if len(nodes) >= state_cap:
                    raise NotWithinCaps(f"more than {state_cap} kernel states")
                target = len(nodes)
                nodes.append(c)
                windows.append(cw)
                queue.append(target)
            row.append(target)
        transitions.append(row)
    dfao = DFAO(k, nodes, windows, transitions, [w[0] for w in windows], horizon)
    bad = dfao.replay(u, horizon)
    if bad:
        raise HorizonTooSmall(f"automaton disagrees with the sequence at n={bad[0][0]}")
    return dfao


# ------------------------------------------------- linear representations


@dataclass
class LinearRepresentation:
    """``S(kn+d) = M_d S(n)`` with ``S(0) = initial`` and ``u(n) = S(n)[0]``."""

    k: int
    basis_nodes: list
    matrices: list  # matrices[d][row][col] as Fractions
    initial: list
    horizon: int | None = None

    @property
    def rank(self) -> int:
        return len(self.initial)

    def as_sequence(self) -> Sequence:
        return Sequence(lambda n: rep_eval(self, n), f"linrep[k={self.k}, rank={self.rank}]")


def _matvec(m, v):
    return [sum(a * b for a, b in zip(row, v) if a) for row in m]


def rep_eval(rep: LinearRepresentation, n: int) -> int:
    if n < 0:
        raise UsageError("negative index")
    vec = [Fraction(x) for x in rep.initial]
    for d in reversed(digits_lsd(n, rep.k)):
        vec = _matvec(rep.matrices[d], vec)
    value = Fraction(vec[0])
    if value.denominator != 1:
        raise CorruptRepresentation(f"rep_eval({n}) = {value} is not an integer")
    return int(value)


def _integer_matrices(rep: LinearRepresentation):
    """Per digit: common denominator and the sparse integer rows ``[(col, num)]``."""
    out = []
    for m in rep.matrices:
        den = 1
        for row in m:
            for x in row:
                den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
        rows = [[(c, int(Fraction(x) * den)) for c, x in enumerate(row) if x] for row in m]
        out.append((den, rows))
    return out


def representation_values(rep: LinearRepresentation, horizon: int) -> list:
    """``S(n)`` for ``n < horizon`` by dynamic programming over ``n // k``.

    Agrees with :func:`rep_eval` term by term.  Uses integer arithmetic while
    every division is exact and falls back to Fractions otherwise.
    """
    k = rep.k
    mats = _integer_matrices(rep)
    states = [list(rep.initial)]
    exact = all(isinstance(x, int) or Fraction(x).denominator == 1 for x in rep.initial)
    if exact:
        states = [[int(x) for x in rep.initial]]
        for n in range(1, horizon):
            q, d = divmod(n, k)
            prev = states[q]
            den, rows = mats[d]
            vec = []
            for row in rows:
                acc = 0
                for c, a in row:
                    acc += a * prev[c]
                if acc % den:
                    exact = False
                    break
                vec.append(acc // den)
            if not exact:
                break
            states.append(vec)
    if exact:
        return states
    states = [[Fraction(x) for x in rep.initial]]
    for n in range(1, horizon):
        q, d = divmod(n, k)
        states.append(_matvec(rep.matrices[d], states[q]))
    return states


@dataclass
class RepresentationReport:
    horizon: int
    padding_ok: bool
    violations: list

    @property
    def ok(self) -> bool:
        return self.padding_ok and not self.violations


def verify_representation(rep: LinearRepresentation, u: Sequence, horizon: int) -> RepresentationReport:
    padding_ok = _matvec(rep.matrices[0], [Fraction(x) for x in rep.initial]) == [Fraction(x) for x in rep.initial]
    states = representation_values(rep, horizon)
    violations = []
    for n, s in enumerate(states):
        got = s[0]
        want = u.eval(n)
        if got != want:
            violations.append((n, want, got))
    return RepresentationReport(horizon, padding_ok, violations)


def guess_linear_representation(
    u: Sequence,
    k: int,
    horizon: int = DEFAULT_HORIZON,
    rank_cap: int = DEFAULT_RANK_CAP,
    extended_horizon: int | None = None,
) -> LinearRepresentation:
    """Find a basis of the k-kernel span seen through windows of ``u[:horizon]``.

    Kernel nodes are visited breadth first, digits ascending.  A node whose
    window is independent of the current basis joins it; otherwise its
    coefficient row is recorded.  The assembled representation is checked
    against ``u`` up to ``extended_horizon`` (default ``4 * horizon``).
    """
    if k < 2 or horizon < 64 or rank_cap < 1:
        raise UsageError("need k >= 2, horizon >= 64, rank_cap >= 1")
    extended_horizon = extended_horizon or 4 * horizon
    values = u.values(horizon)
    span = SpanBasis()
    nodes = [KernelNode()]
    span.insert(values)
    rows: dict[tuple[int, int], list] = {}
    queue = deque([0])
    while queue:
        b = queue.popleft()
        for d in range(k):
            c = nodes[b].child(d, k)
            if horizon // k**c.i < 2:
                raise HorizonTooSmall(f"kernel node {c} has fewer than two terms at horizon {horizon}")
            coeffs = span.insert(c.window(values, k))
            if coeffs is None:
                if span.rank > rank_cap:
                    raise NotWithinCaps(f"rank exceeds {rank_cap}")
                nodes.append(c)
                idx = len(nodes) - 1
                rows[(b, d)] = {idx: Fraction(1)}
                queue.append(idx)
            else:
                rows[(b, d)] = {i: x for i, x in enumerate(coeffs) if x}
    r = len(nodes)
    matrices = [[[rows[(b, d)].get(c, Fraction(0)) for c in range(r)] for b in range(r)] for d in range(k)]
    initial = [u.eval(node.j) for node in nodes]
    rep = LinearRepresentation(k, nodes, matrices, initial, horizon)
    report = verify_representation(rep, u, extended_horizon)
    if not report.ok:
        where = report.violations[0][0] if report.violations else "padding"
        raise HorizonTooSmall(f"rank-{r} guess fails at {where} (extended horizon {extended_horizon})")
    return rep


# ----------------------------------------------------------- growth probe


@dataclass
class GrowthProbe:
    anchor: int
    ratios: dict  # kappa -> rho
    verdict: str


def growth_probe(u: Sequence, a: int = 3, K: int = 10) -> GrowthProbe:
    """Log-log slope ``log|u(a 2^K)| / log(a 2^K)`` along the doubling chain from ``a``.

    The verdict is ``"diverging"`` when the slope rises strictly over the
    last half of the chain, the final slope exceeds 1 (faster than linear),
    and either the final slope is more than twice the midpoint slope or the
    second-half gain is at least a nonnegative first-half gain.  Otherwise
    ``"bounded-at-horizon"``.
    """
    if a < 2 or K < 4:
        raise UsageError("need a >= 2 and K >= 4")
    if abs(u.eval(a)) < 2:
        raise ProbeInapplicable(f"|u({a})| = {abs(u.eval(a))} < 2")
    ratios = {}
    for kappa in range(1, K + 1):
        n = a << kappa
        v = abs(u.eval(n))
        if v:
            ratios[kappa] = math.log2(v) / math.log2(n)
    half = K // 2
    tail = [ratios[x] for x in range(half, K + 1) if x in ratios]
    verdict = "bounded-at-horizon"
    if len(tail) == K - half + 1 and 1 in ratios and all(x < y for x, y in zip(tail, tail[1:])):
        first, mid, last = ratios[1], ratios[half], ratios[K]
        if last > 1 and (last > 2 * mid or last - mid >= mid - first >= 0):
            verdict = "diverging"
    return GrowthProbe(a, ratios, verdict)


# ------------------------------------------------------------ periodicity


@dataclass(frozen=True)
class Periodicity:
    period: int
    preperiod: int


def detect_periodic(u: Sequence, period_cap: int, preperiod_cap: int, horizon: int) -> Periodicity:
    """Smallest period ``p <= period_cap`` (then smallest preperiod) holding on the whole horizon."""
    if horizon < 2 * (period_cap + preperiod_cap):
        raise UsageError("horizon must be at least 2 * (period_cap + preperiod_cap)")
    values = u.values(horizon)
    for p in range(1, period_cap + 1):
        # last index where u(n+p) != u(n); the preperiod must lie beyond it
        last_bad = -1
        for n in range(horizon - p - 1, -1, -1):
            if values[n + p] != values[n]:
                last_bad = n
                break
        q = last_bad + 1
        if q <= preperiod_cap:
            return Periodicity(p, q)
    raise NotWithinCaps(f"no period <= {period_cap} with preperiod <= {preperiod_cap}")


# ---------------------------------------------------------------- reports


@dataclass
class GuessReport:
    outcome: str  # "periodic" | "automatic" | "regular" | "not-within-caps"
    witness: object
    k: int
    horizon: int
    extended_horizon: int
    caps: dict = field(default_factory=dict)
    verified: bool = False
    notes: list = field(default_factory=list)


def classify(
    u: Sequence,
    k: int,
    horizon: int = DEFAULT_HORIZON,
    extended_horizon: int = DEFAULT_EXTENDED_HORIZON,
    rank_cap: int = DEFAULT_RANK_CAP,
    state_cap: int = DEFAULT_STATE_CAP,
    period_cap: int = 64,
    preperiod_cap: int = 64,
) -> GuessReport:
    """Try periodic, then automatic, then regular; report the first witness found."""
    caps = dict(rank_cap=rank_cap, state_cap=state_cap, period_cap=period_cap, preperiod_cap=preperiod_cap)
    report = GuessReport("not-within-caps", None, k, horizon, extended_horizon, caps)
    try:
        per = detect_periodic(u, period_cap, preperiod_cap, horizon)
        report.outcome, report.witness, report.verified = "periodic", per, True
        return report
    except NotWithinCaps as exc:
        report.notes.append(f"periodic: {exc}")
    try:
        dfao = detect_automatic(u, k, horizon, state_cap)
        ext_bad = dfao.replay(u, extended_horizon)
        report.outcome, report.witness, report.verified = "automatic", dfao, not ext_bad
        return report
    except (NotWithinCaps, HorizonExhausted, HorizonTooSmall) as exc:
        report.notes.append(f"automatic: {exc}")
    try:
        rep = guess_linear_representation(u, k, horizon, rank_cap, extended_horizon)
        report.outcome, report.witness, report.verified = "regular", rep, True
    except (NotWithinCaps, HorizonTooSmall) as exc:
        report.notes.append(f"regular: {exc}")
    return report
