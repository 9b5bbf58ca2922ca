"""Sequences defined by ``u(kn+i) = f_i(u(n + j_i))(n)`` for ``n >= cutoff``.

A :class:`GeneratedSystem` holds one rule per residue class mod ``k``.
:func:`resolve` works out which low indices cannot be reached by the rules
(dependency cycles, indices below the cutoff) and :func:`construct` turns a
resolved system into a memoized :class:`~kregular.seq_core.Sequence`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DefinitionError, InconsistentSystem, UnderdeterminedSystem
from .seq_core import Sequence, SequencePolynomial


@dataclass(frozen=True)
class GeneratedRule:
    residue: int
    poly: SequencePolynomial
    shift: int = 0


@dataclass(frozen=True)
class GeneratedSystem:
    k: int
    rules: tuple
    cutoff: int = 0
    seeds: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.k < 2:
            raise DefinitionError(f"base k must be >= 2, got {self.k}")
        if self.cutoff < 0:
            raise DefinitionError("cutoff must be nonnegative")
        rules = tuple(sorted(self.rules, key=lambda r: r.residue))
        residues = [r.residue for r in rules]
        if residues != list(range(self.k)):
            seen = set()
            for r in residues:
                if r in seen:
                    raise DefinitionError(f"duplicate rule for residue {r}")
                seen.add(r)
            missing = sorted(set(range(self.k)) - seen)
            extra = sorted(seen - set(range(self.k)))
            if extra:
                raise DefinitionError(f"residues out of range 0..{self.k - 1}: {extra}")
            raise DefinitionError(f"missing rule for residue(s) {missing}")
        for r in rules:
            if r.shift < 0:
                raise DefinitionError(f"negative shift for residue {r.residue}")
        for idx in self.seeds:
            if idx < 0:
                raise DefinitionError(f"negative seed index {idx}")
        object.__setattr__(self, "rules", rules)
        object.__setattr__(self, "seeds", {int(i): int(v) for i, v in self.seeds.items()})

    def rule(self, residue: int) -> GeneratedRule:
        return self.rules[residue]

    def with_seeds(self, seeds: dict) -> "GeneratedSystem":
        merged = dict(self.seeds)
        merged.update(seeds)
        return GeneratedSystem(self.k, self.rules, self.cutoff, merged)

    @property
    def max_shift(self) -> int:
        return max(r.shift for r in self.rules)

    def describe(self) -> str:
        polys = ", ".join(r.poly.descriptor + (f"@S^{r.shift}" if r.shift else "") for r in self.rules)
        return f"G_{self.cutoff}[k={self.k}]({polys})"


def linear_system(k, pairs, shifts=None, cutoff=0, seeds=None) -> GeneratedSystem:
    """Build a degree-1 system from ``(a_i, b_i)`` pairs meaning ``f_i = a_i x + b_i``."""
    shifts = shifts or [0] * k
    rules = [
        GeneratedRule(i, SequencePolynomial([b, a]), shifts[i]) for i, (a, b) in enumerate(pairs)
    ]
    return GeneratedSystem(k, tuple(rules), cutoff, dict(seeds or {}))


@dataclass
class DependencyPlan:
    bound: int
    required_seeds: set
    evaluation_order: list
    cycle_report: list
    defaults: dict
    missing_seeds: set

    @property
    def ok(self) -> bool:
        return not self.missing_seeds


def parent_index(system: GeneratedSystem, x: int):
    """Index whose value the rule for ``x`` consumes, or None below the cutoff."""
    n, i = divmod(x, system.k)
    if n < system.cutoff:
        return None
    return n + system.rules[i].shift


def _bound(system: GeneratedSystem) -> int:
    k = system.k
    b = 0
    for r in system.rules:
        gap = r.shift - r.residue
        b = max(b, -(-gap // (k - 1)) * k + k)
    return max(b, system.cutoff * k)


def _solve_self_loop(system: GeneratedSystem, x: int):
    """Solve ``u = a*u + b`` for a degree-1 self-loop.

    Returns the value, None when the equation leaves ``u`` free, and raises
    when it has no integer solution.
    """
    n, i = divmod(x, system.k)
    poly = system.rules[i].poly
    if len(poly.coefficients) > 2 and poly.degree() > 1:
        return None
    b = poly.coefficients[0].eval(n)
    a = poly.coefficients[1].eval(n) if len(poly.coefficients) > 1 else 0
    if a == 1:
        if b != 0:
            raise InconsistentSystem(f"index {x}: rule reads u = u + {b}")
        # u(0) = 0 when a_0(0) = 1 and b_0(0) = 0; elsewhere the value stays free
        return 0 if x == 0 else None
    q, rem = divmod(b, 1 - a)
    if rem:
        raise InconsistentSystem(f"index {x}: u = {b}/{1 - a} is not an integer")
    return q


def resolve(system: GeneratedSystem) -> DependencyPlan:
    k = system.k
    bound = _bound(system)
    below_cutoff = set(range(system.cutoff * k))

    # collect the low-index graph; chains above the bound strictly descend
    parent = {}
    stack = list(range(bound + 1))
    while stack:
        x = stack.pop()
        if x in parent:
            continue
        p = parent_index(system, x)
        parent[x] = p
        if p is not None and p not in parent:
            stack.append(p)

    # cycles of the functional graph (below-cutoff nodes have no out-edge)
    cycles = []
    color = {}
    for start in sorted(parent):
        path = []
        x = start
        while x is not None and x not in color:
            color[x] = start
            path.append(x)
            x = parent[x]
        if x is not None and color.get(x) == start:
            cyc = path[path.index(x):]
            cycles.append(sorted(cyc))

    required = set(below_cutoff)
    defaults = {}
    missing = below_cutoff - set(system.seeds)
    for cyc in cycles:
        if len(cyc) == 1:
            (x,) = cyc
            try:
                value = _solve_self_loop(system, x)
            except InconsistentSystem:
                if x not in system.seeds:
                    raise
                value = None
            if value is not None:
                if x not in system.seeds:
                    defaults[x] = value
                continue
        required.update(cyc)
        if not any(x in system.seeds for x in cyc):
            missing.update(cyc)

    fixed = set(system.seeds) | set(defaults)
    order = []
    done = set()
    for start in sorted(parent):
        chain = []
        x = start
        while x is not None and x not in done and x not in chain:
            chain.append(x)
            if x in fixed:
                break
            x = parent[x]
        for y in reversed(chain):
            if y not in done:
                done.add(y)
                order.append(y)

    return DependencyPlan(
        bound=bound,
        required_seeds=required,
        evaluation_order=order,
        cycle_report=cycles,
        defaults=defaults,
        missing_seeds=missing,
    )


def construct(system: GeneratedSystem, plan: DependencyPlan | None = None) -> Sequence:
    plan = plan or resolve(system)
    if plan.missing_seeds:
        raise UnderdeterminedSystem(plan.missing_seeds)
    k = system.k
    bound = plan.bound
    fixed = dict(plan.defaults)
    fixed.update(system.seeds)
    rules = system.rules

    def fn(x):
        try:
            return fixed[x]
        except KeyError:
            pass
        n, i = divmod(x, k)
        rule = rules[i]
        p = n + rule.shift
        assert x <= bound or p < x, f"non-descending dependency {x} -> {p}"
        return rule.poly.at(n, seq.eval(p))

    seq = Sequence(fn, system.describe(), memo=True)
    for x in plan.evaluation_order:
        seq.eval(x)
    return seq


@dataclass
class RuleReport:
    horizon: int
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_rules(system: GeneratedSystem, u: Sequence, horizon: int) -> RuleReport:
    """Check every index ``x = kn+i < horizon`` with ``n >= cutoff`` against its rule."""
    k = system.k
    violations = []
    checked = 0
    for x in range(system.cutoff * k, horizon):
        n, i = divmod(x, k)
        rule = system.rules[i]
        expected = rule.poly.at(n, u.eval(n + rule.shift))
        got = u.eval(x)
        checked += 1
        if expected != got:
            violations.append((x, expected, got))
    return RuleReport(horizon, checked, violations)
