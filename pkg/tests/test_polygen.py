import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kregular.errors import DefinitionError, InconsistentSystem, UnderdeterminedSystem
from kregular.hankel import d0_generated_system, d_oracle
from kregular.polygen import (
    GeneratedRule,
    GeneratedSystem,
    construct,
    linear_system,
    parent_index,
    resolve,
    verify_rules,
)
from kregular.seq_core import (
    CHI_POW2,
    IDENTITY,
    THUE_MORSE,
    SequencePolynomial,
    digit_sum,
    digit_sum_value,
    periodic,
)

THUE_MORSE_SYSTEM = linear_system(2, [(1, 0), (-1, 1)])  # G(x, -x+1)
DIGIT_SUM_SYSTEM = linear_system(2, [(1, 0), (1, 1)])  # G(x, x+1)


def squares_system(seeds=None):
    rules = (
        GeneratedRule(0, SequencePolynomial([0, 0, 1])),
        GeneratedRule(1, SequencePolynomial([1, 1])),
    )
    return GeneratedSystem(2, rules, seeds=seeds or {})


def test_thue_morse_system_needs_no_seeds():
    plan = resolve(THUE_MORSE_SYSTEM)
    assert plan.required_seeds == set()
    assert plan.defaults == {0: 0}
    assert construct(THUE_MORSE_SYSTEM).values(8) == [0, 1, 1, 0, 1, 0, 0, 1]


def test_digit_sum_system_defaults_u0():
    plan = resolve(DIGIT_SUM_SYSTEM)
    assert plan.required_seeds == set()
    assert plan.defaults == {0: 0}


def test_d0_system_cycle_at_index_one():
    system = d0_generated_system()
    plan = resolve(system)
    assert plan.required_seeds == {1}
    assert [1] in plan.cycle_report
    u = construct(system)
    assert u.eval(3) == -2
    assert u.values(6) == [1, 0, -1, -2, 1, 2]
    assert u.values(12) == [d_oracle(0, n).value for n in range(12)]
    assert verify_rules(system, u, 2**10).ok


def test_example_squares_system():
    with pytest.raises(UnderdeterminedSystem) as info:
        construct(squares_system())
    assert set(info.value.indices) == {0}
    u = construct(squares_system({0: 0}))
    assert u.eval(3) == 2


def test_example_identity_times_x():
    u = construct(linear_system(2, [(IDENTITY, 0), (1, 1)]))
    assert (u.eval(3), u.eval(6), u.eval(12)) == (2, 6, 36)
    for n in range(1, 200):
        assert u.eval(2 * n) == n * u.eval(n)
        assert u.eval(2 * n + 1) == u.eval(n) + 1


def test_example_thue_morse_coefficients():
    # G(t x + 1, x + t)
    u = construct(linear_system(2, [(THUE_MORSE, 1), (1, THUE_MORSE)]))
    assert u.eval(0) == u.eval(1) == 1
    for n in range(2**10):
        assert u.eval(4 * n + 3) == u.eval(n) + 1
        assert u.eval(4 * n + 2) == -u.eval(2 * n) + u.eval(n) + 2


def test_constructions_match_builtins():
    tm = construct(THUE_MORSE_SYSTEM)
    assert tm.values(2**12) == THUE_MORSE.values(2**12)
    for k in (2, 3, 10):
        system = linear_system(k, [(1, i) for i in range(k)])
        u = construct(system)
        assert all(u.eval(n) == digit_sum_value(n, k) for n in range(2**12))


def test_inconsistent_self_loop():
    with pytest.raises(InconsistentSystem):
        resolve(linear_system(2, [(1, 1), (1, 0)]))
    with pytest.raises(InconsistentSystem):
        resolve(linear_system(2, [(3, 1), (1, 0)]))  # u(0) = 1/(1-3)
    plan = resolve(linear_system(2, [(1, 1), (1, 0)], seeds={0: 5}))
    assert plan.ok


def test_self_loop_solved_generally():
    plan = resolve(linear_system(2, [(3, 4), (1, 0)]))  # u(0) = 4 / (1 - 3) = -2
    assert plan.defaults[0] == -2


def test_multi_node_cycle_needs_one_seed():
    # 0 -> 2 -> 3 -> 1 -> 0
    system = linear_system(2, [(2, 1), (1, 1)], shifts=[2, 0])
    assert [parent_index(system, x) for x in range(4)] == [2, 0, 3, 1]
    plan = resolve(system)
    assert {0, 1, 2, 3} <= plan.required_seeds
    assert plan.missing_seeds == {0, 1, 2, 3}
    with pytest.raises(UnderdeterminedSystem):
        construct(system)
    u = construct(system.with_seeds({2: 10}))
    assert [u.eval(x) for x in range(5)] == [21, 22, 10, 23, -1]
    # only the seeded member may break its own rule
    assert [x for x, _, _ in verify_rules(system, u, 256).violations] == [2]


def test_cutoff_requires_low_indices():
    system = linear_system(2, [(1, 0), (1, 1)], cutoff=3)
    plan = resolve(system)
    assert set(range(6)) <= plan.required_seeds
    with pytest.raises(UnderdeterminedSystem):
        construct(system)


def test_cutoff_semantics_in_verify():
    seeds = {0: 7, 1: -4, 2: 100, 3: 0, 4: 1, 5: 2}
    system = linear_system(2, [(1, 0), (1, 1)], cutoff=3, seeds=seeds)
    u = construct(system)
    assert u.values(6) == [7, -4, 100, 0, 1, 2]
    assert verify_rules(system, u, 64).ok


def test_verify_rules_reports_violations():
    u = construct(THUE_MORSE_SYSTEM)
    assert verify_rules(THUE_MORSE_SYSTEM, u, 2**12).ok
    report = verify_rules(THUE_MORSE_SYSTEM, CHI_POW2, 16)
    assert not report.ok
    x, expected, got = report.violations[0]
    assert (x, expected, got) == (7, 1, 0)


def test_system_validation():
    rule = GeneratedRule(0, SequencePolynomial([0, 1]))
    with pytest.raises(DefinitionError, match="missing rule"):
        GeneratedSystem(2, (rule,))
    with pytest.raises(DefinitionError, match="duplicate"):
        GeneratedSystem(2, (rule, rule))
    with pytest.raises(DefinitionError):
        GeneratedSystem(1, (rule,))
    with pytest.raises(DefinitionError):
        GeneratedSystem(2, (rule, GeneratedRule(1, SequencePolynomial([0, 1]), -1)))


def test_high_degree_values_are_exact():
    u = construct(squares_system({0: 0}))
    # u(3 * 2^k) = 2^(2^k)
    assert u.eval(3 * 2**7) == 2 ** (2**7)


# ------------------------------------------------------------- properties

coef = st.lists(st.integers(-3, 3), min_size=1, max_size=4).map(periodic)


@st.composite
def linear_systems(draw):
    k = draw(st.integers(2, 4))
    pairs = [(draw(coef), draw(coef)) for _ in range(k)]
    shifts = [draw(st.integers(0, 3)) for _ in range(k)]
    system = linear_system(k, pairs, shifts)
    plan = resolve_or_none(system)
    if plan is None:
        seeds = {}
    else:
        seeds = {x: draw(st.integers(-5, 5)) for x in sorted(plan.missing_seeds)}
    return system.with_seeds(seeds)


def resolve_or_none(system):
    try:
        return resolve(system)
    except InconsistentSystem:
        return None


@settings(max_examples=60, deadline=None)
@given(linear_systems())
def test_fixed_point_and_determinism(system):
    plan = resolve_or_none(system)
    if plan is None:
        return
    u = construct(system, plan)
    v = construct(system)
    assert u.values(300) == v.values(300)
    # rules hold wherever the parent is not a seeded cycle member closing on itself
    report = verify_rules(system, u, 300)
    seeded_cycle = {x for cyc in plan.cycle_report for x in cyc} & set(system.seeds)
    assert all(x in seeded_cycle for x, _, _ in report.violations)


@settings(max_examples=60, deadline=None)
@given(linear_systems())
def test_parents_descend_beyond_bound(system):
    bound = resolve_or_none(system)
    if bound is None:
        return
    for x in range(bound.bound + 1, bound.bound + 500):
        assert parent_index(system, x) < x


def test_digit_sum_builtin_agrees_with_system():
    assert construct(DIGIT_SUM_SYSTEM).values(512) == digit_sum(2).values(512)
