import pytest
from hypothesis import given
from hypothesis import strategies as st

from kregular.errors import DefinitionError, UsageError
from kregular.seq_core import (
    CHI_POW2,
    IDENTITY,
    THUE_MORSE,
    Sequence,
    SequencePolynomial,
    apply_poly,
    builtin,
    combine,
    constant,
    periodic,
    prefix,
    scale,
    shift,
)

HORIZON = 64


def test_eval_examples():
    assert CHI_POW2.eval(4) == 1
    assert CHI_POW2.eval(0) == 0
    assert THUE_MORSE.eval(5) == 0


def test_prefix_examples():
    assert list(prefix(CHI_POW2, 5)) == [0, 1, 1, 0, 1]
    assert list(prefix(constant(3), 3)) == [3, 3, 3]
    assert list(prefix(IDENTITY, 4)) == [0, 1, 2, 3]
    t = prefix(IDENTITY, 4)
    assert len(t) == 4 and t.origin == "identity"


def test_prefix_rejects_empty():
    with pytest.raises(UsageError):
        prefix(IDENTITY, 0)


def test_negative_index_rejected():
    with pytest.raises(UsageError):
        IDENTITY.eval(-1)


def test_combine_examples():
    assert combine("add", CHI_POW2, CHI_POW2).eval(2) == 2
    assert combine("mul", THUE_MORSE, THUE_MORSE).eval(3) == 0
    assert combine("add", IDENTITY, constant(1)).eval(4) == 5
    with pytest.raises(UsageError):
        combine("sub", IDENTITY, IDENTITY)


def test_operators_match_combine():
    u = IDENTITY + 1
    assert u.eval(4) == 5
    assert (IDENTITY * IDENTITY - IDENTITY).eval(5) == 20
    assert (-CHI_POW2).eval(8) == -1


def test_scale_examples():
    assert scale(-1, constant(1)).eval(0) == -1
    assert scale(0, IDENTITY).eval(7) == 0
    assert scale(2, CHI_POW2).eval(8) == 2


def test_shift_examples():
    assert list(prefix(shift(CHI_POW2, 1), 4)) == [1, 1, 0, 1]
    assert shift(CHI_POW2, 0).values(HORIZON) == CHI_POW2.values(HORIZON)
    assert shift(IDENTITY, 3).eval(2) == 5
    with pytest.raises(UsageError):
        shift(IDENTITY, -1)


def test_apply_poly_examples():
    x = SequencePolynomial([0, 1])
    assert apply_poly(x, CHI_POW2).values(HORIZON) == CHI_POW2.values(HORIZON)
    assert apply_poly(SequencePolynomial([1, -1]), THUE_MORSE).eval(1) == 0
    assert apply_poly(SequencePolynomial([0, 0, 1]), IDENTITY).eval(3) == 9


def test_values_are_exact_big_integers():
    big = apply_poly(SequencePolynomial([0, 0, 0, 0, 1]), IDENTITY)
    assert big.eval(10**6) == 10**24


def test_polynomial_degree_on_horizon():
    f = SequencePolynomial([IDENTITY, constant(0), scale(0, IDENTITY)])
    assert f.declared_degree == 2
    assert f.degree() == 0
    assert SequencePolynomial([0, THUE_MORSE]).degree() == 1


def test_builtin_examples():
    assert builtin("digit_sum", k=2).eval(7) == 3
    assert list(prefix(builtin("thue_morse"), 8)) == [0, 1, 1, 0, 1, 0, 0, 1]
    assert builtin("periodic", values=[1, 1, -1, -1]).eval(6) == -1
    assert builtin("constant", c=7).eval(100) == 7
    assert builtin("identity").eval(9) == 9


def test_builtin_errors():
    with pytest.raises(DefinitionError, match="unknown builtin"):
        builtin("fibonacci")
    with pytest.raises(DefinitionError, match="missing parameter 'k'"):
        builtin("digit_sum")
    with pytest.raises(DefinitionError):
        builtin("digit_sum", k=1)


def test_periodic_with_preperiod():
    u = periodic([4, 5], preperiod=[9, 8, 7])
    assert u.values(8) == [9, 8, 7, 4, 5, 4, 5, 4]


def test_memo_is_transparent():
    calls = []

    def fn(n):
        calls.append(n)
        return n * n

    u = Sequence(fn, "squares", memo=True)
    assert [u.eval(3), u.eval(3), u[3], u(3)] == [9, 9, 9, 9]
    assert calls == [3]


# ------------------------------------------------------------- properties

small_tables = st.lists(st.integers(-50, 50), min_size=1, max_size=12)


def _seq(values):
    # periodic sequences are cheap stand-ins for "random small sequences"
    return periodic(values)


@given(small_tables, small_tables)
def test_add_commutes(a, b):
    u, v = _seq(a), _seq(b)
    assert combine("add", u, v).values(HORIZON) == combine("add", v, u).values(HORIZON)


@given(small_tables, small_tables, small_tables)
def test_add_and_mul_associate(a, b, c):
    u, v, w = _seq(a), _seq(b), _seq(c)
    for op in ("add", "mul"):
        left = combine(op, combine(op, u, v), w)
        right = combine(op, u, combine(op, v, w))
        assert left.values(HORIZON) == right.values(HORIZON)


@given(small_tables, small_tables, small_tables)
def test_mul_distributes_over_add(a, b, c):
    u, v, w = _seq(a), _seq(b), _seq(c)
    left = combine("mul", u, combine("add", v, w))
    right = combine("add", combine("mul", u, v), combine("mul", u, w))
    assert left.values(HORIZON) == right.values(HORIZON)


@given(small_tables, st.integers(0, 40), st.integers(0, 40))
def test_shift_composes(a, i, j):
    u = _seq(a)
    assert shift(shift(u, i), j).values(HORIZON) == shift(u, i + j).values(HORIZON)


@given(small_tables, small_tables, small_tables)
def test_degree_one_poly_is_mul_then_add(a, b, c):
    coef_a, coef_b, u = _seq(a), _seq(b), _seq(c)
    lhs = apply_poly(SequencePolynomial([coef_b, coef_a]), u)
    rhs = combine("add", combine("mul", coef_a, u), coef_b)
    assert lhs.values(HORIZON) == rhs.values(HORIZON)
