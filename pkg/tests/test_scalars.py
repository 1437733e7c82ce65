from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfock.errors import DivisionByZero, NonGenericPoint
from qfock.scalars import ONE, Q, QINV, ZERO, Scalar, field_arith


def poly(d):
    return Scalar.make(d, {0: 1})


@st.composite
def scalars(draw, allow_zero=True):
    n = draw(st.dictionaries(st.integers(-3, 3), st.integers(-4, 4), max_size=3))
    d = draw(st.dictionaries(st.integers(0, 3), st.integers(-4, 4), min_size=1, max_size=3))
    if not any(d.values()):
        d = {0: 1}
    s = Scalar.make(n, d)
    if not allow_zero and s.is_zero():
        return ONE
    return s


class TestCanonicalForm:
    def test_zero_normalizes(self):
        assert Scalar.make({}, {0: 5}) == ZERO
        assert Scalar.make({2: 0}, {1: 3}) == ZERO

    def test_gcd_reduction(self):
        # (q^2 - 1)/(q - 1) == q + 1
        a = Scalar.make({2: 1, 0: -1}, {1: 1, 0: -1})
        assert a == poly({1: 1, 0: 1})

    def test_denominator_shifted_to_zero(self):
        a = Scalar.make({0: 1}, {3: 2, 5: 4})
        assert min(e for e, _ in a.den) == 0
        assert a.den[-1][1] > 0

    def test_sign_convention(self):
        a = Scalar.make({0: 1}, {1: -1, 0: 1})
        assert a.den[-1][1] > 0

    def test_zero_denominator_rejected(self):
        with pytest.raises(DivisionByZero):
            Scalar.make({0: 1}, {})


class TestFieldArith:
    def test_q_minus_qinv(self):
        # q - q^{-1} = (q^2 - 1)/q
        got = field_arith(Q, QINV, "sub")
        assert got == Scalar.make({2: 1, 0: -1}, {1: 1})

    def test_mul_identity(self):
        a = Scalar.make({2: 3, -1: 5}, {1: 1, 0: 7})
        assert field_arith(a, ONE, "mul") == a

    def test_div_clears_denominators(self):
        # 1 / (q + q^{-1}) = q/(q^2 + 1)
        got = field_arith(ONE, Q + QINV, "div")
        assert got == Scalar.make({1: 1}, {2: 1, 0: 1})

    def test_div_by_zero(self):
        with pytest.raises(DivisionByZero):
            field_arith(ONE, ZERO, "div")

    def test_pow_negative(self):
        assert Q ** -2 == QINV * QINV


class TestEvaluate:
    def test_classical_limit(self):
        assert (Q - QINV).evaluate(1) == 0

    def test_square(self):
        assert (Q * Q).evaluate(Fraction(3, 2)) == Fraction(9, 4)

    def test_pole(self):
        a = ONE / (Q - ONE)
        with pytest.raises(NonGenericPoint):
            a.evaluate(1)

    def test_zero_point_rejected(self):
        with pytest.raises(NonGenericPoint):
            Q.evaluate(0)


@given(scalars(), scalars(), scalars())
@settings(max_examples=150)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert a + ZERO == a
    assert a * ONE == a
    assert a - a == ZERO


@given(scalars(allow_zero=False))
def test_inverses(a):
    assert a * a.inverse() == ONE
    assert a / a == ONE


@given(scalars(), scalars())
@settings(max_examples=100)
def test_evaluate_is_homomorphism(a, b):
    q0 = Fraction(5, 3)
    try:
        va, vb = a.evaluate(q0), b.evaluate(q0)
    except NonGenericPoint:
        return
    assert (a * b).evaluate(q0) == va * vb
    assert (a + b).evaluate(q0) == va + vb


@given(scalars())
def test_serialization_roundtrip(a):
    assert Scalar.from_pairs(a.to_pairs()) == a


@given(scalars(), scalars())
def test_canonical_equality_iff_value_equality(a, b):
    # equality of canonical forms must coincide with a - b == 0
    assert (a == b) == (a - b).is_zero()


@given(scalars())
def test_canonical_invariants(a):
    exps = [e for e, _ in a.den]
    assert min(exps) == 0                      # denominator starts at q^0
    assert a.den[-1][1] > 0                    # positive leading coefficient
    if not a.is_zero():
        from qfock.scalars import _pgcd
        low = min(e for e, _ in a.num)
        shifted_num = {e - low: c for e, c in a.num}
        assert _pgcd(shifted_num, dict(a.den)) == {0: 1}   # fully reduced
