from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from tapkit.errors import DivisionByZero, NonInvertibleResidue
from tapkit.scalars import (AlgebraicExt, ComplexFloat, FloatField, GaussianRational, field_invert,
                            scalar_from_json, scalar_to_json)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussianRational, small, small)
floats = st.floats(min_value=-50, max_value=50, allow_nan=False)
cfloats = st.builds(ComplexFloat, floats, floats)
MOD = [2, 0, 1]                                    # w^2 + 2: irreducible over Q(i)
alg = st.lists(small, min_size=1, max_size=2).map(lambda cs: AlgebraicExt(cs, MOD))


def test_invert_examples():
    assert field_invert(GaussianRational(2)) == GaussianRational(Fraction(1, 2))
    w = AlgebraicExt.generator([1, 0, 1])
    assert field_invert(w) == -w
    with pytest.raises(DivisionByZero):
        field_invert(ComplexFloat(0))
    with pytest.raises(DivisionByZero):
        field_invert(GaussianRational(0))


def test_reducible_modulus_fails_lazily():
    # w^2 - 1 = (w - 1)(w + 1): the class of w - 1 has no inverse.
    x = AlgebraicExt([-1, 1], [-1, 0, 1])
    with pytest.raises(NonInvertibleResidue):
        x.inverse()


@given(gauss, gauss, gauss)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == 1


@given(alg, alg, alg)
@settings(max_examples=60)
def test_algebraic_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    if a:
        assert a * a.inverse() == AlgebraicExt([1], MOD)


@given(cfloats, cfloats, cfloats)
def test_float_field_axioms_within_tolerance(a, b, c):
    F = FloatField(1e-9)
    assert F.close((a + b) + c, a + (b + c))
    assert F.close(a * (b + c), a * b + a * c) or abs(complex(a * b)) > 1e3
    assume(abs(complex(a)) > 1e-3)
    assert F.close(a * a.inverse(), 1)


@given(small, small, small, small)
def test_linear_modulus_matches_evaluation(c, p0, p1, q0):
    """Q(i)[w]/(w - c) is evaluation at c."""
    mod = [-c, 1]
    x = AlgebraicExt([p0, p1], mod)
    y = AlgebraicExt([q0, 1], mod)
    ex = GaussianRational(p0 + p1 * c)
    ey = GaussianRational(q0 + c)
    value = lambda e: e.coeffs[0] if e.coeffs else GaussianRational(0)
    assert value(x * y) == ex * ey
    assert value(x + y) == ex + ey
    if ex:
        assert value(x.inverse()) == ex.inverse()


def test_float_closeness_rule():
    F = FloatField(1e-9)
    assert F.close(ComplexFloat(1e6), ComplexFloat(1e6 + 1e-4))
    assert not F.close(ComplexFloat(1.0), ComplexFloat(1.0 + 1e-6))


@pytest.mark.parametrize("x", [GaussianRational(Fraction(3, 4), -2), ComplexFloat(1.25, 0.0),
                               AlgebraicExt([1, Fraction(2, 3)], MOD)])
def test_json_literals_round_trip(x):
    assert scalar_from_json(scalar_to_json(x)) == x


def test_json_literal_shapes():
    assert scalar_to_json(GaussianRational(Fraction(1, 2), 3)) == {"re": "1/2", "im": "3"}
    assert scalar_to_json(ComplexFloat(1.25, 0.0)) == {"re": 1.25, "im": 0.0}
    assert set(scalar_to_json(AlgebraicExt([1], MOD))) == {"poly", "modulus"}
