from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from efdesing.core_exact import Poly, RatFun
from efdesing.errors import AlgebraError
from efdesing.series import TruncSeries, expand_ratfun, series_arith

from oracles import Z, taylor, to_sympy

z = Poly.z()
F = Fraction


def test_cauchy_product_cancels():
    a = TruncSeries(0, [1, 1, F(1, 2)])
    b = TruncSeries(0, [1, -1, F(1, 2)])
    assert series_arith(a, b, "mul").coeffs == (1, 0, 0)


def test_division_by_self_and_valuation_shift():
    a = TruncSeries(0, [2, 3, -1, 5])
    assert (a / a).coeffs == (1, 0, 0, 0)
    num = TruncSeries(1, [0, 1, 1, 0])
    den = TruncSeries(1, [0, 1, 0, 0])
    q = series_arith(num, den, "div")
    assert q.coeffs == (1, 1, 0)
    assert q.order == 2


def test_indeterminate_division():
    with pytest.raises(AlgebraError, match="indeterminate division"):
        TruncSeries(0, [1, 2]) / TruncSeries(0, [0, 0])
    with pytest.raises(AlgebraError, match="indeterminate division"):
        TruncSeries(0, [0, 1, 0]) / TruncSeries(0, [0, 0, 1])


def test_expand_ratfun_examples():
    assert expand_ratfun(RatFun(Poly((1,)), 1 - z), 0, 3).coeffs == (1, 1, 1, 1)
    assert expand_ratfun(z, 1, 2).coeffs == (1, 1, 0)
    f = RatFun(z, z - 1)
    assert list(expand_ratfun(f, 2, 2).coeffs) == taylor(Z / (Z - 1), 2, 2) == [2, -1, 1]


def test_expand_at_pole():
    with pytest.raises(AlgebraError, match="pole at expansion point"):
        expand_ratfun(RatFun(z, z - 1), 1, 4)


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4),
       st.lists(st.integers(-4, 4), min_size=1, max_size=3),
       st.fractions(min_value=-3, max_value=3, max_denominator=3))
@settings(max_examples=40, deadline=None)
def test_expand_ratfun_matches_sympy(num, den, c):
    p, q = Poly(num), Poly(den)
    if not q or not q(c):
        return
    f = RatFun(p, q)
    assert list(expand_ratfun(f, c, 6).coeffs) == taylor(to_sympy(f), sp.Rational(c.numerator, c.denominator), 6)


@given(st.lists(st.integers(-5, 5), min_size=4, max_size=8),
       st.lists(st.integers(-5, 5), min_size=4, max_size=8))
def test_series_field_laws(a, b):
    s, t = TruncSeries(0, a), TruncSeries(0, b)
    assert s * t == t * s
    assert (s + t) - t == s.truncate(min(s.order, t.order))
    if t[0]:
        assert ((s / t) * t) == s.truncate(min(s.order, t.order))


def test_derivative_and_poly_roundtrip():
    s = TruncSeries.from_poly(z**3 - z, 2, 5)
    assert s.evaluate_poly() == z**3 - z
    assert s.derivative().evaluate_poly() == 3 * z**2 - 1
    assert s.derivative().order == 4


def test_center_mismatch():
    with pytest.raises(AlgebraError):
        TruncSeries(0, [1]) + TruncSeries(1, [1])
