import math
import threading
from fractions import Fraction
from math import comb, factorial

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from efdesing.core_exact import Poly
from efdesing.efunc import (
    EFunction, bessel_type_function, certified_value, cos_function, derivative, divide_by_linear,
    exp_function, exceeds_tail, growth_report, linear_combination, poly_combination,
    poly_times_exp, product, recurrence_function, scale_argument, sin_function,
)
from efdesing.errors import AlgebraError

from oracles import Z, egf_coefficients

z = Poly.z()


def test_exp_and_linear_factor_streams():
    assert exp_function().coefficients(5) == [1] * 6
    assert poly_times_exp(z - 1).coefficients(5) == [-1, 0, 1, 2, 3, 4]


def test_bessel_stream_binomial_values():
    f = bessel_type_function()
    want = []
    for k in range(12):
        want.append((-1) ** (k // 2) * comb(k, k // 2) if k % 2 == 0 else 0)
    assert f.coefficients(11) == want


@pytest.mark.parametrize("expr,make", [
    (sp.cos(3 * Z), lambda: cos_function(3)),
    (sp.sin(Z / 2), lambda: sin_function(Fraction(1, 2))),
    ((Z**2 - 2) * sp.exp(-Z), lambda: poly_times_exp(z**2 - 2, -1)),
    (sp.exp(Z) * sp.cos(Z), lambda: product(exp_function(), cos_function())),
    (3 * sp.exp(2 * Z) - sp.exp(Z), lambda: linear_combination([3, -1], [exp_function(2), exp_function()])),
])
def test_streams_match_sympy(expr, make):
    assert make().coefficients(12) == egf_coefficients(expr, 12)


def test_recurrence_stream():
    # a[k+1] = 2 a[k] is e^{2z}
    f = recurrence_function([Poly((2,))], [1])
    assert f.coefficients(8) == [2**k for k in range(9)]


def test_scale_argument():
    assert scale_argument(exp_function(), 2).coefficients(6) == [2**k for k in range(7)]
    f = poly_times_exp(z - 1)
    assert scale_argument(f, 1).coefficients(10) == f.coefficients(10)
    g = scale_argument(f, 2)
    assert g.coefficients(6) == [2**k * (k - 1) for k in range(7)]
    value, log_tail = certified_value(g, Fraction(1, 2), 40)
    assert not exceeds_tail(value, log_tail)
    with pytest.raises(AlgebraError):
        scale_argument(f, 0)


def test_product_examples():
    assert product(exp_function(), exp_function()).coefficients(8) == [2**k for k in range(9)]
    one = EFunction("1", lambda k, prev: Fraction(int(k == 0)))
    f = bessel_type_function()
    assert product(f, one).coefficients(10) == f.coefficients(10)


def test_derivative_and_poly_combination():
    f = poly_times_exp(z**2, 1)
    assert derivative(f).coefficients(8) == egf_coefficients(sp.diff(Z**2 * sp.exp(Z), Z), 8)
    g = poly_combination([z, Poly((1,))], [exp_function(2), cos_function()])
    assert g.coefficients(10) == egf_coefficients(Z * sp.exp(2 * Z) + sp.cos(Z), 10)


def test_divide_by_linear_examples():
    g = divide_by_linear(poly_times_exp(z - 1), 1)
    assert g.coefficients(200) == [1] * 201
    assert divide_by_linear(poly_times_exp(z), 0).coefficients(10) == [1] * 11
    with pytest.raises(AlgebraError, match="not numerically zero"):
        divide_by_linear(exp_function(), 1)
    with pytest.raises(AlgebraError, match="not numerically zero"):
        divide_by_linear(exp_function(), 0)


def test_division_partial_sum_law():
    xi = Fraction(-3, 2)
    f = poly_times_exp((z - xi) * (z + 4), 2)
    g = divide_by_linear(f, xi)
    a, b = f.coefficients(120), g.coefficients(120)
    for n in range(121):
        s = -sum(a[k] * xi ** (k - n - 1) / factorial(k) for k in range(n + 1))
        assert b[n] / factorial(n) == s
    assert g.coefficients(30) == egf_coefficients((Z + 4) * sp.exp(2 * Z), 30)


@given(st.fractions(min_value=-3, max_value=3, max_denominator=3).filter(bool),
       st.integers(-2, 2))
@settings(max_examples=15, deadline=None)
def test_division_inverts_multiplication(xi, c):
    base = exp_function(c)
    f = poly_combination([Poly.linear(xi)], [base])
    assert divide_by_linear(f, xi).coefficients(40) == base.coefficients(40)


def test_growth_reports():
    g = growth_report(exp_function(), 60)
    assert math.isclose(g.C, 1) and math.isclose(g.B, 1) and g.hmax == 0
    assert not g.superexponential
    g = growth_report(poly_times_exp(z - 1), 200)
    assert 1 <= g.C <= 1.05
    fact = EFunction("k!", lambda k, prev: Fraction(factorial(k)))
    small, big = growth_report(fact, 40), growth_report(fact, 160)
    assert big.C > small.C
    assert big.superexponential
    with pytest.raises(AlgebraError):
        growth_report(exp_function(), 5)


@pytest.mark.parametrize("make", [lambda: poly_times_exp(z - 1), bessel_type_function,
                                  lambda: cos_function(2)])
def test_growth_bound_covers_window(make):
    f = make()
    g = growth_report(f, 100)
    for k, a in enumerate(f.coefficients(100)):
        if a:
            assert math.log(abs(a)) <= g.bound(k) + 1e-9


def test_concurrent_coefficient_access():
    f = bessel_type_function()
    results = []

    def work():
        results.append(f.coefficients(150))

    threads = [threading.Thread(target=work) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)
    assert len(results[0]) == 151
