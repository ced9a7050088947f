from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from efdesing.core_exact import Poly, RatFun
from efdesing.diffsys import (
    DiffSystem, combination_derivative_rows, fundamental_series, gauge_transform,
    monomial_exponents, singular_locus, solution_residual, sym_power, wronskian_order,
)
from efdesing.errors import AlgebraError
from efdesing.series import TruncSeries, expand_ratfun

from corpus import R, cases
from oracles import Z, taylor

z = Poly.z()


def diag12():
    return DiffSystem([[R(1), R(0)], [R(0), R(2)]])


def series_det(Y):
    n = len(Y)
    if n == 1:
        return Y[0][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in Y[1:]]
        term = Y[0][j] * series_det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


# -- singular locus ---------------------------------------------------------

def test_singular_locus_examples():
    loc = singular_locus(DiffSystem([[R(1)]]))
    assert loc.rational_points == ((0, 1),) and not loc.residual_factors
    loc = singular_locus(DiffSystem([[R(z, z - 1)]]))
    assert dict(loc.rational_points) == {0: 1, 1: 1}
    loc = singular_locus(DiffSystem([[R(1, z**2 - 2)]]))
    assert dict(loc.rational_points) == {0: 1}
    assert loc.residual_factors == (z**2 - 2,)


def test_square_system_required():
    with pytest.raises(AlgebraError, match="square"):
        DiffSystem([[R(1), R(0)]])


# -- fundamental series -----------------------------------------------------

def test_fundamental_series_exponentials():
    Y = fundamental_series(diag12(), 0, 3)
    assert list(Y[0][0].coeffs) == taylor(sp.exp(Z), 0, 3)
    assert list(Y[1][1].coeffs) == taylor(sp.exp(2 * Z), 0, 3)
    assert Y[0][1].is_zero() and Y[1][0].is_zero()


def test_fundamental_series_trivial():
    Y = fundamental_series(DiffSystem([[R(0)]]), 0, 5)
    assert Y[0][0].coeffs == (1, 0, 0, 0, 0, 0)


def test_fundamental_series_rotation():
    Y = fundamental_series(DiffSystem([[R(0), R(1)], [R(-1), R(0)]]), 0, 4)
    cos, sin = taylor(sp.cos(Z), 0, 4), taylor(sp.sin(Z), 0, 4)
    assert list(Y[0][0].coeffs) == cos and list(Y[1][0].coeffs) == [-c for c in sin]
    assert list(Y[0][1].coeffs) == sin and list(Y[1][1].coeffs) == cos


def test_fundamental_series_rejects_singular_point():
    with pytest.raises(AlgebraError, match="expansion at singular point"):
        fundamental_series(DiffSystem([[R(z, z - 1)]]), 1, 5)


@pytest.mark.parametrize("case", cases(), ids=lambda c: c[0])
def test_fundamental_columns_solve_system(case):
    _, S, _, _ = case
    c = Fraction(1, 3)
    Y = fundamental_series(S, c, 20)
    for j in range(S.n):
        col = [Y[i][j] for i in range(S.n)]
        assert all(r.is_zero() for r in solution_residual(S, col))


# -- gauge ------------------------------------------------------------------

def test_gauge_examples():
    S = diag12()
    assert gauge_transform(S, [[R(1), R(0)], [R(0), R(1)]]) == S
    assert gauge_transform(DiffSystem([[R(1)]]), [[R(z)]]).A[0][0] == R(z - 1, z)
    assert gauge_transform(DiffSystem([[R(z, z - 1)]]), [[R(z - 1)]]).A[0][0] == R(1)
    with pytest.raises(AlgebraError, match="non-invertible gauge"):
        gauge_transform(S, [[R(1), R(z)], [R(1), R(z)]])


def test_gauge_composition():
    S = diag12()
    P = [[R(z), R(1)], [R(0), R(1)]]
    Q = [[R(1), R(0)], [R(z - 1), R(1)]]
    PQ = [[sum((P[i][k] * Q[k][j] for k in range(2)), R(0)) for j in range(2)] for i in range(2)]
    assert gauge_transform(gauge_transform(S, P), Q) == gauge_transform(S, PQ)


# -- symmetric powers -------------------------------------------------------

def test_monomial_order():
    assert monomial_exponents(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert monomial_exponents(3, 1) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_sym_power_examples():
    S = diag12()
    same, mons = sym_power(S, 1)
    assert same == S and mons == [(1, 0), (0, 1)]
    T, mons = sym_power(S, 2)
    assert mons == [(2, 0), (1, 1), (0, 2)]
    assert T == DiffSystem([[R(2), R(0), R(0)], [R(0), R(3), R(0)], [R(0), R(0), R(4)]])
    N, _ = sym_power(DiffSystem([[R(0), R(1)], [R(0), R(0)]]), 2)
    assert N == DiffSystem([[R(0), R(2), R(0)], [R(0), R(0), R(1)], [R(0), R(0), R(0)]])


small_entries = st.sampled_from([R(0), R(1), R(-1), R(2), R(z), R(1, z - 1), R(z, z + 2)])


@given(st.integers(1, 3), st.integers(1, 3), st.data())
@settings(max_examples=15, deadline=None)
def test_sym_power_solutions(n, N, data):
    S = DiffSystem([[data.draw(small_entries) for _ in range(n)] for _ in range(n)])
    P, mons = sym_power(S, N)
    Y = fundamental_series(S, Fraction(1, 2), 15)
    y = [Y[i][0] for i in range(n)]
    vec = []
    for m in mons:
        acc = TruncSeries.constant(1, Fraction(1, 2), 15)
        for i, e in enumerate(m):
            for _ in range(e):
                acc = acc * y[i]
        vec.append(acc)
    assert all(r.is_zero() for r in solution_residual(P, vec))


# -- derivative rows and Wronskians ----------------------------------------

def test_combination_rows_examples():
    rows = combination_derivative_rows(diag12(), [1, 1], 2)
    assert rows[1] == [R(1), R(2)] and rows[2] == [R(1), R(4)]
    assert all(not x for r in combination_derivative_rows(diag12(), [0, 0], 3) for x in r)
    rows = combination_derivative_rows(DiffSystem([[R(0), R(1)], [R(0), R(0)]]), [1, 0], 2)
    assert rows[1] == [R(0), R(1)] and rows[2] == [R(0), R(0)]
    with pytest.raises(AlgebraError):
        combination_derivative_rows(diag12(), [1], 1)


@pytest.mark.parametrize("case", cases(), ids=lambda c: c[0])
def test_derivative_rows_track_combination(case):
    _, S, f, _ = case
    a = [Poly((i + 1,)) + z * i for i in range(S.n)]
    rows = combination_derivative_rows(S, a, 3)
    fs = [g.series(30) for g in f]
    # F^(j) computed by differentiating series directly
    F = sum((fs[i] * a[i] for i in range(1, S.n)), fs[0] * a[0])
    for j, row in enumerate(rows):
        want = F
        for _ in range(j):
            want = want.derivative()
        got = None
        for i in range(S.n):
            if row[i]:
                # row j has denominator dividing T^j; clear with T^3
                term = fs[i] * (row[i] * R(S.T**3)).as_poly()
                got = term if got is None else got + term
        Tj = TruncSeries.from_poly(S.T**3, 0, want.order)
        lhs = want * Tj
        if got is None:
            assert lhs.is_zero()
        else:
            assert (lhs - got.truncate(lhs.order)).is_zero()


def test_wronskian_order_examples():
    assert wronskian_order(DiffSystem([[R(z, z - 1)]]), 1) == 1
    assert wronskian_order(diag12(), 5) == 0
    # system solved by ((z-2) e^z, e^{2z}), i.e. the functions diag(z-2, 1) y
    lifted = gauge_transform(diag12(), [[R(1, z - 2), R(0)], [R(0), R(1)]])
    assert wronskian_order(lifted, 2) == 1


def test_wronskian_order_rejections():
    with pytest.raises(AlgebraError, match="non-apparent"):
        wronskian_order(DiffSystem([[R(1, (z - 1)**2)]]), 1)
    with pytest.raises(AlgebraError, match="non-apparent"):
        wronskian_order(DiffSystem([[R(Fraction(1, 2), z - 1)]]), 1)
    with pytest.raises(AlgebraError, match="non-apparent"):
        wronskian_order(DiffSystem([[R(-1, z - 1)]]), 1)


@pytest.mark.parametrize("case", cases(), ids=lambda c: c[0])
def test_liouville_identity(case):
    _, S, _, _ = case
    c = Fraction(1, 3)
    W = series_det(fundamental_series(S, c, 50))
    tr = expand_ratfun(S.trace(), c, 49)
    assert (W.derivative() - (tr * W).truncate(49)).is_zero()
