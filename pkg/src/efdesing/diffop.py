"""Scalar operators L = sum p_i(z) d^i and their local analysis."""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .core_exact import (
    Poly, RatFun, as_rat, det, nullspace, poly_gcd, poly_lcm, rank, rational_roots,
    row_echelon, squarefree_decomposition,
)
from .diffsys import combination_derivative_rows
from .errors import AlgebraError, DegenerateChoiceError, InsufficientOrderError
from .series import DEFAULT_ORDER, TruncSeries


class ScalarOperator:
    """L = p_0 + p_1 d + ... + p_r d^r with polynomial coefficients, p_r != 0."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [Poly.coerce(p) for p in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if not coeffs:
            raise AlgebraError("zero operator")
        self.coeffs = tuple(coeffs)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, ScalarOperator) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"ScalarOperator({[str(p) for p in self.coeffs]})"

    def __str__(self):
        parts = []
        for i, p in enumerate(self.coeffs):
            if not p:
                continue
            d = "" if i == 0 else ("*D" if i == 1 else f"*D^{i}")
            parts.append(f"({p}){d}")
        return " + ".join(parts)

    def normalized(self):
        """Divide out the polynomial content; integer coefficients, content 1.

        The sign is fixed by a positive leading coefficient of p_r.
        """
        g = Poly()
        for p in self.coeffs:
            g = poly_gcd(g, p)
        ps = [p.exact_div(g) for p in self.coeffs]
        den = 1
        for p in ps:
            for a in p.c:
                den = lcm(den, a.denominator)
        ints = [[int(a * den) for a in p.c] for p in ps]
        h = 0
        for row in ints:
            for v in row:
                h = gcd(h, v)
        if ps[-1].lc < 0:
            h = -h
        return ScalarOperator([Poly([Fraction(v, h) for v in row]) for row in ints])

    def apply(self, y):
        """L(y) for a TruncSeries y; the result has order y.order - r."""
        if self.order > y.order:
            raise AlgebraError("series too short for this operator")
        out = None
        d = y
        for i, p in enumerate(self.coeffs):
            if i:
                d = d.derivative()
            if p:
                t = d * p
                out = t if out is None else out + t
        k = y.order - self.order
        return out.truncate(k) if out is not None else TruncSeries(y.center, [0] * (k + 1))


def _cleared_minors(rows):
    """Polynomial vectors from a list of rational functions, common denominator cleared."""
    den = Poly((1,))
    for f in rows:
        den = poly_lcm(den, f.den)
    return [(f * den).as_poly() for f in rows]


def _deltas_from_rows(c_rows, a_rows):
    """Delta_j = (-1)^j det(M_j) for M = [C; A^0; ...; A^m]."""
    m = len(a_rows) - 1
    deltas = []
    for j in range(m + 1):
        M = [list(r) for r in c_rows] + [list(a_rows[t]) for t in range(m + 1) if t != j]
        d = det(M) if M else RatFun.coerce(1)
        d = RatFun.coerce(d)
        deltas.append(d if j % 2 == 0 else -d)
    return deltas


def _c_rows(C, n):
    if C is None:
        return []
    rows = C.C.to_rows() if hasattr(C, "C") else [list(r) for r in C]
    for r in rows:
        if len(r) != n:
            raise AlgebraError("relation row has the wrong length")
    return [[RatFun.coerce(e) for e in r] for r in rows]


def _achieved_order(c_rows, a_rows):
    base = rank(c_rows) if c_rows else 0
    for j in range(len(a_rows)):
        if rank(c_rows + a_rows[:j + 1]) < base + j + 1:
            return j
    return len(a_rows)


def _dependency_operator(c_rows, a_rows, k):
    """Operator of order k from the Q(z)-dependency of A^k on C and A^0..A^(k-1)."""
    rows = c_rows + a_rows[:k + 1]
    n = len(rows[0])
    cols = [[rows[r][i] for r in range(len(rows))] for i in range(n)]
    v = nullspace(cols, len(rows))[0]
    return ScalarOperator(_cleared_minors([RatFun.coerce(x) for x in v[len(c_rows):]])).normalized()


def minimal_combination_operator(S, C, a, strict=False):
    """Minimal operator of F = sum a_i f_i relative to the relation basis C.

    Builds the (n+1) x n matrix of relation rows and derivative rows and
    returns (operator, deltas), both content-normalized.  When the first m
    derivative rows are dependent modulo C the combination has a smaller
    order k; the order-k operator read off the dependency is returned, or
    DegenerateChoiceError is raised if `strict`.
    """
    n = S.n
    c_rows = _c_rows(C, n)
    m = n - len(c_rows)
    a_rows = combination_derivative_rows(S, a, m)
    top = c_rows + a_rows[:m]
    if rank(top) < n:
        order = _achieved_order(c_rows, a_rows[:m])
        if strict or order == 0:
            raise DegenerateChoiceError(
                f"degenerate coefficient choice (achieved order {order})", order)
        op = _dependency_operator(c_rows, a_rows, order)
        return op, list(op.coeffs)
    deltas = _deltas_from_rows(c_rows, a_rows)
    op = ScalarOperator(_cleared_minors(deltas)).normalized()
    return op, list(op.coeffs)


def _jet_poly(jets, xi):
    """sum_t jets[t] (z - xi)^t."""
    p = Poly()
    lin = Poly.linear(xi)
    for t in reversed(range(len(jets))):
        p = p * lin + jets[t]
    return p


def _value_sequence():
    yield Fraction(1)
    k = 1
    while True:
        yield Fraction(-k)
        k += 1
        yield Fraction(k)


def construct_witness_coefficients(S, C, xi, alpha):
    """Polynomials A_i with A_i(xi) = alpha_i and Delta_m(xi) != 0.

    Jets of the A_i at xi are raised one derivative order at a time; at each
    order the first coordinate and value (0, 1, -1, 2, ...) making the new
    derivative row independent of the previous ones is taken.
    """
    xi = as_rat(xi)
    n = S.n
    if len(alpha) != n:
        raise AlgebraError("alpha has the wrong length")
    if not xi or not S.T(xi):
        raise AlgebraError("witness point must satisfy xi*T(xi) != 0")
    alpha = [as_rat(x) for x in alpha]
    c_rows = _c_rows(C, n)
    c_vals = [[e(xi) for e in r] for r in c_rows]
    base = rank(c_vals) if c_vals else 0
    if rank(c_vals + [alpha]) != base + 1:
        raise AlgebraError("relation is explained by specialization")
    m = n - len(c_rows)
    jets = [[x] for x in alpha]

    def rows_at_xi(jmax):
        polys = [_jet_poly(j, xi) for j in jets]
        rows = combination_derivative_rows(S, polys, jmax)
        return [[e(xi) for e in r] for r in rows]

    for j in range(1, m):
        for i in range(n):
            jets[i].append(Fraction(0))
        target = base + j + 1
        if rank(c_vals + rows_at_xi(j)) == target:
            continue
        found = False
        for i in range(n):
            values = _value_sequence()
            for _ in range(4):
                jets[i][j] = next(values)
                if rank(c_vals + rows_at_xi(j)) == target:
                    found = True
                    break
            if found:
                break
            jets[i][j] = Fraction(0)
        if not found:
            raise AlgebraError("could not complete the witness coefficients")

    polys = [_jet_poly(j, xi) for j in jets]
    _, deltas = minimal_combination_operator(S, C, polys, strict=True)
    if not deltas[-1](xi):
        raise AlgebraError("witness construction failed its own check")
    return polys


def compose_linear(L, xi):
    """The operator y -> L((z - xi) y)."""
    xi = as_rat(xi)
    lin = Poly.linear(xi)
    p = list(L.coeffs) + [Poly()]
    return ScalarOperator([lin * p[i] + p[i + 1] * (i + 1) for i in range(L.order + 1)])


@dataclass(frozen=True)
class FrobeniusData:
    point: Fraction
    exponents: tuple
    log_involved: bool
    holomorphic_basis_count: int
    min_valuation: object   # int or None
    indicial: Poly
    holomorphic_basis: tuple = ()


def _falling(x, i):
    out = Fraction(1)
    for t in range(i):
        out *= x - t
    return out


def _falling_poly(i):
    p = Poly((1,))
    for t in range(i):
        p = p * Poly((-t, 1))
    return p


def _local_coefficients(L, xi):
    """p_i(xi + t) as polynomials in t, and the weight w = min(ord_t p_i - i)."""
    ps = [p.shift(xi) for p in L.coeffs]
    w = min(next(k for k, a in enumerate(p.c) if a) - i for i, p in enumerate(ps) if p)
    return ps, w


def _q(ps, w, d, x):
    """Q_d(x) = sum_i [t^(i+w+d)] p_i * (x)_i; Q_0 is the indicial polynomial."""
    acc = Fraction(0)
    for i, p in enumerate(ps):
        c = p[i + w + d]
        if c:
            acc += c * _falling(x, i)
    return acc


def _exponent_class_space(ps, w, s, span):
    """Solutions t^s sum_{k<=span} y_k t^k of the equations for t^(s+w+N), N <= span."""
    rows = []
    for N in range(span + 1):
        row = [Fraction(0)] * (span + 1)
        for d in range(N + 1):
            row[N - d] = _q(ps, w, d, s + N - d)
        rows.append(row)
    return nullspace(rows, span + 1)


def _extend(ps, w, s, head, length):
    y = list(head)
    for N in range(len(y), length):
        acc = Fraction(0)
        for d in range(1, N + 1):
            if y[N - d]:
                acc += _q(ps, w, d, s + N - d) * y[N - d]
        y.append(-acc / _q(ps, w, 0, s + N))
    return y


def frobenius_analyze(L, xi, K=DEFAULT_ORDER):
    """Indicial exponents and holomorphic local solutions of L at xi.

    Exponents are grouped into classes modulo the integers.  In each class the
    solutions of the form t^lo * (power series) are found by exact linear
    algebra up to the largest exponent; a class with fewer solutions than its
    root multiplicity forces logarithms.  Irrational exponents are reported
    only through the indicial polynomial.
    """
    xi = as_rat(xi)
    ps, w = _local_coefficients(L, xi)
    indicial = Poly()
    for i, p in enumerate(ps):
        if p[i + w]:
            indicial = indicial + _falling_poly(i) * p[i + w]
    roots, residual = rational_roots(indicial)
    exponents = tuple(r for r, _ in roots)
    log_involved = any(m > 1 for _, m in squarefree_decomposition(residual)) \
        if not residual.is_constant() else False

    classes = {}
    for r, mult in roots:
        classes.setdefault(r - (r.numerator // r.denominator), []).append((r, mult))
    basis = []
    for frac_part in sorted(classes):
        members = classes[frac_part]
        lo = min(r for r, _ in members)
        hi = max(r for r, _ in members)
        span = int(hi - lo)
        if span > K:
            raise InsufficientOrderError(
                f"insufficient order: exponents {lo} and {hi} need K >= {span}", (lo, hi))
        space = _exponent_class_space(ps, w, lo, span)
        if len(space) < sum(m for _, m in members):
            log_involved = True
        if frac_part or hi < 0:
            continue
        shift = int(lo)
        if shift < 0:
            # holomorphic members have no t^k terms with k < 0
            cons = [[v[k] for v in space] for k in range(-shift)]
            combos = nullspace(cons, len(space)) if space else []
            space = [[sum((c * v[k] for c, v in zip(comb, space)), Fraction(0))
                      for k in range(span + 1)] for comb in combos]
        for v in space:
            ext = _extend(ps, w, lo, v, K + 1 - shift)
            basis.append([ext[t - shift] if t >= shift else Fraction(0) for t in range(K + 1)])

    min_val = None
    if basis:
        rref, pivots = row_echelon(basis)
        min_val = pivots[0]
    series = tuple(TruncSeries(xi, v) for v in basis)
    return FrobeniusData(xi, exponents, log_involved, len(basis), min_val, indicial, series)


def is_apparent(L, xi, K=DEFAULT_ORDER):
    """(apparent, all_vanish) for L at xi."""
    data = frobenius_analyze(L, xi, K)
    apparent = data.holomorphic_basis_count == L.order and not data.log_involved
    all_vanish = apparent and (data.min_valuation is None or data.min_valuation >= 1)
    return apparent, all_vanish
