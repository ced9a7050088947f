"""First-order systems y' = A y over Q(z)."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .core_exact import (
    Poly, PolyMatrix, RatFun, as_rat, det, inverse, matmul, poly_lcm,
    rational_roots, squarefree_decomposition,
)
from .errors import AlgebraError
from .series import TruncSeries, expand_ratfun


def ratfun_matrix(rows):
    return [[RatFun.coerce(e) for e in r] for r in rows]


class DiffSystem:
    """The system y' = A y; `T` is the monic lcm of the entry denominators."""

    __slots__ = ("A", "T")

    def __init__(self, A):
        A = tuple(tuple(RatFun.coerce(e) for e in row) for row in A)
        n = len(A)
        if n < 1 or any(len(r) != n for r in A):
            raise AlgebraError("system matrix must be square and non-empty")
        self.A = A
        T = Poly((1,))
        for row in A:
            for e in row:
                if not e.is_poly():
                    T = poly_lcm(T, e.den)
        self.T = T

    @property
    def n(self):
        return len(self.A)

    def __eq__(self, other):
        return isinstance(other, DiffSystem) and self.A == other.A

    def __hash__(self):
        return hash(self.A)

    def __repr__(self):
        return f"DiffSystem({[[str(e) for e in r] for r in self.A]})"

    def rows(self):
        return [list(r) for r in self.A]

    def trace(self):
        acc = RatFun.coerce(0)
        for i in range(self.n):
            acc = acc + self.A[i][i]
        return acc

    def cleared(self):
        """The polynomial matrix T*A."""
        return PolyMatrix.from_rows([[(e * self.T).as_poly() for e in r] for r in self.A])

    def pole_order(self, alpha):
        """Highest pole order at `alpha` among the entries of A."""
        return max(e.pole_order(alpha) for r in self.A for e in r)

    def is_ordinary(self, c):
        return bool(self.T(as_rat(c)))


@dataclass(frozen=True)
class SingularLocus:
    rational_points: tuple   # ((Fraction, multiplicity), ...)
    residual_factors: tuple  # squarefree monic Poly factors, repeated per multiplicity

    def points(self):
        return [p for p, _ in self.rational_points]


def singular_locus(S):
    """Factor z*T(z) into rational linear factors and a root-free residual.

    The residual is split only into squarefree parts; those parts are not
    guaranteed irreducible.
    """
    roots, residual = rational_roots(Poly.z() * S.T)
    factors = []
    if not residual.is_constant():
        for f, m in squarefree_decomposition(residual):
            factors.extend([f] * m)
    return SingularLocus(tuple(roots), tuple(factors))


def fundamental_series(S, c, K):
    """Fundamental matrix of series solutions at an ordinary point, Y(c) = I.

    Returns an n x n list of TruncSeries of order K; the columns solve the
    system exactly to order K - 1.
    """
    c = as_rat(c)
    if not S.is_ordinary(c):
        raise AlgebraError("expansion at singular point")
    n = S.n
    exp = [[expand_ratfun(e, c, max(K - 1, 0)).coeffs for e in row] for row in S.A]
    Y = [[[Fraction(int(i == j)) for j in range(n)] for i in range(n)]]
    for k in range(K):
        nxt = [[Fraction(0)] * n for _ in range(n)]
        for j in range(k + 1):
            Yk = Y[k - j]
            for i in range(n):
                Ai = exp[i]
                row = nxt[i]
                for l in range(n):
                    a = Ai[l][j]
                    if a:
                        yl = Yk[l]
                        for m in range(n):
                            if yl[m]:
                                row[m] += a * yl[m]
        inv = Fraction(1, k + 1)
        Y.append([[x * inv for x in r] for r in nxt])
    return [[TruncSeries(c, [Y[k][i][m] for k in range(K + 1)]) for m in range(n)]
            for i in range(n)]


def solution_residual(S, y):
    """T*y' - (T*A)*y for a vector of series; zero to order K-1 for a solution."""
    T = S.T
    TA = S.cleared()
    out = []
    for i in range(S.n):
        acc = y[i].derivative() * T
        for j in range(S.n):
            if TA[i, j]:
                acc = acc - y[j] * TA[i, j]
        out.append(acc)
    return out


def gauge_transform(S, P):
    """System for w = P^{-1} y:  A_P = P^{-1} A P - P^{-1} P'."""
    P = ratfun_matrix(P)
    if len(P) != S.n or any(len(r) != S.n for r in P):
        raise AlgebraError("gauge matrix has the wrong shape")
    if not det(P):
        raise AlgebraError("non-invertible gauge")
    Pinv = ratfun_matrix(inverse(P))
    dP = [[e.derivative() for e in r] for r in P]
    left = matmul(matmul(Pinv, S.rows()), P)
    right = matmul(Pinv, dP)
    return DiffSystem([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(left, right)])


def monomial_exponents(n, N):
    """Exponent tuples of degree N in n variables, graded lex with y1 > ... > yn."""
    out = []
    for combo in combinations_with_replacement(range(n), N):
        e = [0] * n
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def sym_power(S, N):
    """System satisfied by the degree-N monomials of a solution of S.

    Returns (system, monomials) where monomials[r] is the exponent tuple of
    the r-th coordinate of the new system.
    """
    if N < 1:
        raise AlgebraError("symmetric power needs N >= 1")
    n = S.n
    mons = monomial_exponents(n, N)
    index = {m: r for r, m in enumerate(mons)}
    zero = RatFun.coerce(0)
    rows = [[zero] * len(mons) for _ in mons]
    for r, m in enumerate(mons):
        for j in range(n):
            if not m[j]:
                continue
            for l in range(n):
                a = S.A[j][l]
                if not a:
                    continue
                t = list(m)
                t[j] -= 1
                t[l] += 1
                col = index[tuple(t)]
                rows[r][col] = rows[r][col] + a * m[j]
    return DiffSystem(rows), mons


def combination_derivative_rows(S, a, jmax):
    """Rows A^0..A^jmax with F^(j) = sum_i A^j_i f_i for F = sum_i a_i f_i.

    A^0 = a and A^{j+1} = (A^j)' + A^T A^j.
    """
    if len(a) != S.n:
        raise AlgebraError(f"coefficient vector has length {len(a)}, expected {S.n}")
    n = S.n
    row = [RatFun.coerce(x) for x in a]
    rows = [row]
    for _ in range(jmax):
        nxt = []
        for l in range(n):
            acc = row[l].derivative()
            for i in range(n):
                if row[i] and S.A[i][l]:
                    acc = acc + S.A[i][l] * row[i]
            nxt.append(acc)
        row = nxt
        rows.append(row)
    return rows


def wronskian_order(S, alpha):
    """Vanishing order at alpha of det of a fundamental matrix, via Trace(A).

    W' = Trace(A) W, so the order equals the residue of the trace at alpha
    whenever a fundamental matrix holomorphic at alpha exists.
    """
    alpha = as_rat(alpha)
    if not alpha:
        raise AlgebraError("wronskian_order needs a non-zero point")
    tr = S.trace()
    k = tr.pole_order(alpha)
    if k == 0:
        return 0
    if k >= 2:
        raise AlgebraError("non-apparent singularity structure")
    rest = tr.den.exact_div(Poly.linear(alpha))
    res = tr.num(alpha) / rest(alpha)
    if res.denominator != 1 or res < 0:
        raise AlgebraError("non-apparent singularity structure")
    return int(res)
