"""Removal of the non-zero singularities of a system with E-function solutions.

Each step takes a zero alpha of the Wronskian, reads a relation vanishing at
alpha off the leading pole coefficient of A, mixes the unknowns by a constant
matrix M so that the first one vanishes at alpha, and divides that one by
(z - alpha).  The accumulated matrix B is polynomial and f = B e throughout.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .core_exact import Poly, PolyMatrix, RatFun, as_rat, inverse, rank
from .diffsys import (
    DiffSystem, gauge_transform, singular_locus, solution_residual, wronskian_order,
)
from .efunc import divide_by_linear, linear_combination
from .errors import AlgebraError
from .relations import find_polynomial_relations
from .series import DEFAULT_ORDER

log = logging.getLogger(__name__)

DEFAULT_DEGREE = 8


@dataclass(frozen=True)
class DesingStep:
    alpha: Fraction
    k: int
    M: tuple            # constant invertible matrix, rows of Fractions
    D_index: int
    before: DiffSystem
    after: DiffSystem
    wronskian_before: int
    wronskian_after: int


@dataclass
class DesingResult:
    B: PolyMatrix
    final_system: DiffSystem
    e_functions: list
    steps: list = field(default_factory=list)
    order: int = DEFAULT_ORDER
    degree: int = DEFAULT_DEGREE

    def final_z_power(self):
        return self.final_system.T.degree


def leading_pole_matrix(S, alpha, k):
    """((z - alpha)^k A)(alpha)."""
    lin = RatFun.coerce(Poly.linear(alpha))
    scale = lin ** k
    return [[(e * scale)(alpha) for e in row] for row in S.A]


def _complete_basis(first):
    n = len(first)
    rows = [list(first)]
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        if rank(rows + [e]) > len(rows):
            rows.append(e)
        if len(rows) == n:
            break
    return rows


def remove_singularity_step(S, f, alpha, K_check=None):
    """One reduction at alpha.  Returns (step, new system, new function vector)."""
    alpha = as_rat(alpha)
    if not alpha:
        raise AlgebraError("cannot remove the singularity at 0")
    if len(f) != S.n:
        raise AlgebraError("function vector has the wrong length")
    k = S.pole_order(alpha)
    if k < 1:
        raise AlgebraError(f"system has no pole at {alpha}")
    w_before = wronskian_order(S, alpha)
    if w_before < 1:
        raise AlgebraError("non-apparent singularity structure")
    lead = leading_pole_matrix(S, alpha, k)
    row = next((r for r in lead if any(r)), None)
    if row is None:
        raise AlgebraError("pole order overcounted")
    M = _complete_basis(row)
    Minv = inverse(M)
    n = S.n
    lin = Poly.linear(alpha)
    # f = Minv D f_new with D = diag(z - alpha, 1, ..., 1)
    P = [[RatFun.coerce(Minv[i][j] * lin if j == 0 else Minv[i][j]) for j in range(n)]
         for i in range(n)]
    new_S = gauge_transform(S, P)
    w_after = wronskian_order(new_S, alpha)
    if w_after != w_before - 1:
        raise RuntimeError(f"Wronskian order went {w_before} -> {w_after} at {alpha}")
    head = divide_by_linear(linear_combination(row, f), alpha, K_check)
    new_f = [head] + [linear_combination(Mrow, f) if sum(1 for x in Mrow if x) > 1
                      else f[next(j for j, x in enumerate(Mrow) if x)]
                      for Mrow in M[1:]]
    step = DesingStep(alpha, k, tuple(tuple(r) for r in M), 0, S, new_S, w_before, w_after)
    log.debug("removed one Wronskian zero at %s (pole order %d)", alpha, k)
    return step, new_S, new_f


def _step_matrix(step):
    Minv = inverse([list(r) for r in step.M])
    lin = Poly.linear(step.alpha)
    n = len(Minv)
    return PolyMatrix.from_rows([[Minv[i][j] * lin if j == 0 else Poly((Minv[i][j],))
                                  for j in range(n)] for i in range(n)])


def point_order(alpha):
    """Processing order of singular points: |num| + den, then positive first."""
    return (abs(alpha.numerator) + alpha.denominator, alpha < 0, alpha)


def series_mismatch(f, B, e, order):
    """Series of f - B e at 0; all zero when the factorization holds."""
    fs = [g.series(order) for g in f]
    es = [g.series(order) for g in e]
    out = []
    for i in range(len(f)):
        acc = fs[i]
        for j in range(len(e)):
            if B[i, j]:
                acc = acc - es[j] * B[i, j]
        out.append(acc)
    return out


def check_solution(S, f, order):
    """Raise unless the series of f solve S to order - 1."""
    ys = [g.series(order) for g in f]
    if any(not r.is_zero() for r in solution_residual(S, ys)):
        raise AlgebraError("functions do not solve the system")


def desingularize(S, f, order=DEFAULT_ORDER, degree=DEFAULT_DEGREE, verify=True):
    """Strip every non-zero singularity from S by polynomial gauge steps."""
    if len(f) != S.n:
        raise AlgebraError("function vector has the wrong length")
    n = S.n
    check_solution(S, f, order)
    degree = min(degree, (order - 10) // n - 1)
    if degree >= 0:
        rel = find_polynomial_relations([g.series(order) for g in f], degree)
        if rel.C.rows:
            raise AlgebraError("hypothesis violated: relations found")
    locus = singular_locus(S)
    if locus.residual_factors:
        raise AlgebraError("non-rational singularity unsupported")
    points = sorted((p for p in locus.points() if p), key=point_order)

    B = PolyMatrix.identity(n)
    steps = []
    cur_S, cur_f = S, list(f)
    for alpha in points:
        while cur_S.pole_order(alpha):
            step, cur_S, cur_f = remove_singularity_step(cur_S, cur_f, alpha)
            B = B * _step_matrix(step)
            steps.append(step)
            if verify and any(not s.is_zero() for s in series_mismatch(f, B, cur_f, order)):
                raise RuntimeError("f = B e failed after a step")
    T = cur_S.T
    if T != Poly.monomial(T.degree):
        raise RuntimeError(f"final denominator {T} is not a power of z")
    return DesingResult(B, cur_S, cur_f, steps, order, degree)
