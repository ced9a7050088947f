"""Polynomial linear relations among function vectors and their saturation."""

from dataclasses import dataclass
from fractions import Fraction

from .core_exact import (
    Poly, PolyMatrix, RatFun, as_rat, eval_matrix, hermite_rows, nullspace, rank,
    smith_form_with_inverses,
)
from .errors import AlgebraError

DEFAULT_GUARD = 10


@dataclass(frozen=True)
class RelationBasis:
    """Rows C_i with sum_j C_ij(z) f_j(z) = 0; `rank_deficit` rows of length n."""

    n: int
    C: PolyMatrix

    @property
    def rank_deficit(self):
        return self.C.rows

    @classmethod
    def from_rows(cls, rows, n=None):
        rows = [[Poly.coerce(e) for e in r] for r in rows]
        if n is None:
            if not rows:
                raise ValueError("n is required for an empty basis")
            n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise AlgebraError("relation rows must all have length n")
        return cls(n, PolyMatrix(len(rows), n, [e for r in rows for e in r]))

    def rows(self):
        return self.C.to_rows()


def _ratfun_rank(rows):
    if not rows:
        return 0
    return rank([[RatFun.coerce(e) for e in r] for r in rows])


def find_polynomial_relations(F, d, guard=DEFAULT_GUARD):
    """Relations sum C_i(z) F_i(z) = 0 with deg C_i <= d, verified to truncation.

    Rows are collected degree by degree, keeping a candidate only when it is
    independent over Q(z) of the rows already kept, so every row has the
    smallest possible degree; the result is then put in row echelon form.
    """
    n = len(F)
    if n == 0:
        raise AlgebraError("no functions given")
    center = F[0].center
    K = min(s.order for s in F)
    if any(s.center != center for s in F):
        raise AlgebraError("series have different centers")
    if K < n * (d + 1) + guard:
        raise AlgebraError("order too small for degree bound")
    # z^t * F_i expanded at the common center
    zpow = []
    shifted = [Fraction(1)]
    for t in range(d + 1):
        zpow.append(shifted)
        nxt = [Fraction(0)] * (len(shifted) + 1)
        for k, c in enumerate(shifted):
            nxt[k] += center * c
            nxt[k + 1] += c
        shifted = nxt
    products = {}
    for i, s in enumerate(F):
        for t in range(d + 1):
            zt = zpow[t]
            col = []
            for k in range(K + 1):
                acc = Fraction(0)
                for u in range(min(k, t) + 1):
                    if zt[u]:
                        acc += zt[u] * s.coeffs[k - u]
                col.append(acc)
            products[i, t] = col

    kept = []
    for deg in range(d + 1):
        unknowns = [(i, t) for i in range(n) for t in range(deg + 1)]
        eqs = [[products[u][k] for u in unknowns] for k in range(K + 1)]
        for vec in nullspace(eqs, len(unknowns)):
            row = [Poly([vec[unknowns.index((i, t))] for t in range(deg + 1)]) for i in range(n)]
            if _ratfun_rank(kept + [row]) > len(kept):
                kept.append(row)
        if len(kept) == n:
            break
    return RelationBasis.from_rows(hermite_rows(kept), n) if kept else RelationBasis.from_rows([], n)


def normalize_basis(B):
    """Saturate the relation module: the maximal minors get a constant gcd.

    With U C V = S in Smith form, C = U^-1 [D 0] V^-1, so the first r rows of
    V^-1 span the same Q(z)-space and generate the saturation.
    """
    r = B.C.rows
    if r == 0:
        return B
    _, S, _, _, Vi = smith_form_with_inverses(B.C)
    achieved = sum(1 for i in range(min(S.rows, S.cols)) if S[i, i])
    if achieved < r:
        raise AlgebraError("relation rows are dependent")
    rows = hermite_rows([Vi.row(i) for i in range(r)])
    return RelationBasis.from_rows(rows, B.n)


def specialization_rank(B, xi):
    """Rank over Q of the relation matrix evaluated at xi."""
    if B.C.rows == 0:
        return 0
    return rank(eval_matrix(B.C, as_rat(xi)))


def explains_value_relation(B, xi, alpha):
    """True iff alpha lies in the Q-row space of C(xi)."""
    if len(alpha) != B.n:
        raise AlgebraError("alpha has the wrong length")
    alpha = [as_rat(a) for a in alpha]
    if B.C.rows == 0:
        return not any(alpha)
    vals = eval_matrix(B.C, as_rat(xi))
    return rank(vals + [alpha]) == rank(vals)
