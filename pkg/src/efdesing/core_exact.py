"""Exact arithmetic over Q: polynomials, rational functions, polynomial matrices.

Scalars are :class:`fractions.Fraction`.  Polynomials are dense, stored lowest
degree first, and the zero polynomial is the empty coefficient tuple.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd as igcd, isqrt, lcm as ilcm

from .errors import AlgebraError

Rat = Fraction


def as_rat(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def format_rat(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Poly:
    """Univariate polynomial in z over Q."""

    __slots__ = ("c", "_hash")

    def __init__(self, coeffs=()):
        c = [as_rat(a) for a in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs):
        # coeffs already Fractions with nonzero last entry
        p = object.__new__(cls)
        p.c = coeffs
        p._hash = None
        return p

    @classmethod
    def coerce(cls, x):
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls((x,))
        raise TypeError(f"cannot convert {type(x).__name__} to Poly")

    @classmethod
    def z(cls):
        return cls((0, 1))

    @classmethod
    def linear(cls, root):
        """The monic factor z - root."""
        return cls((-as_rat(root), 1))

    @classmethod
    def monomial(cls, degree, coeff=1):
        return cls((0,) * degree + (coeff,))

    @classmethod
    def from_roots(cls, roots):
        p = cls((1,))
        for r in roots:
            p = p * cls.linear(r)
        return p

    # -- basic queries -------------------------------------------------
    @property
    def degree(self):
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1] if self.c else Fraction(0)

    def is_constant(self):
        return len(self.c) <= 1

    def __bool__(self):
        return bool(self.c)

    def __len__(self):
        return len(self.c)

    def __getitem__(self, k):
        return self.c[k] if 0 <= k < len(self.c) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == Poly.coerce(other).c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.c)
        return self._hash

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for d in range(len(self.c) - 1, -1, -1):
            a = self.c[d]
            if not a:
                continue
            neg = a < 0
            a = -a if neg else a
            if d == 0:
                body = format_rat(a)
            else:
                mono = "z" if d == 1 else f"z^{d}"
                body = mono if a == 1 else f"{format_rat(a)}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("-" if neg else "+") + body)
        return "".join(parts)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.coerce(other)
            else:
                return NotImplemented
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-x for x in self.c))

    def __sub__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.coerce(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly()
            return Poly._raw(tuple(x * other for x in self.c))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.c, other.c
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly._raw(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly((1,)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = Poly.coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        db = other.degree
        if len(rem) - 1 < db:
            return Poly(), self
        inv = 1 / other.lc
        q = [Fraction(0)] * (len(rem) - db)
        bc = other.c
        for k in range(len(rem) - 1 - db, -1, -1):
            t = rem[k + db] * inv
            q[k] = t
            if t:
                for j in range(db + 1):
                    rem[k + j] -= t * bc[j]
        return Poly(q), Poly(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise AlgebraError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, Poly) else Poly()
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def derivative(self):
        return Poly([k * a for k, a in enumerate(self.c)][1:])

    def shift(self, c):
        """Return p(z + c)."""
        c = as_rat(c)
        if not c:
            return self
        # Horner with (z + c)
        out = Poly()
        zc = Poly((c, 1))
        for a in reversed(self.c):
            out = out * zc + a
        return out

    def scale_arg(self, c):
        """Return p(c z)."""
        c = as_rat(c)
        return Poly([a * c**k for k, a in enumerate(self.c)])

    def monic(self):
        if not self.c or self.c[-1] == 1:
            return self
        inv = 1 / self.c[-1]
        return Poly._raw(tuple(x * inv for x in self.c))

    def valuation_at(self, root):
        """Multiplicity of `root` as a root; the zero polynomial is rejected."""
        if not self:
            raise AlgebraError("zero polynomial")
        lin = Poly.linear(root)
        k, p = 0, self
        while True:
            q, r = divmod(p, lin)
            if r:
                return k
            p, k = q, k + 1

    def integer_primitive(self):
        """Coefficients as coprime integers with positive leading coefficient."""
        if not self.c:
            return []
        den = 1
        for a in self.c:
            den = ilcm(den, a.denominator)
        ints = [int(a * den) for a in self.c]
        g = 0
        for v in ints:
            g = igcd(g, v)
        if ints[-1] < 0:
            g = -g
        return [v // g for v in ints]


def poly_gcd(a, b):
    """Monic gcd; gcd(0, 0) = 0."""
    a, b = Poly.coerce(a), Poly.coerce(b)
    while b:
        a, b = b, (a % b).monic()
    return a.monic()


def poly_lcm(a, b):
    if not a or not b:
        return Poly()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def poly_xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = Poly.coerce(a), Poly.coerce(b)
    s0, s1 = Poly((1,)), Poly()
    t0, t1 = Poly(), Poly((1,))
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def squarefree_decomposition(p):
    """Yun's algorithm: list of (factor, multiplicity), factors monic squarefree."""
    p = Poly.coerce(p)
    if not p:
        raise AlgebraError("zero polynomial")
    p = p.monic()
    out = []
    dp = p.derivative()
    g = poly_gcd(p, dp)
    if g.is_constant():
        return [(p, 1)] if not p.is_constant() else []
    w = p.exact_div(g)
    y = dp.exact_div(g)
    k = 1
    while not w.is_constant():
        zz = y - w.derivative()
        h = poly_gcd(w, zz)
        if not h.is_constant():
            out.append((h.monic(), k))
        w = w.exact_div(h)
        y = zz.exact_div(h)
        k += 1
    return out


def _divisors(n):
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(p):
    """Rational roots with multiplicities, plus the root-free residual.

    Returns ``(roots, residual)`` where ``roots`` is a list of ``(root, mult)``
    sorted by root and ``residual`` is monic with no rational root, so that
    ``p == lc * residual * prod((z - r)**m)``.
    """
    p = Poly.coerce(p)
    if not p:
        raise AlgebraError("zero polynomial")
    rest = p.monic()
    roots = []
    k = 0
    while rest.degree >= 1 and not rest.c[0]:
        rest = Poly._raw(rest.c[1:])
        k += 1
    if k:
        roots.append((Fraction(0), k))
    if rest.degree >= 1:
        sqf = Poly()
        for f, _ in squarefree_decomposition(rest):
            sqf = f if not sqf else sqf * f
        ints = sqf.integer_primitive()
        if len(ints) == 2:
            candidates = [Fraction(-ints[0], ints[1])]
        else:
            candidates = []
            for num in _divisors(ints[0]):
                for den in _divisors(ints[-1]):
                    candidates.append(Fraction(num, den))
                    candidates.append(Fraction(-num, den))
            candidates = sorted(set(candidates))
        for r in candidates:
            if rest.degree < 1:
                break
            if sqf(r) == 0:
                lin = Poly.linear(r)
                m = 0
                while True:
                    q, rem = divmod(rest, lin)
                    if rem:
                        break
                    rest, m = q, m + 1
                roots.append((r, m))
    roots.sort(key=lambda t: t[0])
    return roots, rest.monic()


class RatFun:
    """Normalized quotient of polynomials: gcd(num, den) = 1, den monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _normalized=False):
        num = Poly.coerce(num)
        den = Poly((1,)) if den is None else Poly.coerce(den)
        if not den:
            raise AlgebraError("division by the zero polynomial")
        if not _normalized:
            if not num:
                den = Poly((1,))
            elif not den.is_constant():
                g = poly_gcd(num, den)
                if not g.is_constant():
                    num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lc
            if lc != 1:
                inv = 1 / lc
                num, den = num * inv, den * inv
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def coerce(cls, x):
        if isinstance(x, RatFun):
            return x
        if isinstance(x, Poly):
            return cls(x, None, True)
        if isinstance(x, (int, Fraction)):
            return cls(Poly.coerce(x), None, True)
        raise TypeError(f"cannot convert {type(x).__name__} to RatFun")

    @classmethod
    def z(cls):
        return cls(Poly.z())

    def is_poly(self):
        return self.den.is_constant()

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, int, Fraction)):
            return self.den == 1 and self.num == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"RatFun({str(self)!r})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        ns = str(self.num)
        if len([a for a in self.num.c if a]) > 1:
            ns = f"({ns})"
        ds = str(self.den)
        nonzero = [a for a in self.den.c if a]
        if len(nonzero) > 1:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __add__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        if self.den == 1:
            return RatFun(self.num * other.den + other.num, other.den, True)
        if other.den == 1:
            return RatFun(self.num + other.num * self.den, self.den, True)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, True)

    def __sub__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatFun.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFun(self.num * other, self.den, True) if other else RatFun(Poly())
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        if other.den == 1 and self.den == 1:
            return RatFun(self.num * other.num, None, True)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFun.coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFun(self.num**n, self.den**n, True)

    def derivative(self):
        n, d = self.num, self.den
        if d == 1:
            return RatFun(n.derivative(), None, True)
        return RatFun(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x):
        x = as_rat(x)
        dv = self.den(x)
        if not dv:
            raise AlgebraError(f"pole at {format_rat(x)}")
        return self.num(x) / dv

    def pole_order(self, root):
        """Order of the pole at `root` (0 when regular there)."""
        return self.den.valuation_at(root)

    def as_poly(self):
        if not self.is_poly():
            raise AlgebraError(f"{self} is not a polynomial")
        return self.num * (1 / self.den.lc)


# -- dense linear algebra over a field (Fraction or RatFun entries) -------

def _zero_like(x):
    return x - x


def row_echelon(rows):
    """Reduced row echelon form.  Returns (rref rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows):
    return len(row_echelon(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of {x : rows . x = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    rref, pivots = row_echelon(rows) if rows else ([], [])
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][f]
        basis.append(v)
    return basis


def det(rows):
    """Determinant by Gaussian elimination over a field."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return Fraction(1)
    result = None
    sign = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col]), None)
        if piv is None:
            return _zero_like(m[0][0])
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        p = m[col][col]
        result = p if result is None else result * p
        inv = 1 / p
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return result if sign == 1 else -result


def inverse(rows):
    n = len(rows)
    one = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    aug = [list(rows[i]) + one[i] for i in range(n)]
    rref, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise AlgebraError("singular matrix")
    return [r[n:] for r in rref]


def matmul(a, b):
    nb = len(b[0]) if b else 0
    out = []
    for row in a:
        out_row = []
        for j in range(nb):
            acc = None
            for k, x in enumerate(row):
                if x:
                    y = b[k][j]
                    if y:
                        t = x * y
                        acc = t if acc is None else acc + t
            out_row.append(acc if acc is not None else _zero_like(row[0]))
        out.append(out_row)
    return out


# -- polynomial matrices ------------------------------------------------

class PolyMatrix:
    """Dense rows x cols matrix of :class:`Poly`, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = tuple(Poly.coerce(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError("entries length must be rows*cols")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n):
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, [0] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"PolyMatrix({[[str(e) for e in r] for r in self.to_rows()]})"

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return PolyMatrix(self.rows, self.cols, [e * other for e in self.entries])
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = Poly()
                for k in range(self.cols):
                    a = self[i, k]
                    if a:
                        b = other[k, j]
                        if b:
                            acc = acc + a * b
                out.append(acc)
        return PolyMatrix(self.rows, other.cols, out)

    def __add__(self, other):
        return PolyMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return PolyMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def transpose(self):
        return PolyMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def is_zero(self):
        return not any(self.entries)

    def submatrix(self, rows, cols):
        return PolyMatrix(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def det(self):
        """Fraction-free (Bareiss) determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return Poly((1,))
        m = self.to_rows()
        sign = 1
        prev = Poly((1,))
        for k in range(n - 1):
            if not m[k][k]:
                swap = next((i for i in range(k + 1, n) if m[i][k]), None)
                if swap is None:
                    return Poly()
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
            prev = m[k][k]
        d = m[n - 1][n - 1]
        return d if sign == 1 else -d

    def minors_gcd(self, k):
        """Monic gcd of all k x k minors (0 if they all vanish)."""
        g = Poly()
        for rs in combinations(range(self.rows), k):
            for cs in combinations(range(self.cols), k):
                g = poly_gcd(g, self.submatrix(rs, cs).det())
                if g == 1:
                    return g
        return g

    def evaluate(self, x):
        return eval_matrix(self, x)

    def max_degree(self):
        return max((e.degree for e in self.entries), default=-1)


def eval_matrix(M, x):
    """Entrywise evaluation of a PolyMatrix at a rational point."""
    x = as_rat(x)
    return [[M[i, j](x) for j in range(M.cols)] for i in range(M.rows)]


# -- Smith and Hermite forms over Q[z] ----------------------------------

def _min_degree_entry(a, t, nrows, ncols):
    best = None
    for i in range(t, nrows):
        for j in range(t, ncols):
            e = a[i][j]
            if e and (best is None or e.degree < best[0]):
                best = (e.degree, i, j)
                if e.degree == 0:
                    return best
    return best


def smith_form_with_inverses(M):
    """Smith form plus inverse transforms: (U, S, V, U^-1, V^-1), U*M*V = S."""
    nr, nc = M.rows, M.cols
    a = M.to_rows()
    one, zero = Poly((1,)), Poly()
    U = [[one if i == j else zero for j in range(nr)] for i in range(nr)]
    Ui = [r[:] for r in U]
    V = [[one if i == j else zero for j in range(nc)] for i in range(nc)]
    Vi = [r[:] for r in V]

    def row_swap(i, k):
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]
        for r in Ui:
            r[i], r[k] = r[k], r[i]

    def col_swap(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]
        Vi[j], Vi[k] = Vi[k], Vi[j]

    def row_addmul(i, k, q):
        # row_i += q * row_k
        a[i] = [x + q * y for x, y in zip(a[i], a[k])]
        U[i] = [x + q * y for x, y in zip(U[i], U[k])]
        for r in Ui:
            r[k] = r[k] - q * r[i]

    def col_addmul(j, k, q):
        # col_j += q * col_k
        for r in a:
            r[j] = r[j] + q * r[k]
        for r in V:
            r[j] = r[j] + q * r[k]
        Vi[k] = [x - q * y for x, y in zip(Vi[k], Vi[j])]

    for t in range(min(nr, nc)):
        while True:
            best = _min_degree_entry(a, t, nr, nc)
            if best is None:
                break
            _, i, j = best
            if i != t:
                row_swap(t, i)
            if j != t:
                col_swap(t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q, r = divmod(a[i][t], p)
                    row_addmul(i, t, -q)
                    dirty = dirty or bool(r)
            for j in range(t + 1, nc):
                if a[t][j]:
                    q, r = divmod(a[t][j], p)
                    col_addmul(j, t, -q)
                    dirty = dirty or bool(r)
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] and (a[i][j] % p)), None)
            if bad is None:
                break
            row_addmul(t, bad[0], one)
        if not a[t][t]:
            break
        lc = a[t][t].lc
        if lc != 1:
            inv = 1 / lc
            a[t] = [x * inv for x in a[t]]
            U[t] = [x * inv for x in U[t]]
            for r in Ui:
                r[t] = r[t] * lc

    return (PolyMatrix.from_rows(U), PolyMatrix.from_rows(a), PolyMatrix.from_rows(V),
            PolyMatrix.from_rows(Ui), PolyMatrix.from_rows(Vi))


def smith_normal_form(M):
    """Return (U, S, V) with U*M*V = S, U and V unimodular.

    S is diagonal with monic invariant factors d1 | d2 | ... .
    """
    U, S, V, _, _ = smith_form_with_inverses(M)
    return U, S, V


def invariant_factors(M):
    S = smith_normal_form(M)[1]
    return [S[i, i] for i in range(min(S.rows, S.cols)) if S[i, i]]


def hermite_rows(rows):
    """Row echelon form over Q[z] of a list of polynomial rows.

    Pivots are monic and entries above a pivot are reduced modulo it.  The row
    module is preserved; zero rows are dropped.
    """
    a = [[Poly.coerce(e) for e in r] for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    r = 0
    pivots = []
    for col in range(ncols):
        while True:
            cand = [(a[i][col].degree, i) for i in range(r, len(a)) if a[i][col]]
            if not cand:
                break
            _, i = min(cand)
            a[r], a[i] = a[i], a[r]
            p = a[r][col]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][col]:
                    q = a[i][col] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][col]:
            inv = 1 / a[r][col].lc
            a[r] = [x * inv for x in a[r]]
            for i in range(r):
                if a[i][col]:
                    q = a[i][col] // a[r][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            pivots.append(col)
            r += 1
            if r == len(a):
                break
    return [row for row in a[:r]]
