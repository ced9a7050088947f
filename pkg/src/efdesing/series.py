"""Truncated exact power series in (z - center)."""

from fractions import Fraction

from .core_exact import Poly, RatFun, as_rat, format_rat
from .errors import AlgebraError

DEFAULT_ORDER = 50


class TruncSeries:
    """sum_{k<=order} coeffs[k] (z - center)^k, known exactly up to `order`."""

    __slots__ = ("center", "coeffs")

    def __init__(self, center, coeffs):
        self.center = as_rat(center)
        self.coeffs = tuple(as_rat(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a truncated series needs at least one coefficient")

    @classmethod
    def constant(cls, value, center, order):
        return cls(center, [value] + [0] * order)

    @classmethod
    def from_poly(cls, p, center, order):
        q = Poly.coerce(p).shift(center)
        return cls(center, [q[k] for k in range(order + 1)])

    @property
    def order(self):
        return len(self.coeffs) - 1

    def valuation(self):
        """Index of the first nonzero coefficient, or None if zero to order."""
        return next((k for k, c in enumerate(self.coeffs) if c), None)

    def is_zero(self):
        return not any(self.coeffs)

    def truncate(self, order):
        if order > self.order:
            raise AlgebraError("cannot extend a truncated series")
        return TruncSeries(self.center, self.coeffs[:order + 1])

    def __getitem__(self, k):
        return self.coeffs[k]

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.center == other.center and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.center, self.coeffs))

    def __repr__(self):
        terms = ", ".join(format_rat(c) for c in self.coeffs[:6])
        more = ", ..." if self.order > 5 else ""
        return f"TruncSeries(center={format_rat(self.center)}, order={self.order}, [{terms}{more}])"

    def _check(self, other):
        if self.center != other.center:
            raise AlgebraError("series have different centers")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncSeries(self.center, (self.coeffs[0] + other,) + self.coeffs[1:])
        self._check(other)
        k = min(self.order, other.order)
        return TruncSeries(self.center, [a + b for a, b in zip(self.coeffs[:k + 1], other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.center, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncSeries(self.center, [a * other for a in self.coeffs])
        if isinstance(other, (Poly, RatFun)):
            return self * expand_ratfun(RatFun.coerce(other), self.center, self.order)
        self._check(other)
        k = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(k + 1):
            acc = Fraction(0)
            for i in range(n + 1):
                x = a[i]
                if x:
                    y = b[n - i]
                    if y:
                        acc += x * y
            out.append(acc)
        return TruncSeries(self.center, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        self._check(other)
        vb = other.valuation()
        if vb is None:
            raise AlgebraError("indeterminate division")
        va = self.valuation()
        if vb:
            if va is not None and va < vb:
                raise AlgebraError("indeterminate division")
            a = self.coeffs[vb:]
            b = other.coeffs[vb:]
        else:
            a, b = self.coeffs, other.coeffs
        k = min(len(a), len(b)) - 1
        inv = 1 / b[0]
        out = []
        for n in range(k + 1):
            acc = a[n]
            for i in range(1, n + 1):
                if b[i]:
                    acc -= b[i] * out[n - i]
            out.append(acc * inv)
        return TruncSeries(self.center, out)

    def derivative(self):
        if self.order == 0:
            raise AlgebraError("derivative of an order-0 series has no known terms")
        return TruncSeries(self.center, [k * c for k, c in enumerate(self.coeffs)][1:])

    def evaluate_poly(self):
        """The truncation as a polynomial in z."""
        p = Poly(self.coeffs)
        return p.shift(-self.center)


def series_arith(a, b, op):
    """Apply op in {'add', 'mul', 'div'} to two series with equal centers."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown series operation {op!r}")


def expand_ratfun(f, center, order):
    """Taylor expansion of a rational function at `center` to `order`."""
    f = RatFun.coerce(f)
    center = as_rat(center)
    num = f.num.shift(center)
    den = f.den.shift(center)
    if not den[0]:
        raise AlgebraError("pole at expansion point")
    inv = 1 / den[0]
    out = []
    for n in range(order + 1):
        acc = num[n]
        for i in range(1, min(n, den.degree) + 1):
            acc -= den[i] * out[n - i]
        out.append(acc * inv)
    return TruncSeries(center, out)
