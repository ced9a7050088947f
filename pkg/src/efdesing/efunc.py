"""Exact coefficient streams for E-functions f(z) = sum a_k z^k / k!.

Every stream is memoized; a coefficient is computed once, from the ones
before it, under a per-stream lock.
"""

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from .core_exact import Poly, RatFun, as_rat, format_rat
from .errors import AlgebraError
from .series import TruncSeries


class EFunction:
    """A named coefficient stream.

    `term(k, prev)` must return a_k given prev == [a_0, ..., a_{k-1}].
    """

    def __init__(self, name, term):
        self.name = name
        self._term = term
        self._cache = []
        self._lock = threading.Lock()

    def __repr__(self):
        return f"EFunction({self.name!r})"

    def coefficients(self, K):
        """Exact a_0 .. a_K."""
        if K < 0:
            raise AlgebraError("K must be non-negative")
        cache = self._cache
        if len(cache) <= K:
            with self._lock:
                while len(cache) <= K:
                    cache.append(Fraction(self._term(len(cache), cache)))
        return list(cache[:K + 1])

    def coefficient(self, k):
        if k < len(self._cache):
            return self._cache[k]
        return self.coefficients(k)[k]

    def taylor(self, K):
        """Taylor coefficients a_k / k! for k <= K."""
        out, fact = [], 1
        for k, a in enumerate(self.coefficients(K)):
            if k:
                fact *= k
            out.append(a / fact)
        return out

    def series(self, K):
        return TruncSeries(0, self.taylor(K))


def coefficients(f, K):
    return f.coefficients(K)


# -- builtins -----------------------------------------------------------

def exp_function(c=1):
    c = as_rat(c)
    return EFunction(f"exp({format_rat(c)})", lambda k, prev: 1 if k == 0 else prev[-1] * c)


def _periodic_exp(c, pattern, name):
    c = as_rat(c)
    return EFunction(name, lambda k, prev: pattern[k % 4] * c**k)


def cos_function(c=1):
    return _periodic_exp(c, (1, 0, -1, 0), f"cos({format_rat(as_rat(c))})")


def sin_function(c=1):
    return _periodic_exp(c, (0, 1, 0, -1), f"sin({format_rat(as_rat(c))})")


def recurrence_function(coeffs, init, name=None):
    """Stream with a[k+r] = sum_{j<r} coeffs[j](k) * a[k+j], k >= len(init) - r.

    `coeffs` are rational functions of k (RatFun in the variable k).
    """
    coeffs = [RatFun.coerce(q) for q in coeffs]
    init = [as_rat(v) for v in init]
    r = len(coeffs)
    if len(init) < r:
        raise AlgebraError(f"recurrence of order {r} needs at least {r} initial terms")

    def term(n, prev):
        if n < len(init):
            return init[n]
        k = n - r
        acc = Fraction(0)
        for j, q in enumerate(coeffs):
            if q:
                try:
                    acc += q(k) * prev[k + j]
                except AlgebraError:
                    raise AlgebraError(f"recurrence coefficient has a pole at k={k}") from None
        return acc

    if name is None:
        name = f"rec(order {r})"
    return EFunction(name, term)


def bessel_type_function():
    """sum (-1)^k C(2k,k) z^{2k}/(2k)!, i.e. J_0(2z)."""
    return recurrence_function(
        [RatFun(Poly((-4, -4)), Poly((2, 1))), RatFun.coerce(0)], [1, 0],
        name="bessel0")


# -- operations ---------------------------------------------------------

def linear_combination(coeffs, functions, name=None):
    """sum c_i f_i with rational constants c_i."""
    coeffs = [as_rat(c) for c in coeffs]
    pairs = [(c, f) for c, f in zip(coeffs, functions) if c]
    if name is None:
        name = " + ".join(f.name if c == 1 else f"{format_rat(c)}*{f.name}"
                          for c, f in pairs) or "0"

    def term(k, prev):
        return sum((c * f.coefficient(k) for c, f in pairs), Fraction(0))

    return EFunction(name, term)


def poly_combination(polys, functions, name=None):
    """sum p_i(z) f_i(z) with polynomial multipliers.

    z^d g has stream k!/(k-d)! * b_{k-d}.
    """
    pairs = [(Poly.coerce(p), f) for p, f in zip(polys, functions) if Poly.coerce(p)]
    if name is None:
        name = " + ".join(f"({p})*{f.name}" for p, f in pairs) or "0"

    def term(k, prev):
        acc = Fraction(0)
        for p, f in pairs:
            falling = 1
            for d in range(min(p.degree, k) + 1):
                if d:
                    falling *= k - d + 1
                if p[d]:
                    acc += p[d] * falling * f.coefficient(k - d)
        return acc

    return EFunction(name, term)


def poly_times_exp(p, c=1):
    e = exp_function(c)
    return poly_combination([p], [e], name=f"({Poly.coerce(p)})*{e.name}")


def scale_argument(f, xi):
    """f(xi z): b_k = xi^k a_k."""
    xi = as_rat(xi)
    if not xi:
        raise AlgebraError("scale factor must be non-zero")
    if xi == 1:
        return f
    return EFunction(f"{f.name}({format_rat(xi)}z)", lambda k, prev: xi**k * f.coefficient(k))


def product(f, g):
    """Binomial convolution c_k = sum_j C(k,j) a_j b_{k-j}."""

    def term(k, prev):
        a = f.coefficients(k)
        b = g.coefficients(k)
        acc = Fraction(0)
        binom = 1
        for j in range(k + 1):
            if a[j] and b[k - j]:
                acc += binom * a[j] * b[k - j]
            binom = binom * (k - j) // (j + 1)
        return acc

    return EFunction(f"{f.name}*{g.name}", term)


def derivative(f):
    return EFunction(f"d({f.name})", lambda k, prev: f.coefficient(k + 1))


# -- growth diagnostics -------------------------------------------------

def _log_abs(x):
    x = Fraction(x)
    if not x:
        return None
    return math.log(abs(x.numerator)) - math.log(x.denominator)


def _fit_geometric(logs):
    """Fit log|v_k| <= log B + k log C over the listed values.

    log C is the slope between the envelope maxima of the last two quarters
    of the window; log B then makes the bound hold for every listed k.
    """
    K = len(logs) - 1
    lo, mid = K // 2, (3 * K) // 4
    w1 = [(v, k) for k, v in enumerate(logs[lo:mid], lo) if v is not None]
    w2 = [(v, k) for k, v in enumerate(logs[mid:], mid) if v is not None]
    if w1 and w2:
        (v1, k1), (v2, k2) = max(w1), max(w2)
        log_c = (v2 - v1) / (k2 - k1) if k2 != k1 else 0.0
    else:
        log_c = 0.0
    vals = [v - k * log_c for k, v in enumerate(logs) if v is not None]
    log_b = max(vals) if vals else float("-inf")
    return log_b, log_c


def _exp(x):
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class GrowthReport:
    """Fitted |a_k| <= B C^k, den-lcm_k <= B1 C1^k, and the height slope."""

    K: int
    log_B: float
    log_C: float
    log_B1: float
    log_C1: float
    hmax: float
    superexponential: bool

    @property
    def B(self):
        return _exp(self.log_B)

    @property
    def C(self):
        return _exp(self.log_C)

    @property
    def B1(self):
        return _exp(self.log_B1)

    @property
    def C1(self):
        return _exp(self.log_C1)

    def bound(self, k):
        """log of B*C^k."""
        return self.log_B + k * self.log_C


def growth_report(f, K):
    """Fit the E-function growth constants over a_0..a_K (diagnostic only)."""
    if K < 10:
        raise AlgebraError("growth_report needs K >= 10")
    a = f.coefficients(K)
    logs = [_log_abs(x) for x in a]
    log_b, log_c = _fit_geometric(logs)
    dens, d = [], 1
    for x in a:
        d = math.lcm(d, x.denominator)
        dens.append(d)
    dlogs = [math.log(v) for v in dens]
    log_b1, log_c1 = _fit_geometric(dlogs)
    hmax, running = 0.0, None
    for k in range(K + 1):
        if logs[k] is not None:
            running = logs[k] if running is None else max(running, logs[k])
        if k:
            h = dlogs[k] + max(running if running is not None else 0.0, 0.0)
            hmax = max(hmax, h / k)
    _, log_c_half = _fit_geometric(logs[:K // 2 + 1])
    superexp = log_c - log_c_half > math.log(1.25) and log_c > 0
    return GrowthReport(K, log_b, log_c, log_b1, log_c1, hmax, superexp)


def log_tail_bound(report, xi, K):
    """log of B (C|xi|)^{K+1}/(K+1)! e^{C|xi|}, bounding sum_{k>K} |a_k xi^k/k!|."""
    x = abs(float(xi))
    if x == 0 or report.log_B == float("-inf"):
        return float("-inf")
    cx = report.C * x
    if cx == 0:
        return float("-inf")
    return report.log_B + (K + 1) * math.log(cx) - math.lgamma(K + 2) + cx


def certified_value(f, xi, K):
    """Partial sum of f(xi) to a_K and the log of a tail bound.

    The bound uses B, C fitted on a_0..a_{2K}; diagnostic, not a proof.
    """
    xi = as_rat(xi)
    terms = f.taylor(K)
    s = Fraction(0)
    p = Fraction(1)
    for t in terms:
        s += t * p
        p *= xi
    report = growth_report(f, max(2 * K, 10))
    return s, log_tail_bound(report, xi, K)


def exceeds_tail(value, log_tail):
    """True when |value| is strictly larger than exp(log_tail)."""
    lv = _log_abs(value)
    return lv is not None and lv > log_tail


def divide_by_linear(f, xi, K_check=None):
    """g = f / (z - xi), after certifying f(xi) = 0 against a tail bound.

    For xi != 0 the stream obeys b_n/n! = -sum_{k<=n} a_k xi^{k-n-1}/k!,
    computed as b_n = (n b_{n-1} - a_n)/xi.
    """
    xi = as_rat(xi)
    name = f"({f.name})/({Poly.linear(xi)})" if xi else f"({f.name})/z"
    if not xi:
        if f.coefficient(0):
            raise AlgebraError("f(xi) not numerically zero within certified tail bound")
        return EFunction(name, lambda k, prev: f.coefficient(k + 1) / (k + 1))
    if K_check is None:
        rough = growth_report(f, 60)
        K_check = max(60, int(3 * rough.C * abs(float(xi))) + 30)
    value, log_tail = certified_value(f, xi, K_check)
    if exceeds_tail(value, log_tail):
        raise AlgebraError("f(xi) not numerically zero within certified tail bound")

    def term(n, prev):
        a = f.coefficient(n)
        if n == 0:
            return -a / xi
        return (n * prev[-1] - a) / xi

    return EFunction(name, term)
