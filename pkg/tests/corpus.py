"""Small hand-built systems with known E-function solutions, shared by tests."""

from fractions import Fraction

from efdesing.core_exact import Poly, RatFun
from efdesing.diffsys import DiffSystem, gauge_transform
from efdesing.efunc import (
    EFunction, bessel_type_function, cos_function, exp_function, linear_combination,
    poly_times_exp, sin_function,
)

z = Poly.z()
ONE = Poly((1,))


def R(num, den=ONE):
    return RatFun(Poly.coerce(num), Poly.coerce(den))


def bessel_pair():
    f = bessel_type_function()
    g = EFunction("z*d(bessel0)", lambda k, prev: k * f.coefficient(k))
    return f, g


def cases():
    """(name, system, functions, relation rows or None)."""
    out = []
    out.append(("diag12", DiffSystem([[R(1), R(0)], [R(0), R(2)]]),
                [exp_function(1), exp_function(2)], None))
    out.append(("linear_factor", DiffSystem([[R(z, z - 1)]]), [poly_times_exp(z - 1, 1)], None))
    out.append(("rotation", DiffSystem([[R(0), R(1)], [R(-1), R(0)]]),
                [cos_function(1), linear_combination([-1], [sin_function(1)])], None))
    out.append(("bessel", DiffSystem([[R(0), R(1, z)], [R(-4 * z), R(0)]]), list(bessel_pair()), None))
    out.append(("jordan", DiffSystem([[R(1), R(1)], [R(0), R(1)]]),
                [poly_times_exp(z, 1), exp_function(1)], [[ONE, -z]]))
    lifted = gauge_transform(DiffSystem([[R(1), R(0)], [R(0), R(2)]]),
                             [[R(1, z - 2), R(0)], [R(0), R(1)]])
    out.append(("lifted_diag12", lifted, [poly_times_exp(z - 2, 1), exp_function(2)], None))
    three = DiffSystem([[R(1), R(0), R(0)], [R(0), R(-1), R(0)], [R(0), R(0), R(Fraction(1, 2))]])
    out.append(("diag3", three,
                [exp_function(1), exp_function(-1), exp_function(Fraction(1, 2))], None))
    return out
