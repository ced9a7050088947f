"""Exact desingularization of differential systems with E-function solutions."""

from .core_exact import Poly, PolyMatrix, RatFun, smith_normal_form
from .desing import DesingResult, desingularize, remove_singularity_step
from .diffop import (
    ScalarOperator, construct_witness_coefficients, frobenius_analyze, is_apparent,
    minimal_combination_operator,
)
from .diffsys import (
    DiffSystem, fundamental_series, gauge_transform, singular_locus, sym_power,
    wronskian_order,
)
from .efunc import EFunction, divide_by_linear, growth_report
from .errors import AlgebraError, DegenerateChoiceError, InsufficientOrderError, ParseError
from .parser import parse_problem, parse_ratfun
from .relations import (
    RelationBasis, find_polynomial_relations, normalize_basis, specialization_rank,
)
from .series import TruncSeries

__version__ = "0.1.0"
