"""Upper ramification breaks of UT_n(F_p)-extensions of F((t)) from a defining matrix."""

from .breaks import BreakReport, PairBreak, compute_breaks
from .closed_forms import closed_n3, closed_n4
from .errors import (
    FieldMismatch,
    HypothesisViolation,
    InstanceParseError,
    NotApplicable,
    NotInvertible,
    PrecisionExhausted,
)
from .field import FieldCtx, FieldElement, artin_schreier_solve, extend_by_p, proot
from .instance import format_instance, parse, parse_instance
from .kr import KRContext
from .laurent import LaurentSeries, format_series, parse_series
from .normalize import DefiningMatrix, normalize
from .trimatrix import TriMatrix, inv_entry_oracle, mat_inv, mat_mul, mat_val
from .weights import choose_N, choose_R, mu_dp, mu_enum_oracle, weight_table

__version__ = "0.1.0"

__all__ = [
    "BreakReport",
    "PairBreak",
    "compute_breaks",
    "closed_n3",
    "closed_n4",
    "FieldMismatch",
    "HypothesisViolation",
    "InstanceParseError",
    "NotApplicable",
    "NotInvertible",
    "PrecisionExhausted",
    "FieldCtx",
    "FieldElement",
    "artin_schreier_solve",
    "extend_by_p",
    "proot",
    "format_instance",
    "parse",
    "parse_instance",
    "KRContext",
    "LaurentSeries",
    "format_series",
    "parse_series",
    "DefiningMatrix",
    "normalize",
    "TriMatrix",
    "inv_entry_oracle",
    "mat_inv",
    "mat_mul",
    "mat_val",
    "choose_N",
    "choose_R",
    "mu_dp",
    "mu_enum_oracle",
    "weight_table",
]
