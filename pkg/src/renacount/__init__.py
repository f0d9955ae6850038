"""Exact counting, uniform sampling and Glushkov automata for regular
expressions that never put Sigma-star under a union."""

from .expr import (
    EPS,
    AlphabetError,
    Concat,
    Epsilon,
    ExprSyntaxError,
    Letter,
    Star,
    Union,
    alphabetic_size,
    avoids_absorbing_in_union,
    format_expr,
    is_nullable,
    parse,
    size,
)
from .glushkov import build_glushkov, count_functions, matches, position_sets
from .oracle import BudgetExceeded, enumerate_all, enumerate_filtered, run_oracle_suite
from .polys import c_k, spectral_polynomials
from .sampler import SamplerSpec, sample, sample_batch
from .series import coeff_table, verify_quadratic_L, verify_quadratic_R

__version__ = "0.1.0"

__all__ = [
    "EPS", "AlphabetError", "BudgetExceeded", "Concat", "Epsilon", "ExprSyntaxError", "Letter",
    "SamplerSpec", "Star", "Union", "alphabetic_size", "avoids_absorbing_in_union", "build_glushkov",
    "c_k", "coeff_table", "count_functions", "enumerate_all", "enumerate_filtered", "format_expr",
    "is_nullable", "matches", "parse", "position_sets", "run_oracle_suite", "sample", "sample_batch",
    "size", "spectral_polynomials", "verify_quadratic_L", "verify_quadratic_R",
]
