"""Approximate gcd of univariate polynomials through multiplication matrices.

The multiplication-by-``g`` map on ``C[x]/(f)`` has a kernel whose dimension
is ``deg gcd(f, g)``. Its matrix is built from Bézout matrices, has
displacement rank 2, and is factored in ``O(d**2)`` by a pivoted LU on
Cauchy-like generators. Gauss-Newton then moves ``g`` to the nearest
polynomial whose gcd with ``f`` has the detected degree.
"""

from .agcd import (
    AgcdConfig,
    AgcdError,
    AgcdResult,
    ConvergenceError,
    JacobianRankError,
    agcd,
    agcd_multi,
    exact_gcd,
    functional,
    gauss_newton_refine,
    rank_and_kernel,
)
from .bezout import MultiplicationMatrix, barnett_mult_matrix, bezout_matrix, hankel_bezout
from .gko import RankReport, StructuredLU, estimate_rank, gko_lu
from .poly import Polynomial, PolyFormatError, distance, monic, poly_divmod, read_poly, write_poly

__all__ = [
    "AgcdConfig",
    "AgcdError",
    "AgcdResult",
    "ConvergenceError",
    "JacobianRankError",
    "MultiplicationMatrix",
    "PolyFormatError",
    "Polynomial",
    "RankReport",
    "StructuredLU",
    "agcd",
    "agcd_multi",
    "barnett_mult_matrix",
    "bezout_matrix",
    "distance",
    "estimate_rank",
    "exact_gcd",
    "functional",
    "gauss_newton_refine",
    "gko_lu",
    "hankel_bezout",
    "monic",
    "poly_divmod",
    "rank_and_kernel",
    "read_poly",
    "write_poly",
]
