"""Piecewise Pade-Chebyshev approximation of functions with singularities."""

from .adaptive import AdaptiveConfig, BadCellScan, adaptive_partition, assign_degrees, build_apipct, refine_partition, scan_badcell
from .chebyshev import ChebyshevExpansion, Interval, chebyshev_points, compute_coeffs, eval_truncated, map_from_interval, map_to_interval
from .diagnostics import PoleReport, check_decay_bound, classify_froissart, find_poles, pole_report, residues, t_norm
from .errors import (
    ApproximationError,
    CellError,
    EvaluationError,
    InvalidArgumentError,
    NumericalError,
    OutOfDomainError,
    PoleError,
)
from .pct import PCTApproximant, build_pct, build_toeplitz, solve_denominator
from .piecewise import Partition, PiecewiseApproximant, build_piecewise_chebyshev, build_pipct, l1_error, uniform_partition

__version__ = "0.1.0"
