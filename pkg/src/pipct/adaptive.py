"""Badcell detection and adaptive partition refinement (APiPCT).

A cell is an epsilon-badcell when the ``[m/m]`` PCT denominator ``Q`` built on
it comes within ``epsilon`` of zero somewhere on the unit circle: near a
singularity of ``f`` the approximant places poles close to the circle.
Badcells are bisected until the smallest cell drops below ``tau``; afterwards
flagged cells get the raised numerator degree ``np = n_quad``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .chebyshev import Interval, as_interval, compute_coeffs
from .errors import ApproximationError, CellError, InvalidArgumentError
from .pct import build_toeplitz, solve_denominator
from .piecewise import Partition, PiecewiseApproximant, build_pipct

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdaptiveConfig:
    """Parameters of the badcell search.

    Attributes:
        epsilon: badcell threshold on ``min |Q(e^{i theta})|``.
        tau: refinement stops once a cell narrower than this is created.
        m: baseline degree, used as ``[m/m]`` for detection and in smooth cells.
        n_quad: quadrature size ``n``; also the numerator degree in badcells.
        theta_samples: scan resolution on the upper half circle.
        max_rounds: hard cap on bisection rounds.
    """

    epsilon: float = 1e-2
    tau: float = 1.0 / 256
    m: int = 20
    n_quad: int = 100
    theta_samples: int = 1024
    max_rounds: int = 40

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidArgumentError("epsilon must be positive")
        if not self.tau > 0:
            raise InvalidArgumentError("tau must be positive")
        if self.m < 1 or not 2 * self.m < self.n_quad:
            raise InvalidArgumentError("require 1 <= m and 2*m < n_quad")
        if self.theta_samples < 64:
            raise InvalidArgumentError("theta_samples must be >= 64")
        if self.max_rounds < 1:
            raise InvalidArgumentError("max_rounds must be >= 1")


@dataclass(frozen=True)
class BadCellScan:
    cell_index: int
    min_abs_q: float
    is_bad: bool
    interval: Interval | None = None
    degenerate: bool = False


def scan_badcell(q, epsilon: float, theta_samples: int = 1024, cell_index: int = -1) -> BadCellScan:
    """Minimum of ``|Q(e^{i theta})|`` over ``theta_samples`` points of ``[0, pi]``.

    Real coefficients give ``Q(conj z) = conj Q(z)``, so the lower half circle
    adds nothing.
    """
    q = np.asarray(q, dtype=float)
    if not np.any(q != 0):
        raise InvalidArgumentError("denominator must be nonzero")
    theta = np.linspace(0.0, np.pi, int(theta_samples))
    vals = np.abs(np.polynomial.polynomial.polyval(np.exp(1j * theta), q))
    min_abs = float(vals.min())
    return BadCellScan(cell_index, min_abs, bool(min_abs < epsilon))


def circle_points_below(q, epsilon: float, theta_samples: int = 1024) -> np.ndarray:
    """Points ``z = e^{i theta}``, ``theta`` in ``[0, pi]``, where ``|Q(z)| < epsilon``."""
    theta = np.linspace(0.0, np.pi, int(theta_samples))
    z = np.exp(1j * theta)
    return z[np.abs(np.polynomial.polynomial.polyval(z, np.asarray(q, float))) < epsilon]


def cell_denominator(f: Callable, interval, m: int, n_quad: int):
    exp = compute_coeffs(f, interval, n_quad, 2 * m)
    return solve_denominator(build_toeplitz(exp, m, m))


def scan_cell(f: Callable, interval: Interval, config: AdaptiveConfig, cell_index: int = -1) -> BadCellScan:
    """Scan one cell; rank-degenerate denominators count as bad."""
    try:
        sol = cell_denominator(f, interval, config.m, config.n_quad)
    except ApproximationError as exc:
        raise CellError(cell_index, interval, exc) from exc
    scan = scan_badcell(sol.q, config.epsilon, config.theta_samples, cell_index)
    degenerate = not sol.normalized
    return BadCellScan(cell_index, scan.min_abs_q, scan.is_bad or degenerate, interval, degenerate)


@dataclass
class AdaptiveResult:
    partition: Partition
    scans: list[BadCellScan]
    rounds: int
    history: list[Partition] = field(default_factory=list)

    @property
    def flagged(self) -> list[int]:
        return [s.cell_index for s in self.scans if s.is_bad]


def adaptive_partition(f: Callable, interval, config: AdaptiveConfig) -> AdaptiveResult:
    """Bisect badcells starting from the two-cell partition of ``interval``.

    Each round scans only the children of cells flagged in the previous round.
    The loop ends when no scanned cell is bad, when a round creates a cell
    narrower than ``tau``, or after ``max_rounds`` rounds.  Cells created by
    the last bisection are scanned once more so that every final cell has a
    scan.
    """
    interval = as_interval(interval)
    breakpoints = {interval.a, interval.midpoint, interval.b}
    active = [(interval.a, interval.midpoint), (interval.midpoint, interval.b)]
    scans: dict[tuple[float, float], BadCellScan] = {}
    history = [Partition(sorted(breakpoints))]
    rounds = 0
    while active and rounds < config.max_rounds:
        rounds += 1
        flagged = []
        for a, b in active:
            scan = scan_cell(f, Interval(a, b), config)
            scans[(a, b)] = scan
            if scan.is_bad:
                flagged.append((a, b))
        if not flagged:
            active = []
            break
        active = []
        for a, b in flagged:
            mid = 0.5 * (a + b)
            breakpoints.add(mid)
            active += [(a, mid), (mid, b)]
        history.append(Partition(sorted(breakpoints)))
        l_star = min(b - a for a, b in active)
        log.debug("round %d: %d badcells, smallest new cell %.3g", rounds, len(flagged), l_star)
        if l_star < config.tau:
            break
    # final children are not yet scanned
    for a, b in active:
        scans[(a, b)] = scan_cell(f, Interval(a, b), config)

    partition = Partition(sorted(breakpoints))
    final = []
    for j, iv in enumerate(partition.cells):
        s = scans[(iv.a, iv.b)]
        final.append(BadCellScan(j, s.min_abs_q, s.is_bad, iv, s.degenerate))
    return AdaptiveResult(partition, final, rounds, history)


def refine_partition(f: Callable, interval, config: AdaptiveConfig) -> Partition:
    return adaptive_partition(f, interval, config).partition


def assign_degrees(partition: Partition, scans, config: AdaptiveConfig) -> tuple[list[int], list[int]]:
    """``(n_quad, m)`` in flagged cells, ``(m, m)`` elsewhere."""
    by_index = {s.cell_index: s for s in scans}
    if set(by_index) != set(range(len(partition))):
        raise InvalidArgumentError("scans must cover every cell of the partition")
    nps = [config.n_quad if by_index[j].is_bad else config.m for j in range(len(partition))]
    nqs = [config.m] * len(partition)
    return nps, nqs


class APiPCTResult(NamedTuple):
    approximant: PiecewiseApproximant
    scans: list[BadCellScan]
    rounds: int


def build_apipct(f: Callable, interval, config: AdaptiveConfig) -> APiPCTResult:
    """Adaptive partition, degree assignment, then a PiPCT build on the result."""
    result = adaptive_partition(f, interval, config)
    nps, nqs = assign_degrees(result.partition, result.scans, config)
    pa = build_pipct(f, result.partition, config.n_quad, nps, nqs)
    return APiPCTResult(pa, result.scans, result.rounds)
