"""Partitions, piecewise PCT assembly, and L1 convergence measurement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .chebyshev import CLAMP_TOL, Interval, as_interval, compute_coeffs, sample
from .errors import ApproximationError, CellError, InvalidArgumentError, OutOfDomainError
from .pct import build_pct


@dataclass(frozen=True, eq=False)
class Partition:
    """Strictly increasing breakpoints ``a_0 < ... < a_N``; cell ``j`` is ``[a_j, a_{j+1}]``."""

    breakpoints: np.ndarray

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=float)
        if bp.ndim != 1 or bp.size < 2:
            raise InvalidArgumentError("a partition needs at least two breakpoints")
        if not np.all(np.isfinite(bp)):
            raise InvalidArgumentError("breakpoints must be finite")
        if not np.all(np.diff(bp) > 0):
            raise InvalidArgumentError("breakpoints must be strictly increasing")
        bp.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)

    def __len__(self):
        return self.breakpoints.size - 1

    @property
    def span(self) -> Interval:
        return Interval(self.breakpoints[0], self.breakpoints[-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def cell(self, j: int) -> Interval:
        return Interval(self.breakpoints[j], self.breakpoints[j + 1])

    @property
    def cells(self) -> list[Interval]:
        return [self.cell(j) for j in range(len(self))]

    def locate(self, x) -> np.ndarray:
        """Host cell index: half-open ``[a_j, a_{j+1})`` with the last cell closed."""
        x = np.asarray(x, dtype=float)
        span = self.span
        if np.any(~span.contains(x)):
            raise OutOfDomainError(f"point(s) outside partition span [{span.a}, {span.b}]")
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        return np.clip(idx, 0, len(self) - 1)


def uniform_partition(interval, N: int) -> Partition:
    interval = as_interval(interval)
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"number of cells must be >= 1, got {N!r}")
    bp = np.linspace(interval.a, interval.b, int(N) + 1)
    bp[0], bp[-1] = interval.a, interval.b
    return Partition(bp)


@dataclass(frozen=True, eq=False)
class PiecewiseApproximant:
    """One approximant per partition cell.

    Cells are PCT approximants, or any callable carrying an ``interval``
    attribute (the piecewise Chebyshev baseline stores expansions).
    """

    partition: Partition
    cells: tuple

    def __post_init__(self):
        cells = tuple(self.cells)
        if len(cells) != len(self.partition):
            raise InvalidArgumentError("one approximant per cell is required")
        for j, cell in enumerate(cells):
            iv = self.partition.cell(j)
            if (cell.interval.a, cell.interval.b) != (iv.a, iv.b):
                raise InvalidArgumentError(f"cell {j} is not hosted on its partition interval")
        object.__setattr__(self, "cells", cells)

    def __len__(self):
        return len(self.cells)

    def __call__(self, x):
        return eval_piecewise(self, x)


def _broadcast_degrees(values, N: int, name: str) -> list[int]:
    if np.ndim(values) == 0:
        return [int(values)] * N
    values = [int(v) for v in values]
    if len(values) != N:
        raise InvalidArgumentError(f"{name} has {len(values)} entries for {N} cells")
    return values


def build_pipct(
    f: Callable,
    partition: Partition,
    n_quad: int,
    np_per_cell,
    nq_per_cell,
    q_override: Optional[Callable[[int, int], np.ndarray]] = None,
) -> PiecewiseApproximant:
    """Build independent ``[np_j/nq_j]`` PCT approximants on every cell of ``partition``.

    Degrees may be given per cell or as scalars applied to all cells.  Each cell
    samples ``f`` at ``n_quad`` Chebyshev points mapped into that cell.

    ``q_override(j, nq)``, if given, supplies a fixed denominator for cell ``j``
    instead of solving the Toeplitz system.

    Raises:
        CellError: wrapping the failure of an individual cell.
    """
    N = len(partition)
    nps = _broadcast_degrees(np_per_cell, N, "np_per_cell")
    nqs = _broadcast_degrees(nq_per_cell, N, "nq_per_cell")
    cells = []
    for j, iv in enumerate(partition.cells):
        try:
            exp = compute_coeffs(f, iv, n_quad, nps[j] + nqs[j])
            q = None if q_override is None else q_override(j, nqs[j])
            cells.append(build_pct(exp, nps[j], nqs[j], q=q))
        except ApproximationError as exc:
            raise CellError(j, iv, exc) from exc
    return PiecewiseApproximant(partition, tuple(cells))


def build_piecewise_chebyshev(f: Callable, partition: Partition, n_quad: int, d: int) -> PiecewiseApproximant:
    """Piecewise truncated Chebyshev series of degree ``d`` (the polynomial baseline)."""
    cells = []
    for j, iv in enumerate(partition.cells):
        try:
            cells.append(compute_coeffs(f, iv, n_quad, d))
        except ApproximationError as exc:
            raise CellError(j, iv, exc) from exc
    return PiecewiseApproximant(partition, tuple(cells))


def eval_piecewise(pa: PiecewiseApproximant, x):
    x_arr = np.asarray(x, dtype=float)
    idx = pa.partition.locate(x_arr)
    if x_arr.ndim == 0:
        return float(pa.cells[int(idx)](_clamp(pa, int(idx), float(x_arr))))
    out = np.empty(x_arr.shape)
    flat_x, flat_i, flat_out = x_arr.ravel(), idx.ravel(), out.reshape(-1)
    for j in np.unique(flat_i):
        mask = flat_i == j
        flat_out[mask] = pa.cells[j](_clamp(pa, j, flat_x[mask]))
    return out


def _clamp(pa: PiecewiseApproximant, j: int, x):
    # points within the span tolerance but outside the host cell
    iv = pa.cells[j].interval
    return np.clip(x, iv.a, iv.b)


def l1_error(
    f: Callable, pa: PiecewiseApproximant, window, samples_per_cell: int = 200
) -> float:
    """Composite trapezoidal ``int |f - pa|`` over ``window``, split at breakpoints.

    Every cell/window overlap is integrated on its own uniform grid of
    ``samples_per_cell`` points using that cell's approximant, so no panel
    straddles a breakpoint.
    """
    window = as_interval(window)
    span = pa.partition.span
    slack = CLAMP_TOL * span.width
    if window.a < span.a - slack or window.b > span.b + slack:
        raise OutOfDomainError("window must lie within the partition span")
    if samples_per_cell < 2:
        raise InvalidArgumentError("samples_per_cell must be >= 2")
    total = 0.0
    for cell in pa.cells:
        lo = max(cell.interval.a, window.a)
        hi = min(cell.interval.b, window.b)
        if hi <= lo:
            continue
        x = np.linspace(lo, hi, samples_per_cell)
        err = np.abs(sample(f, x) - cell(x))
        total += float(np.trapezoid(err, x))
    return total


@dataclass(frozen=True)
class ConvergenceRecord:
    N: int
    l1_error: float
    order: Optional[float] = None


def convergence_order(e_prev: float, e_cur: float, n_prev: int, n_cur: int) -> Optional[float]:
    """``log(e_prev / e_cur) / log(N_cur / N_prev)``, or None if an error is not positive."""
    if e_prev > 0 and e_cur > 0:
        return math.log(e_prev / e_cur) / math.log(n_cur / n_prev)
    return None


def convergence_table(
    f: Callable,
    interval,
    window,
    N_list: Sequence[int],
    n_quad: int,
    np_: int,
    nq: int,
    samples_per_cell: int = 200,
    method: str = "pipct",
) -> list[ConvergenceRecord]:
    """L1 errors and numerical orders on uniform partitions of ``interval``.

    ``method="chebyshev"`` measures the piecewise truncated series of degree
    ``np + nq`` instead of the PCT approximant.
    """
    N_list = [int(N) for N in N_list]
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise InvalidArgumentError("N_list must be strictly increasing")
    if method not in ("pipct", "chebyshev"):
        raise InvalidArgumentError(f"unknown method {method!r}")
    records: list[ConvergenceRecord] = []
    for N in N_list:
        part = uniform_partition(interval, N)
        if method == "pipct":
            pa = build_pipct(f, part, n_quad, np_, nq)
        else:
            pa = build_piecewise_chebyshev(f, part, n_quad, np_ + nq)
        err = l1_error(f, pa, window, samples_per_cell)
        order = None
        if records:
            prev = records[-1]
            order = convergence_order(prev.l1_error, err, prev.N, N)
        records.append(ConvergenceRecord(N, err, order))
    return records
