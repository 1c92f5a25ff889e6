"""Experiment recipes producing CSV tables.

Every recipe takes an :class:`ExperimentSpec` and returns a :class:`Table`.
Apart from columns whose name starts with ``time``, output is deterministic.
"""

from __future__ import annotations

import csv
import io
import logging
import statistics
import time
from dataclasses import dataclass, field, fields
from typing import Callable, Optional

import numpy as np

from . import corpus
from .adaptive import AdaptiveConfig, adaptive_partition, build_apipct, circle_points_below, scan_badcell
from .chebyshev import Interval, as_interval, compute_coeffs, map_to_interval
from .diagnostics import pole_report
from .errors import InvalidArgumentError
from .pct import build_pct
from .piecewise import (
    build_piecewise_chebyshev,
    build_pipct,
    convergence_order,
    l1_error,
    uniform_partition,
)

log = logging.getLogger(__name__)


@dataclass
class ExperimentSpec:
    experiment: str
    fn: str = "discondeg"
    N_list: tuple = (2, 8, 32, 128, 256, 512)
    n: int = 200
    m: int = 20
    np: int = 20
    nq: int = 20
    eps: float = 1e-2
    tau: Optional[float] = None
    window: Optional[tuple] = None
    samples: int = 200
    theta_samples: int = 1024
    threshold: float = 1e-10
    np_list: tuple = (2, 8, 16, 32)
    eps_list: tuple = (0.5, 0.2, 0.1, 0.05, 0.02, 1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4)
    np_cap: int = 60
    halfwidth: float = 0.05
    nbhd_samples: int = 200
    grid: int = 20001
    repeats: int = 5
    full_scale: bool = False
    method: str = "pipct"
    out: Optional[str] = None

    @property
    def function(self) -> corpus.CorpusFunction:
        return corpus.get(self.fn)

    @property
    def interval(self) -> Interval:
        return self.function.interval


DEFAULTS = {
    "table1": dict(fn="discondeg", N_list=(2, 8, 32, 128, 256, 512), window=(0.2, 1.0)),
    "table2": dict(fn="xabsx", N_list=(2, 4, 8, 16)),
    "sweep": dict(fn="discondeg", N_list=(2, 8, 32, 128, 512), np_list=(2, 8, 16, 32)),
    "adaptive": dict(fn="discondeg", N_list=(104, 208, 312, 416), n=100),
    "poles": dict(fn="discondeg", np_list=(8, 16, 32), tau=1.0 / 256),
    "np0": dict(fn="discondeg"),
    "approx": dict(fn="discondeg", N_list=(512,), grid=2001),
}


def default_spec(experiment: str, **overrides) -> ExperimentSpec:
    if experiment not in DEFAULTS:
        raise InvalidArgumentError(f"unknown experiment {experiment!r}")
    params = dict(DEFAULTS[experiment])
    params.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentSpec(experiment=experiment, **params)


SPEC_FIELDS = {f.name for f in fields(ExperimentSpec)}


@dataclass
class Table:
    header: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def column(self, name):
        i = self.header.index(name)
        return [row[i] for row in self.rows]

    def where(self, **match):
        idx = {k: self.header.index(k) for k in match}
        return [row for row in self.rows if all(row[i] == match[k] for k, i in idx.items())]

    def to_csv(self, exclude_prefix: Optional[str] = None) -> str:
        buf = io.StringIO()
        write_csv(self, buf, exclude_prefix)
        return buf.getvalue()


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(table: Table, stream, exclude_prefix: Optional[str] = None) -> None:
    keep = [i for i, h in enumerate(table.header) if not (exclude_prefix and h.startswith(exclude_prefix))]
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([table.header[i] for i in keep])
    for row in table.rows:
        writer.writerow([format_value(row[i]) for i in keep])


def save_csv(table: Table, path: str) -> None:
    with open(path, "w", newline="") as fh:
        write_csv(table, fh)


# ---------------------------------------------------------------- helpers


def midpoint_grid(lo: float, hi: float, samples: int) -> np.ndarray:
    h = (hi - lo) / samples
    return lo + (np.arange(samples) + 0.5) * h


def neighborhood_max(f: Callable, approx: Callable, x0: float, halfwidth: float, samples: int,
                     interval: Interval) -> float:
    """Max ``|f - approx|`` on a midpoint grid of ``[x0 - hw, x0 + hw]`` clipped to the interval."""
    lo = max(x0 - halfwidth, interval.a)
    hi = min(x0 + halfwidth, interval.b)
    x = midpoint_grid(lo, hi, samples)
    return float(np.max(np.abs(f(x) - approx(x))))


def error_peaks(x: np.ndarray, err: np.ndarray) -> np.ndarray:
    """Indices of local maxima of a sampled error curve (endpoints included)."""
    padded = np.concatenate(([-np.inf], err, [-np.inf]))
    mid = padded[1:-1]
    return np.flatnonzero((mid >= padded[:-2]) & (mid > padded[2:]) & (mid > 0))


def global_quadrature_size(spec: ExperimentSpec) -> int:
    if spec.full_scale:
        return max(spec.N_list) * spec.n
    return min(spec.n**2, 20480)


def _timed(fn: Callable, repeats: int):
    times = []
    result = None
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return result, statistics.median(times)


# ---------------------------------------------------------------- recipes


def _convergence_rows(spec: ExperimentSpec) -> Table:
    cf = spec.function
    window = as_interval(spec.window) if spec.window is not None else cf.interval
    table = Table(["N", "cheb_l1", "cheb_order", "pipct_l1", "pipct_order"])
    prev = None
    for N in spec.N_list:
        part = uniform_partition(cf.interval, N)
        cheb = build_piecewise_chebyshev(cf, part, spec.n, spec.np + spec.nq)
        pct = build_pipct(cf, part, spec.n, spec.np, spec.nq)
        ec = l1_error(cf, cheb, window, spec.samples)
        ep = l1_error(cf, pct, window, spec.samples)
        oc = op = None
        if prev is not None:
            oc = convergence_order(prev[1], ec, prev[0], N)
            op = convergence_order(prev[2], ep, prev[0], N)
        table.rows.append((int(N), ec, oc, ep, op))
        log.info("N=%d chebyshev %.3e PiPCT %.3e", N, ec, ep)
        prev = (N, ec, ep)
    return table


def run_table1(spec: ExperimentSpec) -> Table:
    """L1 errors on the window for piecewise Chebyshev (degree np+nq) and PiPCT."""
    return _convergence_rows(spec)


def run_table2(spec: ExperimentSpec) -> Table:
    return _convergence_rows(spec)


def run_error_sweep(spec: ExperimentSpec) -> Table:
    """Pointwise error peaks and neighbourhood maxima, PiPCT over N and global PCT over np."""
    cf = spec.function
    iv = cf.interval
    x = np.linspace(iv.a, iv.b, spec.grid)
    fx = cf(x)
    far = np.ones_like(x, dtype=bool)
    for x0 in cf.singular_points:
        far &= np.abs(x - x0) > spec.halfwidth

    table = Table(["record", "method", "N", "n", "np", "nq", "x", "abs_error"])

    def emit(method, N, n, np_, nq, approx):
        err = np.abs(fx - approx(x))
        for i in error_peaks(x, err):
            table.rows.append(("peak", method, N, n, np_, nq, float(x[i]), float(err[i])))
        for x0 in cf.singular_points:
            e = neighborhood_max(cf, approx, x0, spec.halfwidth, spec.nbhd_samples, iv)
            table.rows.append(("nbhd_max", method, N, n, np_, nq, float(x0), e))
        smooth = float(np.max(err[far])) if np.any(far) else None
        table.rows.append(("smooth_max", method, N, n, np_, nq, None, smooth))

    for N in spec.N_list:
        pa = build_pipct(cf, uniform_partition(iv, N), spec.n, spec.np, spec.nq)
        emit("pipct", int(N), spec.n, spec.np, spec.nq, pa)
    n_global = global_quadrature_size(spec)
    for np_ in spec.np_list:
        r = build_pct(compute_coeffs(cf, iv, n_global, 2 * np_), np_, np_)
        emit("global_pct", 1, n_global, int(np_), int(np_), r)
    return table


def run_adaptive_compare(spec: ExperimentSpec) -> Table:
    """PiPCT on N uniform cells vs APiPCT with ``tau = (b - a) / N``.

    Summary keys ``time_ratio_pipct`` / ``time_ratio_apipct`` compare the
    median build time at the largest and smallest N.
    """
    cf = spec.function
    iv = cf.interval
    table = Table(["N", "tau", "method", "cells", "badcells", "singularity", "nbhd_max", "time_median_s"])
    times = {"pipct": {}, "apipct": {}}
    for N in spec.N_list:
        tau = iv.width / N
        part = uniform_partition(iv, N)
        pa, t_p = _timed(lambda: build_pipct(cf, part, spec.n, spec.m, spec.m), spec.repeats)
        config = AdaptiveConfig(spec.eps, tau, spec.m, spec.n, spec.theta_samples)
        res, t_a = _timed(lambda: build_apipct(cf, iv, config), spec.repeats)
        times["pipct"][N] = t_p
        times["apipct"][N] = t_a
        n_bad = sum(s.is_bad for s in res.scans)
        for x0 in cf.singular_points:
            ep = neighborhood_max(cf, pa, x0, spec.halfwidth, spec.nbhd_samples, iv)
            ea = neighborhood_max(cf, res.approximant, x0, spec.halfwidth, spec.nbhd_samples, iv)
            table.rows.append((int(N), tau, "pipct", len(pa), 0, float(x0), ep, t_p))
            table.rows.append((int(N), tau, "apipct", len(res.approximant), n_bad, float(x0), ea, t_a))
    lo, hi = min(spec.N_list), max(spec.N_list)
    for method, t in times.items():
        table.summary[f"time_ratio_{method}"] = t[hi] / t[lo]
    return table


def jump_cell(spec: ExperimentSpec) -> Interval:
    """Flagged cell of the adaptive partition that hosts the first jump."""
    cf = spec.function
    jumps = [loc for loc, kind in cf.known_singularities if kind == corpus.JUMP]
    if not jumps:
        raise InvalidArgumentError(f"{cf.id} has no jump discontinuity")
    tau = spec.tau if spec.tau is not None else cf.interval.width / 512
    config = AdaptiveConfig(spec.eps, tau, spec.m, spec.n, spec.theta_samples)
    result = adaptive_partition(cf, cf.interval, config)
    j = int(result.partition.locate(jumps[0]))
    if not result.scans[j].is_bad:
        raise InvalidArgumentError(f"cell hosting the jump at {jumps[0]} was not flagged")
    return result.partition.cell(j)


def run_pole_map(spec: ExperimentSpec) -> Table:
    """Poles/residues in the jump badcell for each ``np = nq`` and low-|Q| circle points.

    The ``scan`` records come from the ``[m/m]`` approximant on the whole
    interval; their ``x`` column is ``G(Re z)``.
    """
    cf = spec.function
    cell = jump_cell(spec)
    table = Table(["record", "cell_a", "cell_b", "np", "nq", "re", "im", "modulus",
                   "abs_residual", "abs_q", "spurious", "x"])
    for np_ in spec.np_list:
        r = build_pct(compute_coeffs(cf, cell, spec.n, 2 * np_), np_, np_)
        rep = pole_report(r, spec.threshold)
        for z, res, spur in zip(rep.poles, rep.residuals, rep.spurious_flags):
            x = map_to_interval(cell, z.real) if abs(z.real) <= 1 else None
            table.rows.append(("pole", cell.a, cell.b, int(np_), int(np_), float(z.real), float(z.imag),
                               float(abs(z)), float(abs(res)), None, bool(spur), x))
    iv = cf.interval
    glob = build_pct(compute_coeffs(cf, iv, spec.n, 2 * spec.m), spec.m, spec.m)
    for z in circle_points_below(glob.q, spec.eps, spec.theta_samples):
        qz = float(abs(np.polynomial.polynomial.polyval(z, glob.q)))
        table.rows.append(("scan", iv.a, iv.b, spec.m, spec.m, float(z.real), float(z.imag), 1.0,
                           None, qz, None, map_to_interval(iv, float(z.real))))
    table.summary["jump_cell"] = (cell.a, cell.b)
    return table


def npzero_search(f: Callable, interval: Interval, n: int, eps_list, np_cap: int, theta_samples: int):
    """For each epsilon, the smallest ``np`` with ``min |Q_np| < epsilon`` on the circle (or None)."""
    np_cap = min(np_cap, n - 1)
    minima = []
    for np_ in range(1, np_cap + 1):
        r = build_pct(compute_coeffs(f, interval, n, 2 * np_), np_, np_)
        minima.append(scan_badcell(r.q, 1.0, theta_samples).min_abs_q)
    out = []
    for eps in eps_list:
        hit = next((k + 1 for k, v in enumerate(minima) if v < eps), None)
        out.append((float(eps), hit, minima[hit - 1] if hit else None))
    return out


def run_npzero_vs_eps(spec: ExperimentSpec) -> Table:
    cf = spec.function
    table = Table(["eps", "np0", "min_abs_q"])
    table.rows.extend(npzero_search(cf, cf.interval, spec.n, spec.eps_list, spec.np_cap, spec.theta_samples))
    return table


def run_approx(spec: ExperimentSpec) -> Table:
    """Evaluate one approximant of ``fn`` on a uniform grid."""
    cf = spec.function
    iv = cf.interval
    N = int(spec.N_list[0])
    if spec.method == "pipct":
        approx = build_pipct(cf, uniform_partition(iv, N), spec.n, spec.np, spec.nq)
    elif spec.method == "chebyshev":
        approx = build_piecewise_chebyshev(cf, uniform_partition(iv, N), spec.n, spec.np + spec.nq)
    elif spec.method == "apipct":
        tau = spec.tau if spec.tau is not None else iv.width / N
        approx = build_apipct(cf, iv, AdaptiveConfig(spec.eps, tau, spec.m, spec.n, spec.theta_samples)).approximant
    else:
        raise InvalidArgumentError(f"unknown method {spec.method!r}")
    x = np.linspace(iv.a, iv.b, spec.grid)
    fx = cf(x)
    ax = approx(x)
    table = Table(["x", "f", "approx", "abs_error"])
    table.rows.extend(zip(x.tolist(), np.asarray(fx).tolist(), ax.tolist(), np.abs(fx - ax).tolist()))
    table.summary["cells"] = len(approx)
    return table


RECIPES = {
    "table1": run_table1,
    "table2": run_table2,
    "sweep": run_error_sweep,
    "adaptive": run_adaptive_compare,
    "poles": run_pole_map,
    "np0": run_npzero_vs_eps,
    "approx": run_approx,
}


def run(spec: ExperimentSpec) -> Table:
    return RECIPES[spec.experiment](spec)
