"""Pole/residue diagnostics for PCT approximants and the Chebyshev decay bound.

Poles are reported in the ``z``-plane of the approximant's own cell, where the
unit circle corresponds to the cell via ``x = G(Re z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .chebyshev import ChebyshevExpansion, as_interval, map_to_interval, sample
from .errors import InvalidArgumentError
from .pct import PCTApproximant

P = np.polynomial.polynomial

TRIM_TOL = 1e-13
SIMPLE_ROOT_TOL = 1e-12
DEFAULT_SPURIOUS_THRESHOLD = 1e-10


def trim_denominator(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    scale = np.max(np.abs(q)) if q.size else 0.0
    if scale == 0:
        raise InvalidArgumentError("zero polynomial has no roots")
    keep = np.flatnonzero(np.abs(q) > TRIM_TOL * scale)
    return q[: keep[-1] + 1]


def polynomial_roots(q) -> np.ndarray:
    """Roots of ``sum q_k z^k`` from the companion matrix, with one Newton polish.

    A polished root is kept only if it lowers ``|Q|``.
    """
    q = trim_denominator(q)
    deg = q.size - 1
    if deg < 1:
        raise InvalidArgumentError("polynomial of degree 0 has no roots")
    monic = q[:-1] / q[-1]
    C = np.zeros((deg, deg), dtype=float)
    C[1:, :-1] = np.eye(deg - 1)
    C[:, -1] = -monic
    z = np.linalg.eigvals(C).astype(complex)
    dq = P.polyder(q)
    qz = P.polyval(z, q)
    dqz = P.polyval(z, dq)
    with np.errstate(divide="ignore", invalid="ignore"):
        z_new = z - qz / dqz
    better = np.isfinite(z_new) & (np.abs(P.polyval(z_new, q)) < np.abs(qz))
    z[better] = z_new[better]
    return z


def find_poles(r: PCTApproximant) -> np.ndarray:
    return polynomial_roots(r.q)


def residues(r: PCTApproximant, poles) -> np.ndarray:
    """``P(z_i) / Q'(z_i)``; multiple roots give ``inf``/very large values, not errors."""
    poles = np.asarray(poles, dtype=complex)
    dq = P.polyder(np.asarray(r.q, float))
    with np.errstate(divide="ignore", invalid="ignore"):
        return P.polyval(poles, r.p) / P.polyval(poles, dq)


def multiple_root_mask(r: PCTApproximant, poles) -> np.ndarray:
    q = np.asarray(r.q, float)
    scale = np.max(np.abs(q))
    return np.abs(P.polyval(np.asarray(poles, complex), P.polyder(q))) <= SIMPLE_ROOT_TOL * scale


@dataclass(frozen=True)
class PoleReport:
    poles: np.ndarray
    residuals: np.ndarray
    spurious_flags: np.ndarray
    threshold: float
    scale: float = 1.0

    @property
    def n_spurious(self) -> int:
        return int(np.count_nonzero(self.spurious_flags))

    @property
    def genuine(self) -> np.ndarray:
        return self.poles[~self.spurious_flags]

    @property
    def spurious(self) -> np.ndarray:
        return self.poles[self.spurious_flags]


def classify_froissart(poles, residuals, threshold: float = DEFAULT_SPURIOUS_THRESHOLD,
                       scale: float = 1.0) -> PoleReport:
    """Flag a pole as spurious when ``|residual| < threshold * scale``."""
    if not threshold > 0:
        raise InvalidArgumentError("threshold must be positive")
    poles = np.asarray(poles, dtype=complex)
    residuals = np.asarray(residuals, dtype=complex)
    if poles.shape != residuals.shape:
        raise InvalidArgumentError("poles and residuals must have the same length")
    flags = np.abs(residuals) < threshold * scale
    return PoleReport(poles, residuals, flags, float(threshold), float(scale))


def pole_report(r: PCTApproximant, threshold: float = DEFAULT_SPURIOUS_THRESHOLD) -> PoleReport:
    """Poles, residues and spurious flags, with the threshold relative to ``max |c_{k,n}|``."""
    poles = find_poles(r)
    return classify_froissart(poles, residues(r, poles), threshold, r.scale)


def pole_abscissae(r: PCTApproximant, poles) -> np.ndarray:
    """Map ``Re z`` of poles inside ``[-1, 1]`` back into the cell; others are NaN."""
    re = np.real(np.asarray(poles, complex))
    out = np.full(re.shape, np.nan)
    inside = np.abs(re) <= 1
    out[inside] = map_to_interval(r.interval, re[inside])
    return out


def t_norm(f_deriv: Callable, interval, quad_points: int = 4096) -> float:
    """``int_0^pi |f_deriv(G(cos theta))| d theta`` by the composite trapezoidal rule.

    With ``f_deriv = f^{(k+1)}`` this is ``V_k = ||f^{(k)}||_T``.
    """
    interval = as_interval(interval)
    if quad_points < 1:
        raise InvalidArgumentError("quad_points must be >= 1")
    theta = np.linspace(0.0, np.pi, int(quad_points) + 1)
    # nudge the endpoints inward: the callback need only be defined on the open interval
    y = np.cos(theta)
    y[0], y[-1] = np.nextafter(1.0, 0.0), np.nextafter(-1.0, 0.0)
    vals = np.abs(sample(f_deriv, map_to_interval(interval, y)))
    return float(np.trapezoid(vals, theta))


def t_variation(f_k: Callable, interval, quad_points: int = 4096) -> float:
    """T-norm of ``f_k`` from its values rather than its derivative.

    Sums ``|f_k(x_{i+1}) - f_k(x_i)| / sin(theta_mid)`` over a uniform
    ``theta`` grid, i.e. ``int |f_k'(x)| d theta`` in Stieltjes form.  A jump
    of size ``J`` at ``x_0`` contributes ``J / sqrt(1 - y_0^2)``, which is what
    the T-norm of a distributional derivative gives.
    """
    interval = as_interval(interval)
    theta = np.linspace(0.0, np.pi, int(quad_points) + 1)
    vals = sample(f_k, map_to_interval(interval, np.cos(theta)))
    mid = 0.5 * (theta[1:] + theta[:-1])
    return float(np.sum(np.abs(np.diff(vals)) / np.sin(mid)))


@dataclass(frozen=True)
class DecayBoundCheck:
    k: int
    V_k: float
    j: np.ndarray
    bound_values: np.ndarray
    coeffs: np.ndarray
    violations: np.ndarray

    @property
    def ok(self) -> bool:
        return self.violations.size == 0


def decay_bound(j: int, k: int, V_k: float, half_width: float) -> float:
    """Right-hand side of the Chebyshev coefficient decay estimate for ``|c_j|``, ``j >= k+1``."""
    s, odd = divmod(k, 2)
    if odd:
        prod = math.prod(j + 2 * i - 1 for i in range(-s, s + 2))
        return half_width ** (2 * s + 2) * 2.0 * V_k / (math.pi * prod)
    prod = math.prod(j + 2 * i for i in range(-s, s + 1))
    return half_width ** (2 * s + 1) * 2.0 * V_k / (math.pi * prod)


def check_decay_bound(exp: ChebyshevExpansion, k: int, V_k: float, rel_tol: float = 1e-9) -> DecayBoundCheck:
    """Compare ``|c_{j,n}|`` with the decay bound for ``j = k+1 .. n-1``.

    Indices beyond the expansion's degree are skipped.
    """
    if k < 0:
        raise InvalidArgumentError("k must be >= 0")
    half = exp.interval.width / 2.0
    hi = min(exp.n_quad - 1, exp.degree)
    j = np.arange(k + 1, hi + 1)
    bounds = np.array([decay_bound(int(jj), k, V_k, half) for jj in j])
    c = np.abs(exp.coeffs[j])
    violations = j[c > bounds * (1.0 + rel_tol)]
    return DecayBoundCheck(int(k), float(V_k), j, bounds, c, violations)
