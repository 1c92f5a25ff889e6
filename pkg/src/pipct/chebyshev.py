"""Chebyshev points, interval maps and quadrature-based Chebyshev coefficients.

Coefficients are stored with the *raw* leading term ``c_0 = (2/n) sum f``;
the halving that makes the series sum to ``f`` is applied only where the
series is evaluated (here and in the Padé numerator).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EvaluationError, InvalidArgumentError, OutOfDomainError

# relative slack for round-off excursions outside [-1, 1] / [a, b]
CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[a, b]`` with ``a < b``."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise InvalidArgumentError(f"interval endpoints must be finite, got [{a}, {b}]")
        if not a < b:
            raise InvalidArgumentError(f"interval requires a < b, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def contains(self, x, tol: float = CLAMP_TOL) -> np.ndarray:
        slack = tol * self.width
        x = np.asarray(x, dtype=float)
        return (x >= self.a - slack) & (x <= self.b + slack)

    def __iter__(self):
        yield self.a
        yield self.b


def as_interval(interval) -> Interval:
    if isinstance(interval, Interval):
        return interval
    a, b = interval
    return Interval(a, b)


def chebyshev_points(n: int) -> np.ndarray:
    """Return the ``n`` roots of ``T_n``, ``cos((l - 1/2) pi / n)`` for ``l = 1..n``.

    The points are strictly decreasing.
    """
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"number of Chebyshev points must be >= 1, got {n!r}")
    n = int(n)
    return np.cos((np.arange(1, n + 1) - 0.5) * np.pi / n)


def map_to_interval(interval, y):
    """Affine map ``[-1, 1] -> [a, b]``."""
    interval = as_interval(interval)
    y_arr = np.asarray(y, dtype=float)
    if np.any(np.abs(y_arr) > 1.0 + CLAMP_TOL) or np.any(np.isnan(y_arr)):
        raise InvalidArgumentError("reference coordinate must lie in [-1, 1]")
    x = interval.a + interval.width * (y_arr + 1.0) / 2.0
    return float(x) if np.ndim(x) == 0 else x


def map_from_interval(interval, x):
    """Inverse of :func:`map_to_interval`, clamping round-off back onto ``[-1, 1]``."""
    interval = as_interval(interval)
    x_arr = np.asarray(x, dtype=float)
    y = (2.0 * x_arr - interval.a - interval.b) / interval.width
    if np.any(np.abs(y) > 1.0 + CLAMP_TOL) or np.any(np.isnan(y)):
        raise OutOfDomainError(f"point(s) outside [{interval.a}, {interval.b}]")
    y = np.clip(y, -1.0, 1.0)
    return float(y) if np.ndim(y) == 0 else y


def chebyshev_vandermonde(t: np.ndarray, d: int) -> np.ndarray:
    """Rows ``T_0(t) .. T_d(t)`` built by the three-term recurrence, shape ``(d+1, len(t))``."""
    t = np.asarray(t, dtype=float)
    T = np.empty((d + 1, t.size))
    T[0] = 1.0
    if d >= 1:
        T[1] = t
    for k in range(2, d + 1):
        T[k] = 2.0 * t * T[k - 1] - T[k - 2]
    return T


def sample(f: Callable, x: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` on an array, accepting scalar-only or constant-returning callables."""
    x = np.asarray(x, dtype=float)
    try:
        values = np.asarray(f(x), dtype=float)
        if values.shape != x.shape:
            values = np.broadcast_to(values, x.shape).astype(float)
    except (TypeError, ValueError):
        values = np.array([float(f(float(xi))) for xi in x.ravel()]).reshape(x.shape)
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = np.flatnonzero(bad.ravel())[0]
        raise EvaluationError(x.ravel()[i], values.ravel()[i])
    return values


@dataclass(frozen=True, eq=False)
class ChebyshevExpansion:
    """Approximated Chebyshev coefficients ``c_{k,n}``, ``k = 0..d``, on an interval.

    Calling the expansion evaluates the truncated series (see :func:`eval_truncated`).
    """

    interval: Interval
    n_quad: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        coeffs.setflags(write=False)
        if coeffs.ndim != 1 or coeffs.size < 1:
            raise InvalidArgumentError("coefficient vector must be 1-D and non-empty")
        if coeffs.size - 1 > 2 * self.n_quad - 1:
            raise InvalidArgumentError("degree exceeds 2*n_quad - 1")
        if not np.all(np.isfinite(coeffs)):
            raise InvalidArgumentError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def truncated(self, d: int) -> "ChebyshevExpansion":
        if d > self.degree:
            raise InvalidArgumentError(f"cannot truncate degree {self.degree} expansion to {d}")
        return ChebyshevExpansion(self.interval, self.n_quad, self.coeffs[: d + 1])

    def __call__(self, x):
        return eval_truncated(self, x)


def compute_coeffs(f: Callable, interval, n_quad: int, d: int) -> ChebyshevExpansion:
    """Approximate the first ``d + 1`` Chebyshev coefficients of ``f`` on ``interval``.

    Uses the ``n_quad``-point Chebyshev (Gauss) rule,
    ``c_{k,n} = (2/n) sum_l f(G(t_l)) T_k(t_l)``, where ``G`` maps ``[-1, 1]``
    onto the interval.

    Raises:
        InvalidArgumentError: if ``d > 2 n_quad - 1`` or ``d < 0``.
        EvaluationError: if ``f`` is not finite at one of the mapped nodes.
    """
    interval = as_interval(interval)
    t = chebyshev_points(n_quad)
    if int(d) != d or d < 0:
        raise InvalidArgumentError(f"degree must be a nonnegative integer, got {d!r}")
    d = int(d)
    if d > 2 * n_quad - 1:
        raise InvalidArgumentError(
            f"degree {d} exceeds 2*n_quad - 1 = {2 * n_quad - 1}; higher indices are aliased"
        )
    values = sample(f, map_to_interval(interval, t))
    coeffs = (2.0 / n_quad) * (chebyshev_vandermonde(t, d) @ values)
    return ChebyshevExpansion(interval, int(n_quad), coeffs)


def clenshaw(coeffs: np.ndarray, y):
    """Evaluate ``c_0/2 + sum_{k>=1} c_k T_k(y)`` by backward recurrence."""
    y = np.asarray(y, dtype=float)
    b1 = np.zeros_like(y)
    b2 = np.zeros_like(y)
    for c in coeffs[:0:-1]:
        b1, b2 = 2.0 * y * b1 - b2 + c, b1
    return y * b1 - b2 + 0.5 * coeffs[0]


def eval_truncated(exp: ChebyshevExpansion, x):
    """Evaluate the truncated series ``C_{d,n}[f]`` at ``x`` in ``exp.interval``."""
    y = map_from_interval(exp.interval, x)
    out = clenshaw(exp.coeffs, y)
    return float(out) if np.ndim(out) == 0 else out
