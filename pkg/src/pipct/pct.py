"""Padé-Chebyshev type (PCT) approximants on a single interval.

The Chebyshev series ``sum' c_k T_k(x)`` is the real part of the power series
``sum' c_k z^k`` on the unit circle, ``z = exp(i arccos x)``.  A PCT approximant
is a Padé approximant ``P/Q`` of that power series; its real part approximates
``f``.  The denominator spans the null space of an ``nq x (nq+1)`` Toeplitz
matrix of coefficients, the numerator follows by a lower-triangular product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .chebyshev import ChebyshevExpansion, Interval, map_from_interval
from .errors import InvalidArgumentError, NumericalError, PoleError

NORMALIZE_TOL = 1e-8
TIE_TOL = 1e-12


@dataclass(frozen=True)
class ToeplitzSystem:
    """Homogeneous system ``A q = 0`` with ``A[r, s] = c_{np + r - s + 1}`` (1-based)."""

    matrix: np.ndarray
    np: int
    nq: int

    @property
    def shape(self):
        return self.matrix.shape


class DenominatorSolution(NamedTuple):
    q: np.ndarray
    normalized: bool
    tie: bool
    residual: float


@dataclass(frozen=True, eq=False)
class PCTApproximant:
    """Rational approximant ``Re P(z)/Q(z)`` of orders ``[np/nq]`` on ``interval``.

    Attributes:
        p: numerator coefficients ``p_0..p_np`` (ascending powers of ``z``).
        q: denominator coefficients ``q_0..q_nq``.
        normalized: ``q_0 == 1``; False when ``q_0`` was too small to divide by.
        tie: the null space of the Toeplitz matrix was found to be more than 1-D.
        residual: ``||A q||_2`` of the accepted denominator (0 for a prescribed one).
        scale: ``max |c_{k,n}|`` of the expansion the approximant was built from.
    """

    interval: Interval
    n_quad: int
    np: int
    nq: int
    p: np.ndarray
    q: np.ndarray
    normalized: bool = True
    tie: bool = False
    residual: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        q = np.array(self.q, dtype=float)
        if not self.np >= self.nq >= 0:
            raise InvalidArgumentError(f"require np >= nq >= 0, got [{self.np}/{self.nq}]")
        if p.shape != (self.np + 1,) or q.shape != (self.nq + 1,):
            raise InvalidArgumentError("coefficient vector lengths must be np+1 and nq+1")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
            raise InvalidArgumentError("coefficients must be finite")
        if not np.any(q != 0):
            raise InvalidArgumentError("denominator is identically zero")
        p.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __call__(self, x):
        return eval_pct(self, x)

    def denominator_on_circle(self, theta):
        return np.polynomial.polynomial.polyval(np.exp(1j * np.asarray(theta)), self.q)


def build_toeplitz(exp: ChebyshevExpansion, np_: int, nq: int) -> ToeplitzSystem:
    if not np_ >= nq >= 1:
        raise InvalidArgumentError(f"require np >= nq >= 1, got [{np_}/{nq}]")
    if exp.degree < np_ + nq:
        raise InvalidArgumentError(
            f"[{np_}/{nq}] needs coefficients up to index {np_ + nq}, expansion has {exp.degree}"
        )
    r = np.arange(1, nq + 1)[:, None]
    s = np.arange(1, nq + 2)[None, :]
    return ToeplitzSystem(exp.coeffs[np_ + r - s + 1], int(np_), int(nq))


def solve_denominator(sys: ToeplitzSystem) -> DenominatorSolution:
    """Right singular vector of the smallest singular value of the Toeplitz matrix.

    The sign is fixed so that the first nonzero entry is positive, then the
    vector is rescaled to ``q_0 = 1`` unless ``|q_0| <= 1e-8 max|q|``, in
    which case it is returned with unit norm and ``normalized=False``.
    """
    A = sys.matrix
    nq = sys.nq
    if A.shape != (nq, nq + 1):
        raise InvalidArgumentError(f"expected a {nq}x{nq + 1} matrix, got {A.shape}")
    try:
        _, sigma, vh = np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc
    q = vh[-1].copy()
    nz = np.flatnonzero(np.abs(q) > 0)
    if nz.size and q[nz[0]] < 0:
        q = -q
    # the (nq+1)-th singular value is structurally zero; a tie means rank < nq
    tie = bool(sigma[-1] <= TIE_TOL * sigma[0]) if sigma[0] > 0 else True
    normalized = bool(abs(q[0]) > NORMALIZE_TOL * np.max(np.abs(q)))
    if normalized:
        q = q / q[0]
    residual = float(np.linalg.norm(A @ q))
    return DenominatorSolution(q, normalized, tie, residual)


def residual_ok(sys: ToeplitzSystem, q: np.ndarray, tol: float = 1e-10) -> bool:
    """Relative residual test ``||A q|| <= tol (1 + ||A||_F) ||q||``."""
    A = sys.matrix
    return bool(np.linalg.norm(A @ q) <= tol * (1.0 + np.linalg.norm(A)) * np.linalg.norm(q))


def numerator_matrix(exp: ChebyshevExpansion, np_: int, nq: int) -> np.ndarray:
    """Lower-triangular ``(np+1) x (nq+1)`` matrix with ``c_0/2`` on the diagonal."""
    if exp.degree < np_:
        raise InvalidArgumentError(f"numerator of degree {np_} needs {np_ + 1} coefficients")
    c = np.array(exp.coeffs[: np_ + 1])
    c[0] *= 0.5
    r = np.arange(np_ + 1)[:, None]
    s = np.arange(nq + 1)[None, :]
    idx = r - s
    return np.where(idx >= 0, c[np.clip(idx, 0, None)], 0.0)


def compute_numerator(exp: ChebyshevExpansion, q, np_: int, nq: int) -> np.ndarray:
    """``p_r = sum_{s <= min(r, nq)} q_s c_{r-s}`` with the leading coefficient halved."""
    q = np.asarray(q, dtype=float)
    if q.shape != (nq + 1,):
        raise InvalidArgumentError(f"denominator must have {nq + 1} entries")
    if exp.degree < np_:
        raise InvalidArgumentError(f"numerator of degree {np_} needs {np_ + 1} coefficients")
    c = np.array(exp.coeffs[: np_ + 1])
    c[0] *= 0.5
    return np.convolve(c, q)[: np_ + 1]


def build_pct(
    exp: ChebyshevExpansion, np_: int, nq: int, q: Optional[np.ndarray] = None
) -> PCTApproximant:
    """Build the ``[np/nq]`` PCT approximant from an expansion.

    Passing ``q`` skips the Toeplitz solve and uses the given denominator; with
    ``q = (1, 0, ..., 0)`` the result reduces to the truncated series of degree ``np``.
    """
    scale = float(np.max(np.abs(exp.coeffs)))
    if q is None:
        sol = solve_denominator(build_toeplitz(exp, np_, nq))
        q_vec, normalized, tie, residual = sol
    else:
        if not np_ >= nq >= 0:
            raise InvalidArgumentError(f"require np >= nq >= 0, got [{np_}/{nq}]")
        q_vec = np.asarray(q, dtype=float)
        normalized, tie, residual = bool(q_vec[0] == 1.0), False, 0.0
    p = compute_numerator(exp, q_vec, np_, nq)
    return PCTApproximant(
        exp.interval, exp.n_quad, int(np_), int(nq), p, q_vec,
        normalized=normalized, tie=tie, residual=residual, scale=scale,
    )


def eval_pct(r: PCTApproximant, x):
    """Evaluate ``Re P(z)/Q(z)`` at ``z = exp(i arccos G^{-1}(x))``.

    Large but finite values near poles are returned as-is; only an exactly
    vanishing denominator raises :class:`PoleError`.
    """
    xi = map_from_interval(r.interval, x)
    z = np.exp(1j * np.arccos(xi))
    num = np.polynomial.polynomial.polyval(z, r.p)
    den = np.polynomial.polynomial.polyval(z, r.q)
    if np.any(den == 0):
        raise PoleError("denominator vanishes at an evaluation point")
    out = (num / den).real
    return float(out) if np.ndim(out) == 0 else out


def collinearity_angle(u, v) -> float:
    """Angle in ``[0, pi/2]`` between the lines spanned by ``u`` and ``v``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    if u @ v < 0:
        v = -v
    # chord form stays accurate for tiny angles, unlike arccos of the dot product
    return float(2.0 * np.arcsin(min(1.0, np.linalg.norm(u - v) / 2.0)))


def flip_angle(exp: ChebyshevExpansion, nq: int, j: int) -> float:
    """Angle between ``q`` of order ``[(n-j-1)/nq]`` and the reversed ``q`` of order ``[(n+j)/nq]``.

    Aliasing makes the two Toeplitz matrices row/column reversals of each
    other (up to sign), so the null vectors agree up to reversal whenever the
    null space is one-dimensional.
    """
    n = exp.n_quad
    if not 0 <= j <= n - nq - 1:
        raise InvalidArgumentError(f"j must lie in [0, {n - nq - 1}]")
    lo = solve_denominator(build_toeplitz(exp, n - j - 1, nq))
    hi = solve_denominator(build_toeplitz(exp, n + j, nq))
    return collinearity_angle(lo.q, hi.q[::-1])
