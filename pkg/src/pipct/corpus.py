"""Registry of test functions with known singularities and closed-form derivatives."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import iv

from .chebyshev import Interval
from .errors import InvalidArgumentError

JUMP = "jump"
POINT = "point"


@dataclass(frozen=True)
class CorpusFunction:
    """A test function on an interval.

    Attributes:
        derivatives: closed-form derivatives keyed by order.
        t_norms: known values of ``V_k = ||f^{(k)}||_T`` keyed by ``k`` where the
            T-norm needs a distributional derivative (or has a closed form).
    """

    id: str
    definition: Callable
    interval: Interval
    known_singularities: tuple = ()
    derivatives: dict = field(default_factory=dict)
    t_norms: dict = field(default_factory=dict)
    description: str = ""

    def __call__(self, x):
        return self.definition(x)

    def __post_init__(self):
        for loc, kind in self.known_singularities:
            if kind not in (JUMP, POINT):
                raise InvalidArgumentError(f"unknown singularity kind {kind!r}")
            if not self.interval.a < loc < self.interval.b:
                raise InvalidArgumentError(f"singularity {loc} not inside {self.interval}")

    @property
    def singular_points(self) -> list[float]:
        return [loc for loc, _ in self.known_singularities]


def discondeg(x):
    """Cubic / shifted parabola / square-root pieces: a jump at -0.4, a cusp at 0.4."""
    x = np.asarray(x, dtype=float)
    out = np.where(
        x < -0.4,
        x**3,
        np.where(x < 0.4, x**2 + 1.0, 1.16 - np.sqrt(np.abs(x - 0.4))),
    )
    return float(out) if out.ndim == 0 else out


def xabsx(x):
    x = np.asarray(x, dtype=float)
    return x * np.abs(x)


def _const(x):
    return np.ones_like(np.asarray(x, dtype=float))


def _sign_shift(x):
    return np.sign(np.asarray(x, dtype=float) - 1.0 / 3.0)


_UNIT = Interval(-1.0, 1.0)

_REGISTRY = {
    "discondeg": CorpusFunction(
        "discondeg", discondeg, _UNIT, ((-0.4, JUMP), (0.4, POINT)),
        description="x^3 | x^2+1 | 1.16-sqrt(x-0.4) with breaks at -0.4 and 0.4",
    ),
    "xabsx": CorpusFunction(
        "xabsx", xabsx, _UNIT, (),
        derivatives={1: lambda x: 2.0 * np.abs(x), 2: lambda x: 2.0 * np.sign(x)},
        # V_2: f'' = 2 sign(x) jumps by 4 at x = 0, where |d theta / dx| = 1
        t_norms={0: 4.0, 1: 2.0 * np.pi, 2: 4.0},
        description="x|x|, C^1 with a jump in f''",
    ),
    "cube": CorpusFunction(
        "cube", lambda x: np.asarray(x, dtype=float) ** 3, _UNIT, (),
        derivatives={
            1: lambda x: 3.0 * np.asarray(x, float) ** 2,
            2: lambda x: 6.0 * np.asarray(x, float),
            3: lambda x: np.full_like(np.asarray(x, float), 6.0),
            4: lambda x: np.zeros_like(np.asarray(x, float)),
        },
        t_norms={0: 1.5 * np.pi, 1: 12.0, 2: 6.0 * np.pi, 3: 0.0},
    ),
    "exp": CorpusFunction(
        "exp", lambda x: np.exp(np.asarray(x, dtype=float)), _UNIT, (),
        derivatives={k: (lambda x: np.exp(np.asarray(x, float))) for k in range(1, 6)},
        # int_0^pi exp(cos theta) d theta
        t_norms={k: float(np.pi * iv(0, 1.0)) for k in range(0, 5)},
    ),
    "const": CorpusFunction(
        "const", _const, _UNIT, (),
        derivatives={k: (lambda x: np.zeros_like(np.asarray(x, float))) for k in range(1, 4)},
        t_norms={k: 0.0 for k in range(0, 3)},
    ),
    "nearpole": CorpusFunction(
        "nearpole", lambda x: 1.0 / (1.1 - np.asarray(x, dtype=float)), _UNIT, (),
        derivatives={1: lambda x: 1.0 / (1.1 - np.asarray(x, float)) ** 2},
        description="1/(1.1-x), analytic on [-1,1] with a real pole just outside",
    ),
    "sign": CorpusFunction("sign", lambda x: np.sign(np.asarray(x, dtype=float)), _UNIT, ((0.0, JUMP),)),
    "sign13": CorpusFunction("sign13", _sign_shift, _UNIT, ((1.0 / 3.0, JUMP),),
                             description="sign(x - 1/3)"),
    "abs": CorpusFunction("abs", lambda x: np.abs(np.asarray(x, dtype=float)), _UNIT, ((0.0, POINT),)),
    "abs13": CorpusFunction("abs13", lambda x: np.abs(np.asarray(x, dtype=float) - 1.0 / 3.0), _UNIT,
                            ((1.0 / 3.0, POINT),), description="|x - 1/3|"),
}


def get(fn_id: str) -> CorpusFunction:
    try:
        return _REGISTRY[fn_id]
    except KeyError:
        raise InvalidArgumentError(f"unknown function id {fn_id!r}; known: {sorted(_REGISTRY)}") from None


def ids() -> list[str]:
    return sorted(_REGISTRY)


def register(cf: CorpusFunction, verify: bool = True) -> CorpusFunction:
    if cf.id in _REGISTRY:
        raise InvalidArgumentError(f"function id {cf.id!r} already registered")
    if verify:
        verify_singularities(cf)
    _REGISTRY[cf.id] = cf
    return cf


def probe_singularity(f: Callable, x0: float, h: float = 1e-7, jump_tol: float = 1e-3, slope_tol: float = 1e-2) -> str | None:
    """Classify ``x0`` by one-sided differences: ``"jump"``, ``"point"`` or None."""
    left, mid, right = (float(v) for v in np.asarray(f(np.array([x0 - h, x0, x0 + h]))))
    if abs(right - left) > jump_tol:
        return JUMP
    # compare one-sided slopes at two scales; a kink keeps them apart
    for step in (1e-3, 1e-5):
        l2, r2 = (float(v) for v in np.asarray(f(np.array([x0 - step, x0 + step]))))
        dl = (mid - l2) / step
        dr = (r2 - mid) / step
        if abs(dr - dl) <= slope_tol:
            return None
    return POINT


def verify_singularities(cf: CorpusFunction) -> None:
    """Check every listed singularity is a discontinuity of ``f`` or ``f'``."""
    for loc, kind in cf.known_singularities:
        found = probe_singularity(cf.definition, loc)
        if found != kind:
            raise InvalidArgumentError(f"{cf.id}: expected a {kind} at {loc}, probe found {found}")


for _cf in _REGISTRY.values():
    verify_singularities(_cf)
