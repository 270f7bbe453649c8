"""Exact solutions of the radial system linearized about ``(a, 0)``.

The linear system is

    (x^2 a)_t + (x^2 b)_x = 0,
    (x^2 b)_t + (x^2 a / 3)_x = 2 x a / 3,

and is solved in closed form by superposing waves travelling with speeds
``+-1/sqrt(3)``.  Initial data are extended to negative radii (``a0`` even,
``b0`` odd) and enter through the even primitives

    A0(x) = int_0^x s a0(s) ds,    B0(x) = int_0^x b0(s) ds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate

SQRT3 = math.sqrt(3.0)
# off-shock classification tolerance on the line equations
LINE_TOL = 1e-12
# smallest radius at which the closed form is evaluated
X_MIN = 1e-10


@dataclass(frozen=True)
class PiecewiseData:
    """Piecewise-linear radial data ``a0``, ``b0`` on ``x >= 0``.

    ``breakpoints`` starts at 0; segment ``k`` covers
    ``(breakpoints[k], breakpoints[k+1]]`` (the last one is unbounded) and
    carries ``a0(x) = a_coef[k][0] + a_coef[k][1] x`` and likewise for ``b0``.
    At a breakpoint the left limit is used, except at ``x = 0`` which belongs
    to the first segment.
    """

    breakpoints: tuple[float, ...]
    a_coef: tuple[tuple[float, float], ...]
    b_coef: tuple[tuple[float, float], ...]
    _A_const: np.ndarray = field(init=False, repr=False, compare=False)
    _B_const: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bp = tuple(float(x) for x in self.breakpoints)
        ac = tuple((float(c[0]), float(c[1]) if len(c) > 1 else 0.0) for c in self.a_coef)
        bc = tuple((float(c[0]), float(c[1]) if len(c) > 1 else 0.0) for c in self.b_coef)
        if not bp or bp[0] != 0.0:
            raise ValueError("breakpoints must start at 0")
        if any(x1 <= x0 for x0, x1 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(ac) != len(bp) or len(bc) != len(bp):
            raise ValueError("need one coefficient pair per segment")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "a_coef", ac)
        object.__setattr__(self, "b_coef", bc)
        self._check_admissible()
        self._build_primitives()

    @classmethod
    def constant(cls, a: float, b: float = 0.0) -> "PiecewiseData":
        return cls((0.0,), ((a, 0.0),), ((b, 0.0),))

    @classmethod
    def steps(cls, breakpoints: Sequence[float], a_values: Sequence[float], b_values: Sequence[float]):
        """Piecewise-constant data."""
        return cls(
            tuple(breakpoints),
            tuple((v, 0.0) for v in a_values),
            tuple((v, 0.0) for v in b_values),
        )

    # -- evaluation on x >= 0 ---------------------------------------------

    def _segment(self, x: np.ndarray) -> np.ndarray:
        # (x_k, x_{k+1}] -> k, with x = 0 in segment 0
        k = np.searchsorted(np.asarray(self.breakpoints), x, side="left") - 1
        return np.maximum(k, 0)

    def _eval(self, coef, x):
        x = np.asarray(x, dtype=float)
        c = np.asarray(coef)[self._segment(x)]
        return c[..., 0] + c[..., 1] * x

    def a0(self, x):
        return self._eval(self.a_coef, x)

    def b0(self, x):
        return self._eval(self.b_coef, x)

    # -- extensions to the whole line -------------------------------------

    def a_even(self, x):
        return self.a0(np.abs(x))

    def b_odd(self, x):
        x = np.asarray(x, dtype=float)
        return np.sign(x) * self.b0(np.abs(x))

    def A0(self, x):
        """``int_0^x s a0(s) ds`` (even in ``x``), exact per segment."""
        x = np.abs(np.asarray(x, dtype=float))
        k = self._segment(x)
        c = np.asarray(self.a_coef)[k]
        x0 = np.asarray(self.breakpoints)[k]
        return self._A_const[k] + _mom1(c, x) - _mom1(c, x0)

    def B0(self, x):
        """``int_0^x b0(s) ds`` (even in ``x``), exact per segment."""
        x = np.abs(np.asarray(x, dtype=float))
        k = self._segment(x)
        c = np.asarray(self.b_coef)[k]
        x0 = np.asarray(self.breakpoints)[k]
        return self._B_const[k] + _mom0(c, x) - _mom0(c, x0)

    def primitive_differences(self, x, s):
        """``A0(x+s) - A0(|x-s|)`` and the same for ``B0``.

        When both ends lie in one segment the differences are factored
        through ``(x+s) - |x-s| = 2 min(x, s)`` and ``(x+s) + |x-s| = 2 max(x, s)``
        so that nothing cancels for ``x`` much smaller or larger than ``s``.
        """
        x, s = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(s, dtype=float))
        u = x + s
        w = np.abs(x - s)
        dA = self.A0(u) - self.A0(w)
        dB = self.B0(u) - self.B0(w)
        k = self._segment(u)
        same = k == self._segment(w)
        if np.any(same):
            diff = 2.0 * np.minimum(x, s)
            total = 2.0 * np.maximum(x, s)
            ca = np.asarray(self.a_coef)[k]
            cb = np.asarray(self.b_coef)[k]
            cubic = diff * (u * u + u * w + w * w)
            fA = ca[..., 0] * diff * total / 2.0 + ca[..., 1] * cubic / 3.0
            fB = cb[..., 0] * diff + cb[..., 1] * diff * total / 2.0
            dA = np.where(same, fA, dA)
            dB = np.where(same, fB, dB)
        return dA, dB

    def _build_primitives(self):
        bp = np.asarray(self.breakpoints)
        ac = np.asarray(self.a_coef)
        bc = np.asarray(self.b_coef)
        A = np.zeros(len(bp))
        B = np.zeros(len(bp))
        for k in range(1, len(bp)):
            A[k] = A[k - 1] + _mom1(ac[k - 1], bp[k]) - _mom1(ac[k - 1], bp[k - 1])
            B[k] = B[k - 1] + _mom0(bc[k - 1], bp[k]) - _mom0(bc[k - 1], bp[k - 1])
        object.__setattr__(self, "_A_const", A)
        object.__setattr__(self, "_B_const", B)

    def _check_admissible(self):
        # linear pieces: |b0| < a0 on a segment iff it holds at both ends
        bp = list(self.breakpoints)
        for k, (ca, cb) in enumerate(zip(self.a_coef, self.b_coef)):
            lo = bp[k]
            hi = bp[k + 1] if k + 1 < len(bp) else None
            ends = [lo] if hi is None else [lo, hi]
            for x in ends:
                a = ca[0] + ca[1] * x
                b = cb[0] + cb[1] * x
                if not abs(b) < a:
                    raise ValueError(f"|b0| < a0 violated at x={x} in segment {k}")
            if hi is None and (ca[1] < 0 or abs(cb[1]) > ca[1]):
                raise ValueError("last segment must keep |b0| < a0 as x -> infinity")

    @property
    def smooth(self) -> bool:
        """True when the even/odd extensions are C^2 on the whole line."""
        ac, bc = self.a_coef, self.b_coef
        if ac[0][1] != 0.0 or bc[0][0] != 0.0:
            return False
        return all(ac[k] == ac[0] and bc[k] == bc[0] for k in range(len(ac)))

    def discontinuities(self) -> list[float]:
        """Radii where the extended data lose smoothness (value or slope jump)."""
        out = []
        if self.a_coef[0][1] != 0.0 or self.b_coef[0][0] != 0.0:
            out.append(0.0)
        for k in range(1, len(self.breakpoints)):
            if self.a_coef[k] != self.a_coef[k - 1] or self.b_coef[k] != self.b_coef[k - 1]:
                out.append(self.breakpoints[k])
        return out


def _mom0(c, x):
    c = np.asarray(c)
    return c[..., 0] * x + 0.5 * c[..., 1] * x * x


def _mom1(c, x):
    c = np.asarray(c)
    return 0.5 * c[..., 0] * x * x + c[..., 1] * x**3 / 3.0


class Primitives(NamedTuple):
    A0: Callable
    B0: Callable


def build_primitives(data: PiecewiseData) -> Primitives:
    """Even primitives ``A0``, ``B0`` of ``data`` (exact per segment)."""
    return Primitives(data.A0, data.B0)


@dataclass(frozen=True)
class SmoothData:
    """Smooth data given by vectorized callables on ``x >= 0``.

    ``a0`` must extend to an even and ``b0`` to an odd ``C^2`` function.  The
    primitives come from ``A_fn``/``B_fn`` when given, otherwise from adaptive
    quadrature (slow; one integral per point).
    """

    a_fn: Callable[[np.ndarray], np.ndarray]
    b_fn: Callable[[np.ndarray], np.ndarray]
    A_fn: Callable[[np.ndarray], np.ndarray] | None = None
    B_fn: Callable[[np.ndarray], np.ndarray] | None = None
    smooth: bool = True

    def a0(self, x):
        x = np.asarray(x, dtype=float)
        return self.a_fn(x) * np.ones_like(x)

    def b0(self, x):
        x = np.asarray(x, dtype=float)
        return self.b_fn(x) * np.ones_like(x)

    def a_even(self, x):
        return self.a0(np.abs(x))

    def b_odd(self, x):
        x = np.asarray(x, dtype=float)
        return np.sign(x) * self.b0(np.abs(x))

    def A0(self, x):
        x = np.abs(np.asarray(x, dtype=float))
        if self.A_fn is not None:
            return self.A_fn(x) * np.ones_like(x)
        return np.vectorize(lambda y: _quad(lambda s: s * float(self.a_fn(s)), y), otypes=[float])(x)

    def B0(self, x):
        x = np.abs(np.asarray(x, dtype=float))
        if self.B_fn is not None:
            return self.B_fn(x) * np.ones_like(x)
        return np.vectorize(lambda y: _quad(lambda s: float(self.b_fn(s)), y), otypes=[float])(x)

    def discontinuities(self) -> list[float]:
        return []


@dataclass(frozen=True)
class PiecewisePV:
    """Piecewise-linear pressure and three-velocity on ``x >= 0``.

    Same segment layout as :class:`PiecewiseData`; ``(a0, b0)`` are obtained
    pointwise through ``u = v / sqrt(1 - v^2)``, so they are not piecewise
    linear and the primitives are integrated numerically per segment.
    """

    breakpoints: tuple[float, ...]
    p_coef: tuple[tuple[float, float], ...]
    v_coef: tuple[tuple[float, float], ...]
    _A_const: np.ndarray = field(init=False, repr=False, compare=False)
    _B_const: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bp = tuple(float(x) for x in self.breakpoints)
        pc = tuple((float(c[0]), float(c[1]) if len(c) > 1 else 0.0) for c in self.p_coef)
        vc = tuple((float(c[0]), float(c[1]) if len(c) > 1 else 0.0) for c in self.v_coef)
        if not bp or bp[0] != 0.0:
            raise ValueError("breakpoints must start at 0")
        if any(x1 <= x0 for x0, x1 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(pc) != len(bp) or len(vc) != len(bp):
            raise ValueError("need one coefficient pair per segment")
        for k in range(len(bp)):
            ends = [bp[k], bp[k + 1]] if k + 1 < len(bp) else [bp[k]]
            for x in ends:
                if not pc[k][0] + pc[k][1] * x > 0.0:
                    raise ValueError(f"p0 > 0 violated at x={x} in segment {k}")
                if not abs(vc[k][0] + vc[k][1] * x) < 1.0:
                    raise ValueError(f"|v0| < 1 violated at x={x} in segment {k}")
        if pc[-1][1] < 0.0 or vc[-1][1] != 0.0:
            raise ValueError("last segment needs non-decreasing p0 and constant v0")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "p_coef", pc)
        object.__setattr__(self, "v_coef", vc)
        A = np.zeros(len(bp))
        B = np.zeros(len(bp))
        for k in range(1, len(bp)):
            A[k] = A[k - 1] + self._seg_quad(k - 1, bp[k - 1], bp[k], moment=1)
            B[k] = B[k - 1] + self._seg_quad(k - 1, bp[k - 1], bp[k], moment=0)
        object.__setattr__(self, "_A_const", A)
        object.__setattr__(self, "_B_const", B)

    def _segment(self, x):
        k = np.searchsorted(np.asarray(self.breakpoints), x, side="left") - 1
        return np.maximum(k, 0)

    def _conserved(self, k, x):
        pc = np.asarray(self.p_coef)[k]
        vc = np.asarray(self.v_coef)[k]
        p = pc[..., 0] + pc[..., 1] * x
        v = vc[..., 0] + vc[..., 1] * x
        u2 = v * v / ((1.0 - v) * (1.0 + v))
        a = p * (3.0 + 4.0 * u2)
        b = 4.0 * p * v * (1.0 + u2)  # 4 p u sqrt(1+u^2) with u sqrt(1+u^2) = v (1+u^2)
        return a, b

    def _seg_quad(self, k, lo, hi, moment):
        def f(s):
            a, b = self._conserved(k, s)
            return s * a if moment else b

        return integrate.quad(f, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)[0]

    def a0(self, x):
        x = np.asarray(x, dtype=float)
        return self._conserved(self._segment(x), x)[0]

    def b0(self, x):
        x = np.asarray(x, dtype=float)
        return self._conserved(self._segment(x), x)[1]

    def a_even(self, x):
        return self.a0(np.abs(x))

    def b_odd(self, x):
        x = np.asarray(x, dtype=float)
        return np.sign(x) * self.b0(np.abs(x))

    def _primitive(self, x, const, moment):
        x = np.abs(np.asarray(x, dtype=float))
        k = self._segment(x)
        bp = np.asarray(self.breakpoints)

        def one(y, kk):
            return const[kk] + self._seg_quad(int(kk), bp[kk], y, moment)

        return np.vectorize(one, otypes=[float])(x, k)

    def A0(self, x):
        return self._primitive(x, self._A_const, 1)

    def B0(self, x):
        return self._primitive(x, self._B_const, 0)

    @property
    def smooth(self) -> bool:
        pc, vc = self.p_coef, self.v_coef
        if pc[0][1] != 0.0 or vc[0][0] != 0.0:
            return False
        return all(pc[k] == pc[0] and vc[k] == vc[0] for k in range(len(pc)))

    def discontinuities(self) -> list[float]:
        out = []
        if self.p_coef[0][1] != 0.0 or self.v_coef[0][0] != 0.0:
            out.append(0.0)
        for k in range(1, len(self.breakpoints)):
            if self.p_coef[k] != self.p_coef[k - 1] or self.v_coef[k] != self.v_coef[k - 1]:
                out.append(self.breakpoints[k])
        return out


def _quad(f, y):
    return integrate.quad(f, 0.0, y, epsabs=1e-14, epsrel=1e-13, limit=200)[0]


def primitive_differences(data, x, s):
    """``A0(x+s) - A0(x-s)`` and ``B0(x+s) - B0(x-s)``.

    Uses the data's own ``primitive_differences`` when it has one (exact
    cancellation-free forms); otherwise subtracts the primitives.
    """
    own = getattr(data, "primitive_differences", None)
    if own is not None:
        return own(x, s)
    return data.A0(x + s) - data.A0(x - s), data.B0(x + s) - data.B0(x - s)


def eval_linear(t, x, data):
    """Evaluate the exact linear solution ``(a, b)`` at ``t >= 0``, ``x > 0``.

    ``t`` and ``x`` broadcast.  Radii below ``1e-10`` are rejected; use
    :func:`boundary_limit` for the behaviour at the origin.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(x < X_MIN):
        raise ValueError(f"x must be >= {X_MIN}; use boundary_limit near the origin")
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    s = t / SQRT3
    xp = x + s
    xm = x - s
    ap, am = data.a_even(xp), data.a_even(xm)
    bp, bm = data.b_odd(xp), data.b_odd(xm)
    dA, dB = primitive_differences(data, x, s)

    a = (xp * ap + xm * am) / (2.0 * x) - SQRT3 / (2.0 * x) * (xp * bp - xm * bm + dB)
    b = (
        -(xp * ap - xm * am) / (2.0 * SQRT3 * x)
        + dA / (2.0 * SQRT3 * x * x)
        + (xp * bp + xm * bm) / (2.0 * x)
        - s * dB / (2.0 * x * x)
    )
    if a.ndim == 0:
        return float(a), float(b)
    return a, b


# -- the imploding spherical shock ------------------------------------------

IMPLODING_SHOCK = PiecewiseData.steps((0.0, 1.0), (1.0, 2.0), (0.0, 0.0))


class RegionState(NamedTuple):
    a: float
    b: float
    region: str  # "omega1" .. "omega4" or "boundary"


def classify_imploding(t: float, x: float) -> str:
    """Region of ``(t, x)`` for the imploding-shock example."""
    s = t / SQRT3
    lines = [1.0 - s, 1.0 + s]
    if s > 1.0:
        lines.append(s - 1.0)
    if any(abs(x - ell) <= LINE_TOL for ell in lines):
        return "boundary"
    if x > 1.0 + s:
        return "omega3"
    if s < 1.0 and x < 1.0 - s:
        return "omega1"
    if s > 1.0 and x < s - 1.0:
        return "omega4"
    return "omega2"


def imploding_region_state(t: float, x: float, region: str) -> tuple[float, float]:
    """Closed-form state of ``region`` evaluated at ``(t, x)`` (no classification)."""
    if region == "omega1":
        return 1.0, 0.0
    if region in ("omega3", "omega4"):
        return 2.0, 0.0
    if region == "omega2":
        return 1.5 + t / (2.0 * SQRT3 * x), (t * t - 3.0 * (1.0 + x * x)) / (12.0 * SQRT3 * x * x)
    raise ValueError(f"unknown region {region!r}")


def imploding_shock_exact(t: float, x: float) -> RegionState:
    """Piecewise exact solution of the imploding-shock example.

    Points on one of the three shock lines are reported with region
    ``"boundary"`` and NaN values.
    """
    if not (t > 0 and x > 0):
        raise ValueError("need t > 0 and x > 0")
    region = classify_imploding(t, x)
    if region == "boundary":
        return RegionState(math.nan, math.nan, region)
    return RegionState(*imploding_region_state(t, x, region), region)


def imploding_shock_lines(t: float) -> dict[str, tuple[float, str, str]]:
    """Shock positions at ``t`` with the regions below and above each line."""
    s = t / SQRT3
    out = {"x3": (1.0 + s, "omega2", "omega3")}
    if s < 1.0:
        out["x1"] = (1.0 - s, "omega1", "omega2")
    elif s > 1.0:
        out["x2"] = (s - 1.0, "omega4", "omega2")
    return out


def rh_speed_linear(left, right) -> float:
    """Jump speed ``(b_r - b_l) / (a_r - a_l)`` of the linear system."""
    da = right[0] - left[0]
    if da == 0:
        raise ZeroDivisionError("degenerate jump: a is continuous")
    return (right[1] - left[1]) / da


def boundary_limit(t: float, data, eps_sequence=(1e-2, 5e-3, 2.5e-3)) -> float:
    """Limit of ``b(t, x)`` as ``x -> 0`` by Richardson extrapolation.

    ``eps_sequence`` must halve at each step.  Refuses (``ValueError``) unless
    the extended data are ``C^2``, since the limit need not exist otherwise.
    """
    if not (t > 0):
        raise ValueError("t must be positive")
    if not getattr(data, "smooth", False):
        raise ValueError(
            "boundary limit needs C^2 data; discontinuities at "
            f"{data.discontinuities()}"
        )
    eps = np.asarray(eps_sequence, dtype=float)
    if len(eps) < 2 or not np.allclose(eps[1:] / eps[:-1], 0.5):
        raise ValueError("eps_sequence must halve at each step")
    row = np.asarray([eval_linear(t, e, data)[1] for e in eps])
    # eliminate eps, eps^2, ... in turn
    for order in range(1, len(eps)):
        factor = 2.0**order
        row = (factor * row[1:] - row[:-1]) / (factor - 1.0)
    return float(row[0])
