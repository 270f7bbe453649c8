"""The four reference problems and the measurements taken on them.

Each ``measure_*`` function runs one problem at a given resolution and
returns the numbers the acceptance suite, the CLI report and the scripts
compare against published values.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.polynomial import Polynomial

from .diagnostics import (
    OriginPeakMonitor,
    detect_shock,
    entropy_report,
    self_similarity_error,
    shock_admissible,
    shock_arrival,
    shock_speed,
    track_shock,
)
from .linear import PiecewiseData, SmoothData, eval_linear
from .scheme import GridSpec, SimulationResult, build_grid, initial_level, march, run
from .state import ConservedState, velocity

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Preset:
    name: str
    data: PiecewiseData
    t_star: float
    x_star: float
    description: str


PRESETS: dict[str, Preset] = {
    "example1": Preset(
        "example1", PiecewiseData.constant(3.0, 0.0), 1.0, 1.0, "gas at rest, p = 1"
    ),
    "example2": Preset(
        "example2",
        PiecewiseData.constant(7.0, 4.0 * SQRT2),
        1.0,
        1.0,
        "uniform outflow p = 1, u = 1 (rarefaction at the origin)",
    ),
    "example3": Preset(
        "example3",
        PiecewiseData.constant(7.0, -4.0 * SQRT2),
        1.0,
        1.0,
        "uniform inflow p = 1, u = -1 (shock reflected from the origin)",
    ),
    "example4": Preset(
        "example4",
        # p0 = 1 on [0, 1], 0.1 beyond, v0 = 0  ->  a0 = 3 p0, b0 = 0
        PiecewiseData.steps((0.0, 1.0), (3.0, 0.3), (0.0, 0.0)),
        5.0,
        2.0,
        "spherical bubble, pressure ratio 10",
    ),
}


def run_preset(name: str, N: int, snapshot_times=(), **kwargs) -> SimulationResult:
    pre = PRESETS[name]
    return run(pre.data, build_grid(pre.t_star, pre.x_star, N), snapshot_times, **kwargs)


@dataclass
class Measurement:
    preset: str
    N: int
    values: dict[str, Any] = field(default_factory=dict)
    runtime: float = 0.0


def _inner_region(level, zeta_max=0.25):
    m = (level.x > 0) & (level.x <= zeta_max * level.t)
    return level.p[m], velocity(level.a[m], level.b[m])


def measure_stationary(N: int = 200, a0: float = 3.0) -> Measurement:
    t0 = time.perf_counter()
    res = run(PiecewiseData.constant(a0, 0.0), build_grid(1.0, 1.0, N))
    out = Measurement("example1", N, runtime=time.perf_counter() - t0)
    f, i = res.final, res.initial
    out.values = {
        "max_abs_drift_a": float(np.max(np.abs(f.a - a0))),
        "max_abs_drift_b": float(np.max(np.abs(f.b))),
        "identical_to_initial": bool(
            np.array_equal(f.a, i.a[: len(f.a)]) and np.array_equal(f.b, i.b[: len(f.b)])
        ),
        "min_margin": min(res.stats.margin_min),
    }
    return out


def measure_rarefaction(N: int) -> Measurement:
    """Example 2: pressure and velocity on the inner constant region at t = 1."""
    t0 = time.perf_counter()
    res = run_preset("example2", N, [0.5, 1.0])
    out = Measurement("example2", N, runtime=time.perf_counter() - t0)
    p, v = _inner_region(res.final)
    out.values = {
        "inner_pressure": float(np.median(p)),
        "inner_max_abs_v": float(np.max(np.abs(v))),
        "self_similarity": self_similarity_error(res.snapshots[0.5], res.snapshots[1.0]),
        "min_margin": min(res.stats.margin_min),
        "min_pressure": min(res.stats.p_min),
    }
    return out


SHOCK_TIMES = tuple(round(0.2 + 0.05 * k, 10) for k in range(17))  # 0.2 .. 1.0


def measure_shock(N: int) -> Measurement:
    """Example 3: inner pressure, shock slope over t in [0.2, 1], admissibility."""
    t0 = time.perf_counter()
    res = run_preset("example3", N, SHOCK_TIMES + (0.5,))
    out = Measurement("example3", N, runtime=time.perf_counter() - t0)
    track = track_shock({t: res.snapshots[t] for t in SHOCK_TIMES})
    speed = shock_speed(track)
    final = res.final
    p, v = _inner_region(final)
    pos = detect_shock(final)
    offset = 10 * res.grid.dx
    il = int(np.searchsorted(final.x, pos - offset))
    ir = int(np.searchsorted(final.x, pos + offset))
    left = ConservedState(float(final.a[il]), float(final.b[il]))
    right = ConservedState(float(final.a[ir]), float(final.b[ir]))
    out.values = {
        "inner_pressure": float(np.median(p)),
        "inner_max_abs_v": float(np.max(np.abs(v))),
        "shock_speed": speed,
        "fit_residual": track.fit_residual,
        "shock_position_t1": pos,
        "admissible": shock_admissible(left, right),
        "self_similarity": self_similarity_error(res.snapshots[0.5], res.snapshots[1.0]),
        "min_margin": min(res.stats.margin_min),
        "min_pressure": min(res.stats.p_min),
    }
    return out


BUBBLE_TRACK_TIMES = tuple(round(3.0 + 0.02 * k, 10) for k in range(71))  # 3.0 .. 4.4


def measure_bubble(N: int = 1500) -> Measurement:
    """Example 4: arrival of the inward shock at the origin and the pressure peak."""
    t0 = time.perf_counter()
    peak = OriginPeakMonitor(t_window=(4.0, 4.4), x_max=0.05)
    res = run_preset("example4", N, BUBBLE_TRACK_TIMES, monitors=[peak])
    out = Measurement("example4", N, runtime=time.perf_counter() - t0)
    dx = res.grid.dx
    track = track_shock(
        {t: res.snapshots[t] for t in BUBBLE_TRACK_TIMES},
        (0.0, 1.3),
        follow=0.05,
        stop_below=2 * dx,
        allow_loss=True,
    )
    arrival = shock_arrival(track, 2 * dx)
    out.values = {
        "arrival_first_below_2dx": arrival.first_below,
        "arrival_extrapolated": arrival.extrapolated,
        "track_lost_at": track.lost_at,
        "peak_pressure": peak.peak_p,
        "peak_time": peak.peak_t,
        "peak_x": peak.peak_x,
        "baseline_boundary_pressure": peak.baseline,
        "peak_ratio": peak.ratio,
        "min_margin": min(res.stats.margin_min),
        "min_pressure": min(res.stats.p_min),
    }
    return out


def measure_entropy(name: str, N: int) -> dict[str, float]:
    pre = PRESETS[name]
    grid = build_grid(pre.t_star, pre.x_star, N)
    rep = entropy_report(march(initial_level(pre.data, grid), grid), grid)
    return {
        "min_value": rep.min_value,
        "max_excess": rep.max_excess,
        "argmin_x": rep.argmin_x,
        "argmin_t": rep.argmin_t,
    }


# -- near-linear validation ----------------------------------------------------


def bump_data(base: float = 3.0, eps: float = 1e-3, centre: float = 0.5, width: float = 0.2) -> SmoothData:
    """``a0 = base (1 + eps phi)``, ``b0 = base eps phi / 2`` with a compact C^3 bump.

    ``phi(x) = (1 - ((x - centre) / width)^2)^4`` inside the support, zero
    outside; the primitives are exact polynomial antiderivatives.
    """
    r = Polynomial([-centre / width, 1.0 / width])
    phi = (1.0 - r * r) ** 4
    lo, hi = centre - width, centre + width
    mom1 = (Polynomial([0.0, 1.0]) * phi).integ()
    mom0 = phi.integ()

    def bump(x):
        return np.where((x > lo) & (x < hi), phi(x), 0.0)

    def clipped(poly, x):
        return poly(np.clip(x, lo, hi)) - poly(lo)

    return SmoothData(
        a_fn=lambda x: base * (1.0 + eps * bump(x)),
        b_fn=lambda x: 0.5 * base * eps * bump(x),
        A_fn=lambda x: base * (0.5 * x * x + eps * clipped(mom1, x)),
        B_fn=lambda x: 0.5 * base * eps * clipped(mom0, x),
    )


def linear_regime_error(N: int, t_star: float = 0.3, eps: float = 1e-3) -> float:
    """Scheme vs exact linear solution at ``t*`` for a small smooth bump.

    Returns the mean absolute deviation of ``(a, b)`` over the final level,
    divided by the perturbation size ``3 eps``.
    """
    data = bump_data(eps=eps)
    grid = build_grid(t_star, 1.0, N)
    final = run(data, grid).final
    x = final.x
    aL, bL = eval_linear(final.t, x, data)
    err = np.mean(np.abs(final.a - aL)) + np.mean(np.abs(final.b - bL))
    return float(err / (3.0 * eps))


def grid_for(name: str, N: int) -> GridSpec:
    pre = PRESETS[name]
    return build_grid(pre.t_star, pre.x_star, N)
