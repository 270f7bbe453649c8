"""Measurements on simulation output.

Shock location and speed, the single-shock admissibility test, per-triangle
entropy production, self-similarity in ``x / t``, the integral energy balance
of a ball of radius ``R``, and the near-origin pressure peak after a shock
reflection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .scheme import GridSpec, Level
from .state import (
    ConservedState,
    entropy_density_from,
    entropy_flux_from,
    to_primitive,
    velocity,
)

# a shock must beat the median adjacent jump in its window by this factor
SHOCK_CONTRAST = 10.0


class NoShockError(ValueError):
    """No significant jump inside the search window."""


# -- shocks --------------------------------------------------------------------


def default_window(level: Level) -> tuple[float, float]:
    """Whole level minus three cells at each end."""
    if len(level.x) < 8:
        return float(level.x[0]), float(level.x[-1])
    return float(level.x[3]), float(level.x[-4])


def detect_shock(snapshot: Level, search_window: tuple[float, float] | None = None) -> float:
    """Midpoint of the adjacent node pair with the largest pressure jump.

    Only pairs with both nodes inside ``search_window`` are considered.
    """
    lo, hi = search_window if search_window is not None else default_window(snapshot)
    x = snapshot.x
    inside = np.flatnonzero((x >= lo) & (x <= hi))
    if len(inside) < 3:
        raise NoShockError(f"fewer than 3 nodes in window [{lo}, {hi}]")
    p = snapshot.p[inside]
    jumps = np.abs(np.diff(p))
    k = int(np.argmax(jumps))
    if jumps[k] == 0.0 or jumps[k] < SHOCK_CONTRAST * np.median(jumps):
        raise NoShockError(
            f"largest jump {jumps[k]:.3e} is not {SHOCK_CONTRAST:g}x the median {np.median(jumps):.3e}"
        )
    j = inside[k]
    return 0.5 * (float(x[j]) + float(x[j + 1]))


@dataclass
class ShockTrack:
    times: list[float] = field(default_factory=list)
    positions: list[float] = field(default_factory=list)
    fitted_speed: float = float("nan")
    fit_residual: float = float("nan")
    lost_at: float | None = None  # first snapshot time where detection failed

    def __len__(self) -> int:
        return len(self.times)


def track_shock(
    snapshots: Mapping[float, Level] | Iterable[Level],
    search_window: tuple[float, float] | None = None,
    *,
    follow: float | None = None,
    stop_below: float | None = None,
    allow_loss: bool = False,
) -> ShockTrack:
    """Detect the shock on each snapshot in time order.

    With ``follow`` the window's upper edge is pulled in to the previous
    position plus ``follow`` (for shocks moving towards the origin).  Tracking
    stops after the first position below ``stop_below``.  With ``allow_loss``
    a failed detection after at least one success ends the track (recorded in
    ``lost_at``) instead of raising.
    """
    levels = snapshots.values() if isinstance(snapshots, Mapping) else snapshots
    track = ShockTrack()
    window = search_window
    for level in sorted(levels, key=lambda lv: lv.t):
        try:
            pos = detect_shock(level, window)
        except NoShockError:
            if not (allow_loss and track.times):
                raise
            track.lost_at = level.t
            break
        track.times.append(level.t)
        track.positions.append(pos)
        if stop_below is not None and pos < stop_below:
            break
        if follow is not None:
            lo = window[0] if window is not None else default_window(level)[0]
            window = (lo, pos + follow)
    return track


def shock_speed(track: ShockTrack, min_points: int = 5) -> float:
    """Least-squares slope of position against time; stores the RMS residual."""
    if len(track) < min_points:
        raise ValueError(f"need at least {min_points} tracked points, got {len(track)}")
    t = np.asarray(track.times)
    x = np.asarray(track.positions)
    (slope, intercept), *_ = np.linalg.lstsq(np.column_stack([t, np.ones_like(t)]), x, rcond=None)
    track.fitted_speed = float(slope)
    track.fit_residual = float(np.sqrt(np.mean((x - slope * t - intercept) ** 2)))
    return track.fitted_speed


class Arrival(NamedTuple):
    first_below: float  # first tracked time with position < threshold (nan if never)
    extrapolated: float  # zero crossing of the line through the last points


def shock_arrival(track: ShockTrack, threshold: float, last: int = 10) -> Arrival:
    """When an inward shock reaches the origin.

    ``extrapolated`` fits a line to the last ``last`` tracked points with
    position at or above ``threshold`` and returns its zero crossing.
    """
    t = np.asarray(track.times)
    x = np.asarray(track.positions)
    below = np.flatnonzero(x < threshold)
    first = float(t[below[0]]) if len(below) else float("nan")
    keep = np.flatnonzero(x >= threshold)[-last:]
    if len(keep) < 2:
        raise ValueError("not enough track points above the threshold to extrapolate")
    slope, intercept = np.polyfit(t[keep], x[keep], 1)
    if slope >= 0:
        raise ValueError("tracked shock is not moving towards the origin")
    return Arrival(first, float(-intercept / slope))


def shock_admissible(left: ConservedState, right: ConservedState) -> bool:
    """Single-shock entropy test: admissible iff ``u_left > u_right``."""
    return bool(to_primitive(left).u > to_primitive(right).u)


# -- entropy -------------------------------------------------------------------


def entropy_production(before: Level, after: Level, grid: GridSpec) -> np.ndarray:
    """Discrete weak-entropy functional on every update triangle.

    For each new node the boundary of its balance triangle is traversed with
    the same cord rules as the scheme, applied to the entropy density
    ``E = p^(3/4) sqrt(1+u^2)`` and flux ``F = p^(3/4) u``.  The value is the
    left-hand side of the weak entropy inequality with the triangle's
    indicator as test function,

        -( integral of x^2 E dx - x^2 F dt  around the triangle ),

    so admissible flow gives values ``<= 0`` and shocks give strictly negative
    ones.  A constant state gives 0 up to rounding.
    """
    if after.n != before.n + 1 or len(after.x) != grid.level_size(after.n):
        raise ValueError("levels are not consecutive levels of this grid")
    E = entropy_density_from(before.a, before.b)
    F = entropy_flux_from(before.a, before.b)
    if before.n % 2 == 1:
        Em = np.concatenate((E[:1], E[:-1]))
        Fm = np.concatenate((-F[:1], F[:-1]))  # mirrored state at x = 0
        Ep, Fp = E, F
    else:
        Em, Fm, Ep, Fp = E[:-1], F[:-1], E[1:], F[1:]
    En = entropy_density_from(after.a, after.b)
    xb = after.x
    dt, dx, lam = grid.dt, grid.dx, grid.lam
    S = xb * xb + dx * dx / 3.0
    top = 4.0 * En * lam * dt * S
    upper = -2.0 * (lam * Ep - Fp) * dt * (S + xb * dx)
    lower = -2.0 * (lam * Em + Fm) * dt * (S - xb * dx)
    return -(top + upper + lower)


@dataclass
class EntropyReport:
    min_value: float
    max_excess: float  # largest positive value (violations of the inequality)
    argmin_x: float
    argmin_t: float


def entropy_report(levels: Iterable[Level], grid: GridSpec) -> EntropyReport:
    """Sweep consecutive levels and summarise the entropy functional."""
    it = iter(levels)
    prev = next(it)
    lo, hi, at = np.inf, -np.inf, (np.nan, np.nan)
    for cur in it:
        e = entropy_production(prev, cur, grid)
        k = int(np.argmin(e))
        if e[k] < lo:
            lo, at = float(e[k]), (float(cur.x[k]), cur.t)
        hi = max(hi, float(e.max()))
        prev = cur
    return EntropyReport(lo, max(hi, 0.0), *at)


# -- self-similarity -------------------------------------------------------------


def self_similarity_error(snap_a: Level, snap_b: Level) -> float:
    """Mean absolute difference of ``p`` plus that of ``v`` in ``zeta = x / t``.

    Both snapshots are linearly interpolated onto the union of their nodes
    inside the common ``zeta`` range; the L1 distance is divided by the length
    of that range.
    """
    if not (snap_a.t > 0 and snap_b.t > 0):
        raise ValueError("snapshots must have t > 0")
    za, zb = snap_a.x / snap_a.t, snap_b.x / snap_b.t
    lo, hi = max(za[0], zb[0]), min(za[-1], zb[-1])
    if not hi > lo:
        raise ValueError("snapshots share no zeta range")
    z = np.union1d(za[(za >= lo) & (za <= hi)], zb[(zb >= lo) & (zb <= hi)])
    z = np.union1d(z, [lo, hi])
    total = 0.0
    for fa, fb in (
        (snap_a.p, snap_b.p),
        (velocity(snap_a.a, snap_a.b), velocity(snap_b.a, snap_b.b)),
    ):
        d = np.abs(np.interp(z, za, fa) - np.interp(z, zb, fb))
        total += np.trapezoid(d, z)
    return float(total / (hi - lo))


# -- energy balance ----------------------------------------------------------------


class EnergyBalance(NamedTuple):
    times: np.ndarray
    integral: np.ndarray  # int_0^R a x^2 dx on every level
    residual: np.ndarray  # d/dt integral + R^2 b(t, R), at interior levels
    normalized: float  # max |residual| / max |integral|


def _ball_energy(level: Level, R: float) -> tuple[float, float]:
    x, a, b = level.x, level.a, level.b
    if R >= x[-1]:
        raise ValueError(f"R = {R} is outside the domain at t = {level.t} (edge {x[-1]})")
    k = np.searchsorted(x, R)
    xs = np.concatenate(([0.0] if x[0] > 0 else [], x[:k], [R]))
    aR = np.interp(R, x, a)
    av = np.concatenate((a[:1] if x[0] > 0 else [], a[:k], [aR]))
    return float(np.trapezoid(av * xs * xs, xs)), float(np.interp(R, x, b))


def energy_balance(levels: Iterable[Level], R: float) -> EnergyBalance:
    """Residual of the integral energy law for the ball of radius ``R``.

    ``levels`` must be consecutive (e.g. the output of
    :func:`radeuler.scheme.march`).  The time derivative is the centred
    difference over two half-steps, so it compares levels of equal parity.
    """
    times, integral, flux = [], [], []
    prev_n = None
    for level in levels:
        if prev_n is not None and level.n != prev_n + 1:
            raise ValueError("energy balance needs consecutive levels")
        prev_n = level.n
        e, bR = _ball_energy(level, R)
        times.append(level.t)
        integral.append(e)
        flux.append(R * R * bR)
    t = np.asarray(times)
    I = np.asarray(integral)
    if len(t) < 3:
        raise ValueError("need at least three levels")
    dIdt = (I[2:] - I[:-2]) / (t[2:] - t[:-2])
    res = dIdt + np.asarray(flux)[1:-1]
    return EnergyBalance(t, I, res, float(np.max(np.abs(res)) / np.max(np.abs(I))))


# -- pressure peak after reflection at the origin ----------------------------------------


@dataclass
class OriginPeakMonitor:
    """Watch the near-origin pressure during a run (use as a ``run`` monitor).

    Records the boundary-node pressure on every level up to ``t_window[0]``
    and, inside ``t_window``, the largest local pressure maximum among nodes
    with ``x < x_max``.
    """

    t_window: tuple[float, float]
    x_max: float
    baseline: float = float("nan")
    peak_p: float = 0.0
    peak_t: float = float("nan")
    peak_x: float = float("nan")

    def __call__(self, level: Level) -> None:
        if level.t <= self.t_window[0]:
            self.baseline = float(level.p[0])
            return
        if level.t > self.t_window[1]:
            return
        m = int(np.searchsorted(level.x, self.x_max))
        p = level.p[: m + 1]
        # local maxima, counting the first node against its right neighbour only
        is_max = np.ones(len(p), dtype=bool)
        is_max[:-1] &= p[:-1] >= p[1:]
        is_max[1:] &= p[1:] >= p[:-1]
        is_max[m:] = False
        if not is_max.any():
            return
        k = int(np.argmax(np.where(is_max, p, -np.inf)))
        if p[k] > self.peak_p:
            self.peak_p, self.peak_t, self.peak_x = float(p[k]), level.t, float(level.x[k])

    @property
    def ratio(self) -> float:
        return self.peak_p / self.baseline
