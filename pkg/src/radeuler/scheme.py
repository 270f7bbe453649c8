"""Staggered-grid finite-volume scheme for the radial system.

The unknowns ``(a, b)`` live on a staggered space-time lattice over the
trapezoid ``0 <= t <= t*``, ``0 <= x <= x* + lam (t* - t)``.  Odd time levels
hold cell midpoints, even levels hold grid points (including ``x = 0``).  Each
new value comes from a balance over a triangle whose three edge midpoints are
the two old nodes and the new node; the update is :func:`euler_update`.

Levels are indexed ``n = 1 .. 2N+1`` with ``t_n = (n - 1) dt``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Protocol, Sequence

import numpy as np

from .state import DomainError, RADICAND_DUST, check_conserved, closure_excess, pressure


class CFLError(ValueError):
    """Grid parameters violate ``N x* >= t*``."""


class StabilityError(RuntimeError):
    """A computed state left ``|b| < a`` (unreachable for valid input)."""


@dataclass(frozen=True)
class GridSpec:
    t_star: float
    x_star: float
    N: int

    @property
    def dt(self) -> float:
        return self.t_star / (2 * self.N)

    @property
    def M(self) -> int:
        return math.floor(self.x_star * self.N / self.t_star)

    @property
    def dx(self) -> float:
        return self.x_star / self.M

    @property
    def lam(self) -> float:
        lam = self.dx / (2.0 * self.dt)
        # floor() guarantees lam >= 1 exactly; undo rounding below it
        return max(lam, 1.0) if lam > 1.0 - 1e-12 else lam

    @property
    def n_levels(self) -> int:
        return 2 * self.N + 1

    def level_size(self, n: int) -> int:
        return self.M + self.N - (n - 1) // 2

    def level_time(self, n: int) -> float:
        return (n - 1) * self.dt

    def level_positions(self, n: int) -> np.ndarray:
        k = np.arange(self.level_size(n), dtype=float)
        if n % 2 == 1:
            return (k + 0.5) * self.dx
        return k * self.dx

    def outer_edge(self, t: float) -> float:
        """Right boundary of the computational trapezoid at time ``t``."""
        return self.x_star + self.lam * (self.t_star - t)

    def level_index(self, t: float) -> int:
        """Level whose time is nearest ``t``; ties go to the earlier level."""
        k = t / self.dt
        lo = math.floor(k)
        idx = lo if k - lo <= 0.5 else lo + 1
        return min(max(idx, 0), 2 * self.N) + 1


def build_grid(t_star: float, x_star: float, N: int) -> GridSpec:
    if not (t_star > 0 and x_star > 0):
        raise ValueError("t_star and x_star must be positive")
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    if N * x_star < t_star:
        raise CFLError(f"N * x_star = {N * x_star} < t_star = {t_star}")
    grid = GridSpec(float(t_star), float(x_star), N)
    if grid.M < 1:
        raise CFLError("M = floor(x_star N / t_star) must be at least 1")
    return grid


@dataclass
class Level:
    """One time level of the staggered grid."""

    n: int
    t: float
    x: np.ndarray
    a: np.ndarray
    b: np.ndarray

    @property
    def p(self) -> np.ndarray:
        return pressure(self.a, self.b)

    def __len__(self) -> int:
        return len(self.a)


def euler_update(a_minus, b_minus, a_plus, b_plus, x_bar, dx, lam, *, check=True):
    """New state at the apex of one balance triangle.

    ``(a_minus, b_minus)`` and ``(a_plus, b_plus)`` sit at ``x_bar -/+ dx/2``
    on the old level; the result sits at ``x_bar`` one half-step later.
    All array arguments broadcast.

    The energy value and the momentum value are the closed-form solutions of
    the two discrete balance laws; the momentum value is the positive root of
    ``b' = xi + eta sqrt(4a'^2 - 3b'^2)``.  The arithmetic is arranged so that
    a constant rest state reproduces itself bit for bit and the reflected
    boundary update yields ``b' = 0`` exactly.
    """
    am = np.asarray(a_minus, dtype=float)
    bm = np.asarray(b_minus, dtype=float)
    ap = np.asarray(a_plus, dtype=float)
    bp = np.asarray(b_plus, dtype=float)
    xb = np.asarray(x_bar, dtype=float)
    if check:
        check_conserved(am, bm)
        check_conserved(ap, bp)
        if np.any(xb < 0.0) or np.any(np.asarray(dx) <= 0.0) or np.any(np.asarray(lam) < 1.0):
            raise DomainError("need x_bar >= 0, dx > 0 and lam >= 1")

    q = 2.0 * xb * dx / (xb * xb + dx * dx / 3.0)
    eta = q / (6.0 * lam)

    # a' = 1/2 (a- + b-/lam)(1 - q/2) + 1/2 (a+ - b+/lam)(1 + q/2)
    lo = am + bm / lam
    hi = ap - bp / lam
    a_new = 0.5 * (lo + hi) + 0.25 * q * (hi - lo)

    # s = xi + 2 eta a'; c = a/3 + g with g = c - a/3 >= 0
    gm = closure_excess(am, bm)
    gp = closure_excess(ap, bp)
    centre = (bm + bp) + ((am - ap) / 3.0 + (gm - gp)) / lam
    source = ((a_new - ap) + (a_new - am)) / 3.0 - gm - gp
    s = 0.5 * centre + 0.25 * q * (bp - bm) + 0.25 * q * source / lam
    xi = s - 2.0 * eta * a_new

    w = 1.0 + 3.0 * eta * eta
    rad = 4.0 * a_new * a_new * w - 3.0 * xi * xi
    if np.any(rad < 0.0):
        if np.any(rad < -RADICAND_DUST * a_new * a_new):
            raise DomainError("negative radicand in momentum update")
        rad = np.maximum(rad, 0.0)
    root = np.sqrt(rad)

    # (xi + eta R)/w, or for xi < 0 the conjugate (xi - 2 eta a')(xi + 2 eta a')/(xi - eta R)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (xi + eta * root) / w
        conjugate = (xi - 2.0 * eta * a_new) * (s / (xi - eta * root))
    b_new = np.where(xi >= 0.0, direct, conjugate) + 0.0
    if b_new.ndim == 0:
        return float(a_new), float(b_new)
    return a_new, b_new


def euler_update_terms(a_minus, b_minus, a_plus, b_plus, x_bar, dx, lam):
    """Return ``(a', xi, eta)`` straight from the textbook formulas.

    Used by tests and the verification suite as the reference arrangement.
    """
    from .state import flux_closure

    q = 2.0 * x_bar * dx / (x_bar**2 + dx**2 / 3.0)
    eta = q / (6.0 * lam)
    a_new = 0.5 * (a_minus + b_minus / lam) * (1 - q / 2) + 0.5 * (a_plus - b_plus / lam) * (1 + q / 2)
    cm = flux_closure(a_minus, b_minus)
    cp = flux_closure(a_plus, b_plus)
    xi = (
        0.5 * (b_minus + cm / lam) * (1 - q / 2)
        + 0.5 * (b_plus - cp / lam) * (1 + q / 2)
        - a_new * q / (6.0 * lam)
    )
    return a_new, xi, eta


def _apply(update_args, pool: ThreadPoolExecutor | None, workers: int):
    am, bm, ap, bp, xb, dx, lam = update_args
    if pool is None or workers <= 1 or len(am) < 2 * workers:
        return euler_update(am, bm, ap, bp, xb, dx, lam, check=False)
    # elementwise kernel: chunking cannot change any result bit
    bounds = np.linspace(0, len(am), workers + 1).astype(int)
    parts = list(
        pool.map(
            lambda sl: euler_update(am[sl], bm[sl], ap[sl], bp[sl], xb[sl], dx, lam, check=False),
            [slice(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])],
        )
    )
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def step(
    level: Level, grid: GridSpec, pool: ThreadPoolExecutor | None = None, workers: int = 1
) -> Level:
    """Advance one half-step from level ``n`` to ``n + 1``.

    With a ``pool`` the node updates are split into ``workers`` chunks.
    """
    n = level.n
    if n > 2 * grid.N:
        raise ValueError(f"level {n} is already the final level")
    a, b = level.a, level.b
    dx, lam = grid.dx, grid.lam
    if n % 2 == 1:
        # new grid points x_1 = 0 .. x_K; x = 0 uses the mirrored state (a, -b)
        am = np.concatenate((a[:1], a[:-1]))
        bm = np.concatenate((-b[:1], b[:-1]))
        xb = np.arange(len(a), dtype=float) * dx
        a_new, b_new = _apply((am, bm, a, b, xb, dx, lam), pool, workers)
    else:
        xb = (np.arange(len(a) - 1, dtype=float) + 0.5) * dx
        a_new, b_new = _apply((a[:-1], b[:-1], a[1:], b[1:], xb, dx, lam), pool, workers)
    return Level(n + 1, grid.level_time(n + 1), grid.level_positions(n + 1), a_new, b_new)


class InitialData(Protocol):
    """Anything that evaluates ``a0`` and ``b0`` on arrays of radii ``x >= 0``."""

    def a0(self, x: np.ndarray) -> np.ndarray: ...

    def b0(self, x: np.ndarray) -> np.ndarray: ...


def initial_level(data: InitialData, grid: GridSpec) -> Level:
    """Sample the initial data at the cell midpoints of level 1."""
    x = grid.level_positions(1)
    a = np.asarray(data.a0(x), dtype=float) * np.ones_like(x)
    b = np.asarray(data.b0(x), dtype=float) * np.ones_like(x)
    check_conserved(a, b)
    return Level(1, 0.0, x, a, b)


def march(level: Level, grid: GridSpec, threads: int = 1, check: bool = True) -> Iterator[Level]:
    """Yield ``level`` and every following level up to ``t*``."""
    yield level
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while level.n < grid.n_levels:
            level = step(level, grid, pool, threads)
            if check:
                assert_stable(level)
            yield level
    finally:
        if pool is not None:
            pool.shutdown()


def assert_stable(level: Level) -> None:
    if not np.all(np.abs(level.b) < level.a):
        bad = int(np.flatnonzero(~(np.abs(level.b) < level.a))[0])
        raise StabilityError(
            f"level {level.n}: |b| >= a at x={level.x[bad]!r} "
            f"(a={level.a[bad]!r}, b={level.b[bad]!r})"
        )
    if level.n % 2 == 0 and level.b[0] != 0.0:
        raise StabilityError(f"level {level.n}: b(t, 0) = {level.b[0]!r} != 0")


@dataclass
class LevelStats:
    """Per-level extremes collected during a run."""

    t: list[float] = field(default_factory=list)
    p_min: list[float] = field(default_factory=list)
    p_max: list[float] = field(default_factory=list)
    margin_min: list[float] = field(default_factory=list)  # min (a - |b|) / a

    def record(self, level: Level) -> None:
        p = level.p
        self.t.append(level.t)
        self.p_min.append(float(p.min()))
        self.p_max.append(float(p.max()))
        self.margin_min.append(float(((level.a - np.abs(level.b)) / level.a).min()))


@dataclass
class SimulationResult:
    grid: GridSpec
    initial: Level
    final: Level
    snapshots: dict[float, Level]
    stats: LevelStats
    history: list[Level] | None = None
    history_decimation: int = 1


def run(
    initial: InitialData,
    grid: GridSpec,
    snapshot_times: Sequence[float] = (),
    *,
    keep_history: bool = False,
    decimation: int = 1,
    threads: int = 1,
    monitors: Sequence[Callable[[Level], None]] = (),
) -> SimulationResult:
    """March the initial data to ``t*``.

    Snapshots are taken at the level nearest each requested time.  With
    ``keep_history`` every ``decimation``-th level (counting from level 1) is
    retained.  Each of ``monitors`` is called on every level, in order.
    """
    if decimation < 1:
        raise ValueError("decimation must be >= 1")
    wanted: dict[int, list[float]] = {}
    for t in snapshot_times:
        wanted.setdefault(grid.level_index(float(t)), []).append(float(t))

    stats = LevelStats()
    snapshots: dict[float, Level] = {}
    history: list[Level] | None = [] if keep_history else None
    first = initial_level(initial, grid)
    level = first
    for level in march(first, grid, threads):
        stats.record(level)
        for monitor in monitors:
            monitor(level)
        for t in wanted.get(level.n, ()):
            snapshots[t] = level
        if history is not None and (level.n - 1) % decimation == 0:
            history.append(level)
    return SimulationResult(grid, first, level, snapshots, stats, history, decimation)
