"""Executable property suites behind ``radeuler verify``.

Each check returns a :class:`PropertyResult`; ``worst_margin`` is signed so
that a positive value means the property held with room to spare and a
non-positive value means it failed.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .linear import (
    IMPLODING_SHOCK,
    SQRT3,
    PiecewiseData,
    SmoothData,
    classify_imploding,
    eval_linear,
    imploding_region_state,
    imploding_shock_lines,
    rh_speed_linear,
)
from .presets import linear_regime_error, measure_stationary
from .scheme import euler_update, euler_update_terms
from .state import (
    ConservedState,
    PrimitiveState,
    flux_closure,
    to_conserved,
    to_primitive,
)

SEED = 20240611
RANDOM_TRIALS = 100_000
ORACLE_TRIALS = 10_000
ORACLE_TOL = 1e-12
LINEAR_TOL = 1e-12


class PropertyResult(NamedTuple):
    name: str
    trials: int
    worst_margin: float
    passed: bool

    def line(self) -> str:
        return f"{self.name}\t{self.trials}\t{self.worst_margin:.6e}\t{'PASS' if self.passed else 'FAIL'}"


def _result(name, trials, margins) -> PropertyResult:
    worst = float(np.min(margins))
    return PropertyResult(name, int(trials), worst, bool(worst > 0.0))


# -- random states ----------------------------------------------------------------


def random_states(rng: np.random.Generator, size: int, p_range=(1e-3, 1e3), u_max=5.0):
    """Conserved states with log-uniform pressure and uniform four-velocity."""
    p = np.exp(rng.uniform(math.log(p_range[0]), math.log(p_range[1]), size))
    u = rng.uniform(-u_max, u_max, size)
    c = to_conserved(PrimitiveState(p, u))
    return np.asarray(c.a), np.asarray(c.b)


def random_updates(rng: np.random.Generator, size: int):
    """Inputs of ``euler_update``: two states, radius, cell width, ratio ``lam``."""
    am, bm = random_states(rng, size, (1e-2, 1e2))
    ap, bp = random_states(rng, size, (1e-2, 1e2))
    dx = 1e-3
    ratio = np.where(rng.random(size) < 0.1, 0.0, rng.uniform(0.5, 200.0, size))
    lam = np.where(rng.random(size) < 0.3, 1.0, rng.uniform(1.0, 4.0, size))
    return am, bm, ap, bp, ratio * dx, dx, lam


def implicit_bisection(a_new, xi, eta, iterations: int = 200):
    """Root of ``beta - xi - eta sqrt(4a'^2 - 3 beta^2)`` on ``[-a', a']``.

    The function is increasing there for ``eta < 1/3``.
    """
    lo = -np.asarray(a_new, dtype=float).copy()
    hi = np.asarray(a_new, dtype=float).copy()
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        g = mid - xi - eta * np.sqrt(np.maximum(4.0 * a_new * a_new - 3.0 * mid * mid, 0.0))
        hi = np.where(g > 0.0, mid, hi)
        lo = np.where(g > 0.0, lo, mid)
    return 0.5 * (lo + hi)


# -- update-step bounds ----------------------------------------------------------------


def check_half_state_bracket(rng, trials=RANDOM_TRIALS) -> list[PropertyResult]:
    """``-(a + b/lam) < b + c/lam < a + b/lam`` and its mirror for the right state."""
    a, b = random_states(rng, trials)
    lam = np.where(rng.random(trials) < 0.3, 1.0, rng.uniform(1.0, 10.0, trials))
    c = flux_closure(a, b)
    minus_mid, minus_edge = b + c / lam, a + b / lam
    plus_mid, plus_edge = b - c / lam, a - b / lam
    return [
        _result("bracket_left_state", trials, np.minimum(minus_edge - minus_mid, minus_edge + minus_mid) / a),
        _result("bracket_right_state", trials, np.minimum(plus_edge - plus_mid, plus_edge + plus_mid) / a),
    ]


def check_momentum_root_bound(rng, trials=RANDOM_TRIALS) -> list[PropertyResult]:
    """For ``-a(1+eta) < xi < a(1-eta)``, ``0 < eta <= 1/3``: radicand > 0, ``|b'| < a``."""
    a = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), trials))
    eta = rng.uniform(0.0, 1.0 / 3.0, trials)
    eta = np.where(eta == 0.0, 1.0 / 3.0, eta)
    frac = rng.uniform(0.0, 1.0, trials)
    frac = np.where(frac == 0.0, 0.5, frac)
    xi = -a * (1.0 + eta) + frac * (2.0 * a)
    inside = (xi > -a * (1.0 + eta)) & (xi < a * (1.0 - eta))
    a, eta, xi = a[inside], eta[inside], xi[inside]
    rad = 4.0 * a * a * (1.0 + 3.0 * eta * eta) - 3.0 * xi * xi
    b_new = (xi + eta * np.sqrt(np.maximum(rad, 0.0))) / (1.0 + 3.0 * eta * eta)
    return [
        _result("momentum_radicand_positive", len(a), rad / (a * a)),
        _result("momentum_root_bound", len(a), (a - np.abs(b_new)) / a),
    ]


def check_eta_range(rng, trials=RANDOM_TRIALS) -> PropertyResult:
    dx = np.exp(rng.uniform(math.log(1e-6), 0.0, trials))
    xb = dx * np.exp(rng.uniform(math.log(1e-6), math.log(1e6), trials))
    xb = np.where(rng.random(trials) < 0.05, 0.0, xb)
    lam = rng.uniform(1.0, 10.0, trials)
    q = 2.0 * xb * dx / (xb * xb + dx * dx / 3.0)
    eta = q / (6.0 * lam)
    return _result("eta_range", trials, np.minimum(eta + 1.0, 1.0 / 3.0 - eta) * (eta >= 0.0))


def check_closed_form(rng, trials=ORACLE_TRIALS) -> list[PropertyResult]:
    """Closed-form ``b'`` against bisection and against the implicit equation."""
    am, bm, ap, bp, xb, dx, lam = random_updates(rng, trials)
    a_new, b_new = euler_update(am, bm, ap, bp, xb, dx, lam)
    a_ref, xi, eta = euler_update_terms(am, bm, ap, bp, xb, dx, lam)
    oracle = implicit_bisection(a_ref, xi, eta)
    diff = np.abs(b_new - oracle) / a_ref
    residual = np.abs(b_new - xi - eta * np.sqrt(4.0 * a_new * a_new - 3.0 * b_new * b_new)) / a_ref
    return [
        _result("closed_form_vs_bisection", trials, ORACLE_TOL - diff),
        _result("implicit_equation_residual", trials, ORACLE_TOL - residual),
        _result("update_stays_admissible", trials, (a_new - np.abs(b_new)) / a_new),
    ]


def suite_lemmas(seed=SEED) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    return [
        *check_half_state_bracket(rng),
        *check_momentum_root_bound(rng),
        check_eta_range(rng),
        *check_closed_form(rng),
    ]


# -- state algebra ---------------------------------------------------------------------


def suite_state(seed=SEED, trials=RANDOM_TRIALS) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    a, b = random_states(rng, trials)
    prim = to_primitive(ConservedState(a, b))
    back = to_conserved(prim)
    err = np.maximum(np.abs(back.a - a), np.abs(back.b - b)) / a
    return [
        _result("primitive_roundtrip", trials, 1e-12 - err),
        _result("pressure_positive", trials, np.asarray(prim.p) / a),
        _result("image_inside_state_space", trials, (np.asarray(back.a) - np.abs(back.b)) / back.a),
    ]


# -- stationary state -------------------------------------------------------------------


def suite_stationary() -> list[PropertyResult]:
    out = []
    for a0 in (3.0, 0.7):
        m = measure_stationary(200, a0)
        drift = max(m.values["max_abs_drift_a"], m.values["max_abs_drift_b"])
        exact = m.values["identical_to_initial"] and drift == 0.0
        out.append(PropertyResult(f"rest_state_exact_a0={a0:g}", 400, -drift if not exact else 1.0, exact))
        out.append(PropertyResult(f"rest_state_runtime_a0={a0:g}", 1, 1.0 - m.runtime, m.runtime < 1.0))
    return out


# -- linear solutions ----------------------------------------------------------------------


def trig_data(amp: float = 0.1) -> SmoothData:
    """``a0 = 1 + amp cos x``, ``b0 = amp sin x`` with exact primitives."""
    return SmoothData(
        a_fn=lambda x: 1.0 + amp * np.cos(x),
        b_fn=lambda x: amp * np.sin(x),
        A_fn=lambda x: 0.5 * x * x + amp * (x * np.sin(x) + np.cos(x) - 1.0),
        B_fn=lambda x: amp * (1.0 - np.cos(x)),
    )


def linear_pde_residual(data, t, x, h):
    """Max centred-difference residual of the radial linear system at ``(t, x)``."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)

    def mass(tt, xx):
        a, b = eval_linear(tt, xx, data)
        return xx * xx * a, xx * xx * b

    a_c, b_c = eval_linear(t, x, data)
    ma_tp, mb_tp = mass(t + h, x)
    ma_tm, mb_tm = mass(t - h, x)
    ma_xp, mb_xp = mass(t, x + h)
    ma_xm, mb_xm = mass(t, x - h)
    r1 = (ma_tp - ma_tm) / (2 * h) + (mb_xp - mb_xm) / (2 * h)
    r2 = (mb_tp - mb_tm) / (2 * h) + (ma_xp - ma_xm) / (6 * h) - 2.0 * x * a_c / 3.0
    return float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))


def residual_orders(data=None, widths=(1e-2, 5e-3, 2.5e-3)):
    data = data if data is not None else trig_data()
    tt, xx = np.meshgrid([0.3, 0.7, 1.5], [0.5, 1.0, 2.0, 3.0])
    res = [linear_pde_residual(data, tt.ravel(), xx.ravel(), h) for h in widths]
    orders = [math.log(res[k] / res[k + 1]) / math.log(widths[k] / widths[k + 1]) for k in range(len(res) - 1)]
    return res, orders


def suite_linear(seed=SEED) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    out = []

    errors = [linear_regime_error(N) for N in (100, 200, 400)]
    out.append(_result("scheme_converges_to_linear_solution", 3, [1.0 - errors[k + 1] / errors[k] for k in range(2)]))

    _, orders = residual_orders()
    out.append(_result("linear_pde_residual_second_order", len(orders), [0.2 - abs(o - 2.0) for o in orders]))

    const = PiecewiseData.constant(2.5, 0.0)
    t = rng.uniform(0.0, 3.0, 1000)
    x = rng.uniform(1e-3, 5.0, 1000)
    a, b = eval_linear(t, x, const)
    out.append(_result("constant_data_stationary", 1000, LINEAR_TOL - np.maximum(np.abs(a - 2.5), np.abs(b))))

    margins = []
    for tk, xk in zip(rng.uniform(0.05, 4.0, 2000), rng.uniform(0.01, 4.0, 2000)):
        region = classify_imploding(tk, xk)
        if region == "boundary":
            continue
        ea, eb = imploding_region_state(tk, xk, region)
        la, lb = eval_linear(tk, xk, IMPLODING_SHOCK)
        margins.append(LINEAR_TOL * max(1.0, abs(ea), abs(eb)) - max(abs(la - ea), abs(lb - eb)))
    out.append(_result("imploding_shock_closed_forms", len(margins), margins))

    expected = {"x1": -1.0 / SQRT3, "x2": 1.0 / SQRT3, "x3": 1.0 / SQRT3}
    margins = []
    for tk in (0.5, 1.0, 2.5, 3.0):
        for name, (pos, below, above) in imploding_shock_lines(tk).items():
            left = imploding_region_state(tk, pos, below)
            right = imploding_region_state(tk, pos, above)
            margins.append(LINEAR_TOL - abs(rh_speed_linear(left, right) - expected[name]))
    out.append(_result("jump_speeds_are_sound_speed", len(margins), margins))
    return out


SUITES: dict[str, Callable[[], list[PropertyResult]]] = {
    "lemmas": suite_lemmas,
    "state": suite_state,
    "stationary": suite_stationary,
    "linear": suite_linear,
}


def run_suite(name: str) -> list[PropertyResult]:
    if name == "all":
        return [r for key in SUITES for r in SUITES[key]()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}, all")
    return SUITES[name]()
