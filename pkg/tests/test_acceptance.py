"""Acceptance criteria, one test per criterion.

Every test prints a single ``[criterion k] PASS|FAIL ...`` line straight to
the terminal (also under pytest's output capture).  Run the file directly
to get just those lines:

    python3 tests/test_acceptance.py
"""

from __future__ import annotations

import functools
import sys

import numpy as np
import pytest

from radeuler.diagnostics import entropy_production
from radeuler.linear import PiecewiseData
from radeuler.presets import (
    PRESETS,
    measure_bubble,
    measure_entropy,
    measure_rarefaction,
    measure_shock,
    measure_stationary,
)
from radeuler.scheme import build_grid, initial_level, march
from radeuler.verify import suite_lemmas, suite_linear

# tolerances
STATIONARY_RUNTIME = 1.0
RAREFACTION_P, RAREFACTION_TOL, RAREFACTION_FALLBACK_TOL = 0.00032, 0.05, 0.10
RAREFACTION_V_TOL = 1e-3
RAREFACTION_RUNTIME = 30.0
SHOCK_P, SHOCK_SLOPE = 25.55, 0.523
SHOCK_TOL, SHOCK_FALLBACK_TOL = 0.02, 0.04
ARRIVAL, ARRIVAL_TOL = 4.16, 0.02
SPIKE_RATIO, SPIKE_T, SPIKE_X = 3.0, (4.0, 4.4), 0.05
ENTROPY_CONSTANT_TOL = 1e-12
ENTROPY_EXCESS_BOUND = 1e-6
LINEAR_CRITERION_CHECKS = (
    "constant_data_stationary",
    "imploding_shock_closed_forms",
    "linear_pde_residual_second_order",
    "jump_speeds_are_sound_speed",
)

FULL_N = 3000
FALLBACK_N = 750
SELF_SIMILAR_N = (375, 750, 1500)
BUBBLE_N = 1500
ENTROPY_N = 1500


# -- cached measurements (several criteria share runs) -------------------------------


@functools.cache
def stationary():
    return measure_stationary(200)


@functools.cache
def rarefaction(N):
    return measure_rarefaction(N)


@functools.cache
def shock(N):
    return measure_shock(N)


@functools.cache
def bubble():
    return measure_bubble(BUBBLE_N)


def within(value, target, rel):
    return abs(value - target) <= rel * abs(target)


# -- criteria ----------------------------------------------------------------------------


def criterion_1():
    m = stationary()
    ok = m.values["identical_to_initial"] and m.values["max_abs_drift_a"] == 0.0 and m.runtime < STATIONARY_RUNTIME
    return ok, (
        f"rest state N=200: drift a={m.values['max_abs_drift_a']:.1e} b={m.values['max_abs_drift_b']:.1e}, "
        f"bit-identical={m.values['identical_to_initial']}, {m.runtime:.3f} s"
    )


def criterion_2():
    full, fallback = rarefaction(FULL_N), rarefaction(FALLBACK_N)
    p, v = full.values["inner_pressure"], full.values["inner_max_abs_v"]
    pf = fallback.values["inner_pressure"]
    ok = (
        within(p, RAREFACTION_P, RAREFACTION_TOL)
        and v <= RAREFACTION_V_TOL
        and within(pf, RAREFACTION_P, RAREFACTION_FALLBACK_TOL)
        and full.runtime <= RAREFACTION_RUNTIME
    )
    return ok, (
        f"inner p={p:.6f} (target {RAREFACTION_P} +-5%) max|v|={v:.1e} at N={FULL_N} in {full.runtime:.1f} s; "
        f"N={FALLBACK_N}: p={pf:.6f} (+-10%)"
    )


def criterion_3():
    full, fallback = shock(FULL_N), shock(FALLBACK_N)
    p, s = full.values["inner_pressure"], full.values["shock_speed"]
    pf, sf = fallback.values["inner_pressure"], fallback.values["shock_speed"]
    ok = (
        within(p, SHOCK_P, SHOCK_TOL)
        and within(s, SHOCK_SLOPE, SHOCK_TOL)
        and within(pf, SHOCK_P, SHOCK_FALLBACK_TOL)
        and within(sf, SHOCK_SLOPE, SHOCK_FALLBACK_TOL)
        and full.values["admissible"]
        and fallback.values["admissible"]
    )
    return ok, (
        f"N={FULL_N}: inner p={p:.3f} slope={s:.4f} admissible={full.values['admissible']}; "
        f"N={FALLBACK_N}: p={pf:.3f} slope={sf:.4f} (targets {SHOCK_P}, {SHOCK_SLOPE})"
    )


def criterion_4():
    errs2 = [rarefaction(N).values["self_similarity"] for N in SELF_SIMILAR_N]
    errs3 = [shock(N).values["self_similarity"] for N in SELF_SIMILAR_N]
    ok = all(e[0] > e[1] > e[2] for e in (errs2, errs3))
    fmt = lambda errs: " > ".join(f"{e:.4f}" for e in errs)  # noqa: E731
    return ok, f"N={SELF_SIMILAR_N}: rarefaction {fmt(errs2)}; shock {fmt(errs3)}"


def criterion_5():
    m = bubble().values
    arrival = m["arrival_extrapolated"]
    ok = (
        within(arrival, ARRIVAL, ARRIVAL_TOL)
        and m["peak_ratio"] > SPIKE_RATIO
        and SPIKE_T[0] <= m["peak_time"] <= SPIKE_T[1]
        and m["peak_x"] < SPIKE_X
    )
    return ok, (
        f"N={BUBBLE_N}: extrapolated arrival t={arrival:.4f} (target {ARRIVAL} +-2%); "
        f"spike p={m['peak_pressure']:.2f} at t={m['peak_time']:.4f}, x={m['peak_x']:.4f}, "
        f"{m['peak_ratio']:.2e} x boundary p before arrival"
    )


def criterion_6():
    results = {r.name: r for r in suite_linear()}
    chosen = [results[name] for name in LINEAR_CRITERION_CHECKS]
    ok = all(r.passed for r in chosen)
    return ok, "; ".join(f"{r.name} ({r.trials}) margin {r.worst_margin:.2e}" for r in chosen)


def criterion_7():
    results = suite_lemmas()
    ok = all(r.passed for r in results)
    return ok, "; ".join(f"{r.name} {r.trials}" + ("" if r.passed else " FAILED") for r in results)


def criterion_8():
    runs = [stationary(), bubble()]
    runs += [rarefaction(N) for N in {FULL_N, FALLBACK_N, *SELF_SIMILAR_N}]
    runs += [shock(N) for N in {FULL_N, FALLBACK_N, *SELF_SIMILAR_N}]
    margin = min(m.values["min_margin"] for m in runs)
    p_min = min(m.values.get("min_pressure", 1.0) for m in runs)
    # those runs enforce |b| < a and b(t, 0) = 0 at every level; re-check explicitly on a coarse grid
    boundary_ok = True
    for name in ("example2", "example3", "example4"):
        g = build_grid(PRESETS[name].t_star, PRESETS[name].x_star, 375)
        for level in march(initial_level(PRESETS[name].data, g), g, check=False):
            if not np.all(np.abs(level.b) < level.a) or (level.n % 2 == 0 and level.b[0] != 0.0):
                boundary_ok = False
    ok = margin > 0.0 and p_min > 0.0 and boundary_ok
    return ok, (
        f"{len(runs)} runs: min (a-|b|)/a = {margin:.3e}, min p = {p_min:.3e}, "
        f"b(t,0) = 0 on every even level: {boundary_ok}"
    )


def criterion_9():
    g = build_grid(1.0, 1.0, 200)
    levels = list(march(initial_level(PiecewiseData.constant(3.0), g), g))
    constant = max(float(np.max(np.abs(entropy_production(u, w, g)))) for u, w in zip(levels, levels[1:]))
    rep = measure_entropy("example3", ENTROPY_N)
    shock_x = SHOCK_SLOPE * rep["argmin_t"]
    at_shock = abs(rep["argmin_x"] - shock_x) < 10 * build_grid(1.0, 1.0, ENTROPY_N).dx
    ok = (
        constant <= ENTROPY_CONSTANT_TOL
        and rep["min_value"] < 0.0
        and at_shock
        and rep["max_excess"] <= ENTROPY_EXCESS_BOUND
    )
    return ok, (
        f"constant state |production| <= {constant:.1e}; shock run N={ENTROPY_N}: "
        f"min {rep['min_value']:.3e} at x={rep['argmin_x']:.4f}, t={rep['argmin_t']:.4f} (shock line x={shock_x:.4f}); "
        f"largest positive value {rep['max_excess']:.1e} (bound {ENTROPY_EXCESS_BOUND:g})"
    )


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 10)}


def line(k, ok, detail):
    return f"[criterion {k}] {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.fixture
def say(capsys):
    def emit(text):
        with capsys.disabled():
            print("\n" + text, flush=True)

    return emit


@pytest.mark.parametrize("k", list(CRITERIA))
def test_criterion(k, say):
    ok, detail = CRITERIA[k]()
    say(line(k, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for k, fn in CRITERIA.items():
        ok, detail = fn()
        failures += not ok
        print(line(k, ok, detail), flush=True)
    sys.exit(1 if failures else 0)
