import math

import numpy as np
import pytest

from radeuler.diagnostics import (
    NoShockError,
    OriginPeakMonitor,
    ShockTrack,
    detect_shock,
    energy_balance,
    entropy_production,
    entropy_report,
    self_similarity_error,
    shock_admissible,
    shock_arrival,
    shock_speed,
    track_shock,
)
from radeuler.linear import IMPLODING_SHOCK, SQRT3, PiecewiseData, eval_linear
from radeuler.presets import PRESETS
from radeuler.scheme import Level, build_grid, initial_level, march
from radeuler.state import PrimitiveState, to_conserved


def level_from(t, x, a, b, n=1):
    return Level(n, t, np.asarray(x, float), np.asarray(a, float), np.asarray(b, float))


def test_uniform_state_has_no_shock():
    x = np.linspace(0.01, 1.0, 50)
    with pytest.raises(NoShockError):
        detect_shock(level_from(1.0, x, 3.0 * np.ones(50), np.zeros(50)))


def test_window_too_small():
    x = np.linspace(0.01, 1.0, 50)
    with pytest.raises(NoShockError):
        detect_shock(level_from(1.0, x, 3.0 * np.ones(50), np.zeros(50)), (0.5, 0.52))


def test_detects_linear_imploding_shock():
    x = np.linspace(0.005, 0.9, 180)
    a, b = eval_linear(1.0, x, IMPLODING_SHOCK)
    pos = detect_shock(level_from(1.0, x, a, b), (0.05, 0.9))
    assert abs(pos - (1.0 - 1.0 / SQRT3)) < x[1] - x[0]


def test_shock_speed_fit():
    track = ShockTrack(times=[0.1, 0.2, 0.3, 0.4, 0.5], positions=[0.05, 0.1, 0.15, 0.2, 0.25])
    assert shock_speed(track) == pytest.approx(0.5)
    assert track.fit_residual == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        shock_speed(ShockTrack(times=[0.1, 0.2], positions=[0.0, 0.1]))


def test_arrival_extrapolation():
    times = list(np.linspace(1.0, 1.9, 10))
    track = ShockTrack(times=times, positions=[2.0 - t for t in times])
    arr = shock_arrival(track, threshold=0.05)
    assert math.isnan(arr.first_below)
    assert arr.extrapolated == pytest.approx(2.0)


def test_tracking_can_lose_the_shock():
    x = np.linspace(0.01, 1.0, 100)
    flat = level_from(2.0, x, 3.0 * np.ones(100), np.zeros(100))
    step = level_from(1.0, x, np.where(x < 0.5, 3.0, 1.0), np.zeros(100))
    track = track_shock([flat, step], allow_loss=True)
    assert track.times == [1.0] and track.lost_at == 2.0
    with pytest.raises(NoShockError):
        track_shock([flat, step])


def test_admissibility():
    fast = to_conserved(PrimitiveState(1.0, 0.5))
    slow = to_conserved(PrimitiveState(2.0, -0.5))
    assert shock_admissible(fast, slow)
    assert not shock_admissible(slow, fast)


def test_constant_state_entropy_production_vanishes():
    g = build_grid(1.0, 1.0, 40)
    levels = list(march(initial_level(PiecewiseData.constant(3.0), g), g))
    for before, after in zip(levels, levels[1:]):
        assert np.max(np.abs(entropy_production(before, after, g))) <= 1e-12


def test_entropy_production_needs_consecutive_levels():
    g = build_grid(1.0, 1.0, 10)
    levels = list(march(initial_level(PiecewiseData.constant(3.0), g), g))
    with pytest.raises(ValueError):
        entropy_production(levels[0], levels[2], g)


def test_entropy_negative_at_reflected_shock():
    pre = PRESETS["example3"]
    g = build_grid(pre.t_star, pre.x_star, 300)
    rep = entropy_report(march(initial_level(pre.data, g), g), g)
    assert rep.min_value < 0.0
    assert abs(rep.argmin_x - 0.523 * rep.argmin_t) < 0.02


def test_self_similarity_of_exact_fan():
    def snap(t):
        x = np.linspace(0.0, 1.0, 400)[1:] * t
        p = 1.0 + x / t
        c = to_conserved(PrimitiveState(p, 0.2 * x / t))
        return level_from(t, x, c.a, c.b)

    assert self_similarity_error(snap(0.5), snap(1.0)) < 1e-12


def test_self_similarity_requires_positive_time():
    x = np.linspace(0.1, 1.0, 10)
    lv = level_from(0.0, x, 3 * np.ones(10), np.zeros(10))
    with pytest.raises(ValueError):
        self_similarity_error(lv, lv)


def test_energy_balance_converges():
    pre = PRESETS["example2"]
    values = []
    for N in (200, 400):
        g = build_grid(pre.t_star, pre.x_star, N)
        values.append(energy_balance(march(initial_level(pre.data, g), g), 0.9).normalized)
    assert values[1] < values[0] < 1e-2


def test_origin_peak_monitor():
    mon = OriginPeakMonitor(t_window=(1.0, 2.0), x_max=0.1)
    x = np.linspace(0.0, 1.0, 101)
    mon(level_from(0.5, x, 3.0 * np.ones(101), np.zeros(101)))
    bump = 3.0 + 30.0 * np.exp(-(((x - 0.03) / 0.01) ** 2))
    mon(level_from(1.5, x, bump, np.zeros(101)))
    mon(level_from(2.5, x, 1000.0 * np.ones(101), np.zeros(101)))
    assert mon.baseline == pytest.approx(1.0)
    assert mon.peak_t == 1.5 and mon.peak_x == pytest.approx(0.03)
    assert mon.ratio == pytest.approx(11.0)
