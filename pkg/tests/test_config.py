import math

import pytest

from radeuler.config import ConfigError, parse_config
from radeuler.linear import PiecewiseData, PiecewisePV


def test_preset_example2():
    cfg = parse_config("preset = example2\nN = 3000\nt_star = 1\nx_star = 1")
    assert (cfg.preset, cfg.N, cfg.t_star, cfg.x_star) == ("example2", 3000, 1.0, 1.0)
    assert cfg.snapshot_times == [1.0]
    data = cfg.initial_data()
    assert data.a0(0.3) == 7.0 and data.b0(0.3) == pytest.approx(4 * math.sqrt(2))


def test_preset_bubble():
    cfg = parse_config("preset = example4\nt_star = 5\nx_star = 2")
    assert cfg.N == 750
    data = cfg.initial_data()
    # p0 = 1 inside the unit ball, 0.1 outside, at rest
    assert data.a0(0.5) == 3.0 and data.a0(1.0) == 3.0 and data.a0(1.5) == pytest.approx(0.3)
    assert data.b0(1.5) == 0.0


def test_defaults_from_preset():
    cfg = parse_config("preset = example4")
    assert (cfg.t_star, cfg.x_star) == (5.0, 2.0)


def test_empty_file_lists_required_keys():
    with pytest.raises(ConfigError) as err:
        parse_config("")
    assert "preset" in str(err.value) and "t_star" in str(err.value)


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("preset = example1\ncolour = red", 2, "unknown key"),
        ("preset = example1\nN = 12x", 2, "malformed number"),
        ("preset = example1\nN = 2.5", 2, "positive integer"),
        ("preset = example1\n\nt_star = 3\nN = 2", 4, "N*x_star >= t_star"),
        ("preset = example1\nt_star = -1", 2, "t_star > 0"),
        ("preset = example1\nsnapshot_times = 0.5, 2", 2, "outside"),
        ("preset = nothing", 1, "preset must be"),
        ("preset = example1\nN = 5\nN = 6", 3, "duplicate"),
        ("preset = example1\n[segment]\nstart = 0\np = 1\nv = 0", 2, "only allowed"),
        ("preset = example1\n[block]", 2, "unknown block"),
        ("preset = example1\nsnapshot_csv = maybe", 2, "true or false"),
    ],
)
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.line == line
    assert fragment in str(err.value)


CUSTOM = """# bubble given in (p, v)
preset = custom
t_star = 1
x_star = 1
snapshot_times = 0.25, 0.5, 1
spacetime_grid = yes

[segment]
start = 0
p = 1
v = 0

[segment]
start = 0.5
p = 0.2   # trailing comment
v = 0.1
"""


def test_custom_pv_segments():
    cfg = parse_config(CUSTOM)
    assert cfg.snapshot_times == [0.25, 0.5, 1.0]
    assert cfg.spacetime_grid and cfg.snapshot_csv
    data = cfg.initial_data()
    assert isinstance(data, PiecewiseData)
    assert data.a0(0.2) == 3.0
    assert data.b0(0.8) > 0


def test_custom_linear_pv_segment():
    cfg = parse_config("preset = custom\nt_star = 1\nx_star = 1\n[segment]\nstart = 0\np = 1, 0.5\nv = 0")
    assert isinstance(cfg.initial_data(), PiecewisePV)


def test_custom_ab_segments():
    cfg = parse_config("preset = custom\nt_star=1\nx_star=1\nvariables = ab\n[segment]\nstart = 0\na = 3, 1\nb = 0, 0.5")
    data = cfg.initial_data()
    assert data.a0(1.0) == 4.0 and data.b0(1.0) == 0.5


@pytest.mark.parametrize(
    "segments,line,fragment",
    [
        ("[segment]\nstart = 0\np = 1\nv = 1.0", 4, "|v0| < 1"),
        ("[segment]\nstart = 0\np = -1\nv = 0", 4, "p0 > 0"),
        ("[segment]\nstart = 0\np = 1\nv = 0\n[segment]\nstart = 1\np = 1\nv = 0.5, 0.6", 8, "|v0| < 1"),
        ("[segment]\nstart = 0\np = 1", 4, "missing 'v'"),
        ("[segment]\nstart = 0\np = 1\nb = 0", 7, "does not match"),
        ("[segment]\nstart = 0.2\np = 1\nv = 0", 4, "start at 0"),
    ],
)
def test_custom_invariants(segments, line, fragment):
    text = "preset = custom\nt_star = 1\nx_star = 1\n" + segments
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.line == line
    assert fragment in str(err.value)


def test_custom_ab_state_space():
    text = "preset = custom\nt_star = 1\nx_star = 1\nvariables = ab\n[segment]\nstart = 0\na = 1\nb = 1"
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert "|b0| < a0" in str(err.value) and err.value.line == 5


def test_custom_requires_segments():
    with pytest.raises(ConfigError) as err:
        parse_config("preset = custom\nt_star = 1\nx_star = 1")
    assert "[segment]" in str(err.value)
