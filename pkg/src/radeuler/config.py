"""Run configuration files.

Line-oriented ``key = value`` text.  ``#`` starts a comment.  Custom
initial data follow the global keys as ``[segment]`` blocks::

    preset = custom
    t_star = 1
    x_star = 1
    variables = pv          # or ab
    snapshot_times = 0.5, 1

    [segment]
    start = 0
    p = 1                   # "c0" or "c0, c1" for c0 + c1 x
    v = 0

    [segment]
    start = 1
    p = 0.1
    v = 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .linear import PiecewiseData, PiecewisePV
from .presets import PRESETS
from .scheme import GridSpec, build_grid
from .state import PrimitiveState, four_velocity, to_conserved

PRESET_NAMES = tuple(PRESETS) + ("custom",)
GLOBAL_KEYS = (
    "preset",
    "t_star",
    "x_star",
    "N",
    "snapshot_times",
    "snapshot_csv",
    "spacetime_grid",
    "diagnostics",
    "variables",
    "points",
)
REQUIRED_HELP = "required: preset (one of %s); preset = custom also needs t_star, x_star and [segment] blocks" % (
    ", ".join(PRESET_NAMES)
)
_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Segment:
    start: float
    first: tuple[float, float]  # p or a
    second: tuple[float, float]  # v or b
    line: int


@dataclass
class RunConfig:
    preset: str
    t_star: float
    x_star: float
    N: int = 750
    snapshot_times: list[float] = field(default_factory=list)
    snapshot_csv: bool = True
    spacetime_grid: bool = False
    diagnostics: bool = True
    variables: str = "pv"
    points: int = 201  # radii per time for the analytic evaluation
    segments: list[Segment] = field(default_factory=list)

    @property
    def grid(self) -> GridSpec:
        return build_grid(self.t_star, self.x_star, self.N)

    def initial_data(self) -> PiecewiseData | PiecewisePV:
        if self.preset != "custom":
            return PRESETS[self.preset].data
        return segments_to_data(self.segments, self.variables)


def segments_to_data(segments: list[Segment], variables: str) -> PiecewiseData | PiecewisePV:
    bp = tuple(s.start for s in segments)
    first = tuple(s.first for s in segments)
    second = tuple(s.second for s in segments)
    if variables == "ab":
        return PiecewiseData(bp, first, second)
    if all(c[1] == 0.0 for c in first + second):
        # constant pieces convert exactly
        for k, (p, v) in enumerate(zip(first, second)):
            if not p[0] > 0.0:
                raise ValueError(f"p0 > 0 violated in segment {k}")
            if not abs(v[0]) < 1.0:
                raise ValueError(f"|v0| < 1 violated in segment {k}")
        states = [
            to_conserved(PrimitiveState(p[0], four_velocity(v[0]))) for p, v in zip(first, second)
        ]
        return PiecewiseData.steps(bp, [s.a for s in states], [s.b for s in states])
    return PiecewisePV(bp, first, second)


def _number(text: str, key: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"malformed number for {key}: {text!r}", line) from None
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {text!r}", line)
    return value


def _coefficients(text: str, key: str, line: int) -> tuple[float, float]:
    parts = [s.strip() for s in text.split(",")]
    if not 1 <= len(parts) <= 2:
        raise ConfigError(f"{key} takes 'c0' or 'c0, c1', got {text!r}", line)
    values = [_number(s, key, line) for s in parts]
    return (values[0], values[1] if len(values) == 2 else 0.0)


def _boolean(text: str, key: str, line: int) -> bool:
    low = text.lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ConfigError(f"{key} must be true or false, got {text!r}", line)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a run configuration."""
    values: dict[str, tuple[str, int]] = {}
    blocks: list[tuple[int, dict[str, tuple[str, int]]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if line != "[segment]":
                raise ConfigError(f"unknown block {line!r}; only [segment] is allowed", lineno)
            blocks.append((lineno, {}))
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if blocks:
            target = blocks[-1][1]
            if key not in ("start", "p", "v", "a", "b"):
                raise ConfigError(f"unknown key {key!r} in [segment] (start, p, v, a, b)", lineno)
        else:
            target = values
            if key not in GLOBAL_KEYS:
                raise ConfigError(f"unknown key {key!r}", lineno)
        if key in target:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        target[key] = (value, lineno)

    if "preset" not in values:
        raise ConfigError(f"missing key 'preset'; {REQUIRED_HELP}")
    preset, preset_line = values["preset"]
    if preset not in PRESET_NAMES:
        raise ConfigError(f"preset must be one of {', '.join(PRESET_NAMES)}, got {preset!r}", preset_line)

    def number(key, default=None):
        if key not in values:
            if default is None:
                raise ConfigError(f"missing key {key!r}; {REQUIRED_HELP}")
            return default
        return _number(values[key][0], key, values[key][1])

    def line_of(key):
        return values[key][1] if key in values else None

    if preset == "custom":
        t_star, x_star = number("t_star"), number("x_star")
    else:
        t_star = number("t_star", PRESETS[preset].t_star)
        x_star = number("x_star", PRESETS[preset].x_star)
    for key, val in (("t_star", t_star), ("x_star", x_star)):
        if not val > 0:
            raise ConfigError(f"{key} > 0 violated ({val})", line_of(key))

    N_value = number("N", 750.0)
    if N_value != int(N_value) or N_value < 1:
        raise ConfigError(f"N must be a positive integer, got {values['N'][0]!r}", line_of("N"))
    N = int(N_value)
    if not N * x_star >= t_star:
        raise ConfigError(
            f"grid admissibility N*x_star >= t_star violated ({N}*{x_star} < {t_star})",
            line_of("N") or line_of("t_star") or line_of("x_star"),
        )

    if "snapshot_times" in values:
        text_times, tl = values["snapshot_times"]
        times = [_number(s.strip(), "snapshot_times", tl) for s in text_times.split(",") if s.strip()]
        if not times:
            raise ConfigError("snapshot_times is empty", tl)
        for t in times:
            if not 0.0 <= t <= t_star:
                raise ConfigError(f"snapshot time {t} outside [0, t_star={t_star}]", tl)
    else:
        times = [t_star]

    flags = {}
    for key, default in (("snapshot_csv", True), ("spacetime_grid", False), ("diagnostics", True)):
        flags[key] = _boolean(values[key][0], key, values[key][1]) if key in values else default

    variables = values.get("variables", ("pv", None))[0]
    if variables not in ("pv", "ab"):
        raise ConfigError(f"variables must be pv or ab, got {variables!r}", line_of("variables"))

    points_value = number("points", 201.0)
    if points_value != int(points_value) or points_value < 1:
        raise ConfigError("points must be a positive integer", line_of("points"))

    segments: list[Segment] = []
    if preset != "custom":
        if blocks:
            raise ConfigError("[segment] blocks are only allowed with preset = custom", blocks[0][0])
    else:
        if not blocks:
            raise ConfigError(f"preset = custom needs at least one [segment] block; {REQUIRED_HELP}")
        names = ("p", "v") if variables == "pv" else ("a", "b")
        for lineno, block in blocks:
            for key in block:
                if key != "start" and key not in names:
                    raise ConfigError(
                        f"key {key!r} does not match variables = {variables}", block[key][1]
                    )
            for key in ("start",) + names:
                if key not in block:
                    raise ConfigError(f"[segment] is missing {key!r}", lineno)
            start = _number(block["start"][0], "start", block["start"][1])
            first = _coefficients(block[names[0]][0], names[0], block[names[0]][1])
            second = _coefficients(block[names[1]][0], names[1], block[names[1]][1])
            segments.append(Segment(start, first, second, lineno))
        try:
            segments_to_data(segments, variables)
        except ValueError as exc:
            raise ConfigError(f"initial data invariant violated: {exc}", _segment_line(segments, exc)) from None

    return RunConfig(
        preset=preset,
        t_star=t_star,
        x_star=x_star,
        N=N,
        snapshot_times=times,
        variables=variables,
        points=int(points_value),
        segments=segments,
        **flags,
    )


def _segment_line(segments: list[Segment], exc: Exception) -> int:
    msg = str(exc)
    if "in segment " in msg:
        k = int(msg.rsplit("in segment ", 1)[1].split()[0])
        return segments[k].line
    if "last segment" in msg:
        return segments[-1].line
    return segments[0].line


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
