"""CSV output: per-level snapshots and decimated space-time matrices.

All floats are written with 17 significant digits, which round-trips every
double exactly; lines end in LF.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .linear import eval_linear
from .scheme import Level, SimulationResult
from .state import (
    entropy_density_from,
    flux_closure,
    four_velocity_from,
    pressure,
    velocity,
)

SNAPSHOT_COLUMNS = ("t", "x", "a", "b", "p", "u", "v", "c", "entropy_density")
FLOAT_FMT = "%.17g"


class HistoryError(ValueError):
    """The run did not retain the levels needed for a space-time dump."""


def _fmt(value: float) -> str:
    return FLOAT_FMT % value


def emit_snapshot(level: Level, path) -> Path:
    """Write one row per node with the state and its derived fields."""
    a, b = level.a, level.b
    table = np.column_stack(
        [
            np.full(len(a), level.t),
            level.x,
            a,
            b,
            pressure(a, b),
            four_velocity_from(a, b),
            velocity(a, b),
            flux_closure(a, b),
            entropy_density_from(a, b),
        ]
    )
    path = Path(path)
    np.savetxt(path, table, fmt=FLOAT_FMT, delimiter=",", header=",".join(SNAPSHOT_COLUMNS), comments="", newline="\n")
    return path


def read_snapshot(path, n: int = 0) -> Level:
    """Read a snapshot CSV back into a :class:`Level` (``n`` is not stored in the file)."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    if tuple(header) != SNAPSHOT_COLUMNS:
        raise ValueError(f"unexpected snapshot header {header}")
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return Level(n, float(table[0, 0]), table[:, 1].copy(), table[:, 2].copy(), table[:, 3].copy())


def emit_linear(t_values, x_values, data, path) -> Path:
    """Analytic linear solution on a ``(t, x)`` lattice, rows ``t,x,a,b``."""
    rows = []
    for t in t_values:
        a, b = eval_linear(t, np.asarray(x_values, dtype=float), data)
        rows.append(np.column_stack([np.full(len(x_values), float(t)), x_values, a, b]))
    path = Path(path)
    np.savetxt(path, np.vstack(rows), fmt=FLOAT_FMT, delimiter=",", header="t,x,a,b", comments="", newline="\n")
    return path


def spacetime_shape(result: SimulationResult, decimation: int) -> tuple[int, int]:
    g = result.grid
    return math.ceil(2 * g.N / decimation), math.ceil((g.M + g.N) / decimation)


def emit_spacetime_grid(result: SimulationResult, decimation: int, prefix) -> tuple[Path, Path]:
    """Write pressure and three-velocity matrices for heatmap plotting.

    Rows are levels ``n = 1, 1 + k, 1 + 2k, ...`` with ``n - 1 < 2N`` and
    columns are node indices ``0, k, 2k, ...`` below ``M + N``; ``k`` is the
    decimation.  The first three rows hold the node index and its radius on
    odd and on even levels; each data row starts with ``n`` and ``t``.  Nodes a
    level does not have (the domain shrinks in time) are left empty.

    ``prefix`` is a path stem; the files are ``<prefix>_p.csv`` and
    ``<prefix>_v.csv``.  Returns both paths.
    """
    if decimation < 1:
        raise ValueError("decimation must be >= 1")
    if result.history is None:
        raise HistoryError("history was not retained; run with keep_history=True")
    if decimation % result.history_decimation:
        raise HistoryError(
            f"decimation {decimation} is not a multiple of the retained history step {result.history_decimation}"
        )
    g = result.grid
    rows, cols = spacetime_shape(result, decimation)
    by_n = {lv.n: lv for lv in result.history}
    nodes = np.arange(cols) * decimation
    prefix = Path(prefix)
    p_path = prefix.with_name(prefix.name + "_p.csv")
    v_path = prefix.with_name(prefix.name + "_v.csv")

    def header():
        return [
            "node,," + ",".join(str(int(j)) for j in nodes),
            "x_odd,," + ",".join(_fmt(x) for x in (nodes + 0.5) * g.dx),
            "x_even,," + ",".join(_fmt(x) for x in nodes * g.dx),
        ]

    p_lines, v_lines = header(), header()
    for r in range(rows):
        n = 1 + r * decimation
        if n not in by_n:
            raise HistoryError(f"level {n} missing from the retained history")
        lv = by_n[n]
        keep = nodes[nodes < len(lv)]
        p = pressure(lv.a[keep], lv.b[keep])
        v = velocity(lv.a[keep], lv.b[keep])
        pad = [""] * (cols - len(keep))
        lead = f"{n},{_fmt(lv.t)},"
        p_lines.append(lead + ",".join([_fmt(z) for z in p] + pad))
        v_lines.append(lead + ",".join([_fmt(z) for z in v] + pad))
    for target, lines in ((p_path, p_lines), (v_path, v_lines)):
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    return p_path, v_path


def read_spacetime_grid(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(t, x_index, values)`` with missing cells as NaN."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    nodes = np.array([int(s) for s in lines[0].split(",")[2:]])
    t, data = [], []
    for line in lines[3:]:
        cells = line.split(",")
        t.append(float(cells[1]))
        data.append([float(c) if c else np.nan for c in cells[2:]])
    return np.asarray(t), nodes, np.asarray(data)
