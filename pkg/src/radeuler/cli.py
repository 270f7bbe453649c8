"""Command-line front end.

    radeuler run <config>      march the scheme and write CSV output
    radeuler linear <config>   evaluate the exact linear solution
    radeuler verify <suite>    run a property suite (lemmas, state, stationary, linear, all)

Exit status: 0 success, 1 configuration or usage error, 2 state-space
violation at run time, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .diagnostics import NoShockError, detect_shock
from .io import emit_linear, emit_snapshot, emit_spacetime_grid
from .linear import boundary_limit
from .scheme import StabilityError, run
from .state import DomainError
from .verify import SUITES, run_suite

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="radeuler", description="Radially symmetric ultra-relativistic Euler solver.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="run configuration file")
        p.add_argument("--out-dir", default=".", help="directory for output files (default: .)")

    p_run = sub.add_parser("run", help="march the scheme to t_star")
    common(p_run)
    p_run.add_argument("--keep-history", action="store_true", help="retain levels for the space-time dump")
    p_run.add_argument("--decimation", type=int, default=1, help="keep every k-th level and node (default 1)")
    p_run.add_argument("--threads", type=int, default=1, help="worker threads per step (default 1)")

    p_lin = sub.add_parser("linear", help="evaluate the exact solution of the linearized system")
    common(p_lin)

    p_ver = sub.add_parser("verify", help="run a property suite")
    p_ver.add_argument("suite", choices=tuple(SUITES) + ("all",))
    return parser


def snapshot_name(t: float) -> str:
    return f"snapshot_t{t:.6f}.csv"


def _snapshot_summary(level) -> dict:
    p = level.p
    try:
        shock = detect_shock(level)
    except NoShockError:
        shock = None
    return {
        "t": level.t,
        "level": level.n,
        "nodes": len(level),
        "p_min": float(p.min()),
        "p_max": float(p.max()),
        "p_at_origin_node": float(p[0]),
        "shock_position": shock,
    }


def cmd_run(cfg: RunConfig, out_dir: Path, keep_history: bool, decimation: int, threads: int, out=None) -> int:
    out = out or sys.stdout
    if decimation < 1:
        raise UsageError("--decimation must be >= 1")
    if threads < 1:
        raise UsageError("--threads must be >= 1")
    grid = cfg.grid
    keep = keep_history or cfg.spacetime_grid
    t0 = time.perf_counter()
    result = run(
        cfg.initial_data(),
        grid,
        cfg.snapshot_times,
        keep_history=keep,
        decimation=decimation,
        threads=threads,
    )
    elapsed = time.perf_counter() - t0
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if cfg.snapshot_csv:
        for t in cfg.snapshot_times:
            written.append(emit_snapshot(result.snapshots[t], out_dir / snapshot_name(t)))
    if keep:
        written.extend(emit_spacetime_grid(result, decimation, out_dir / "spacetime"))
    if cfg.diagnostics:
        report = {
            "preset": cfg.preset,
            "grid": {"t_star": grid.t_star, "x_star": grid.x_star, "N": grid.N, "M": grid.M,
                     "dt": grid.dt, "dx": grid.dx, "lam": grid.lam},
            "min_admissibility_margin": min(result.stats.margin_min),
            "min_pressure": min(result.stats.p_min),
            "max_pressure": max(result.stats.p_max),
            "snapshots": [_snapshot_summary(result.snapshots[t]) for t in cfg.snapshot_times],
        }
        path = out_dir / "diagnostics.json"
        path.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
        written.append(path)
    print(f"{cfg.preset}: N={grid.N} M={grid.M} levels={grid.n_levels} in {elapsed:.2f} s", file=out)
    for path in written:
        print(f"wrote {path}", file=out)
    return EXIT_OK


def cmd_linear(cfg: RunConfig, out_dir: Path, out=None) -> int:
    out = out or sys.stdout
    data = cfg.initial_data()
    x = cfg.x_star * np.arange(1, cfg.points + 1) / cfg.points
    out_dir.mkdir(parents=True, exist_ok=True)
    path = emit_linear(cfg.snapshot_times, x, data, out_dir / "linear.csv")
    print(f"wrote {path}", file=out)
    if getattr(data, "smooth", False):
        for t in cfg.snapshot_times:
            if t > 0:
                print(f"b(t={t:g}, x->0) = {boundary_limit(t, data):.6e}", file=out)
    return EXIT_OK


def cmd_verify(suite: str, out=None) -> int:
    out = out or sys.stdout
    results = run_suite(suite)
    for r in results:
        print(r.line(), file=out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify":
            return cmd_verify(args.suite)
        cfg = load_config(args.config)
        out_dir = Path(args.out_dir)
        if args.command == "run":
            return cmd_run(cfg, out_dir, args.keep_history, args.decimation, args.threads)
        return cmd_linear(cfg, out_dir)
    except (UsageError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, StabilityError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
