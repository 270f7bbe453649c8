"""Grid-refinement study: measured quantities and error indicators against N.

    python3 scripts/convergence_study.py [--max-N 3000]
"""

import argparse

from radeuler.diagnostics import energy_balance
from radeuler.presets import PRESETS, grid_for, linear_regime_error, measure_rarefaction, measure_shock
from radeuler.scheme import initial_level, march


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-N", type=int, default=3000)
    args = ap.parse_args()

    sizes = [N for N in (375, 750, 1500, 3000, 6000) if N <= args.max_N]
    print("N      ex2 p        ex2 selfsim  ex3 p     ex3 slope  ex3 selfsim  ex2 energy residual (R=0.9)")
    for N in sizes:
        r, s = measure_rarefaction(N).values, measure_shock(N).values
        g = grid_for("example2", N)
        eb = energy_balance(march(initial_level(PRESETS["example2"].data, g), g), 0.9).normalized
        print(f"{N:<6d} {r['inner_pressure']:.6f}  {r['self_similarity']:.5f}      "
              f"{s['inner_pressure']:.4f}  {s['shock_speed']:.5f}    {s['self_similarity']:.5f}      {eb:.2e}")

    print("\nsmall smooth perturbation of the rest state, scheme vs exact linear solution")
    for N in (100, 200, 400, 800):
        print(f"N={N:<4d} relative L1 deviation {linear_regime_error(N):.3e}")


if __name__ == "__main__":
    main()
