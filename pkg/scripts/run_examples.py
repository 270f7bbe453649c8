"""Run the four reference problems and print the measured quantities.

    python3 scripts/run_examples.py [--N 3000] [--bubble-N 1500]
"""

import argparse

from radeuler.presets import measure_bubble, measure_rarefaction, measure_shock, measure_stationary


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=3000, help="resolution for examples 2 and 3")
    ap.add_argument("--bubble-N", type=int, default=1500, help="resolution for example 4")
    args = ap.parse_args()

    m = measure_stationary(200)
    print(f"example1  N=200   drift a={m.values['max_abs_drift_a']:.1e} b={m.values['max_abs_drift_b']:.1e}  "
          f"({m.runtime:.2f} s)")

    m = measure_rarefaction(args.N)
    print(f"example2  N={args.N}  inner p={m.values['inner_pressure']:.6f} (published 0.00032)  "
          f"max|v|={m.values['inner_max_abs_v']:.1e}  ({m.runtime:.2f} s)")

    m = measure_shock(args.N)
    print(f"example3  N={args.N}  inner p={m.values['inner_pressure']:.3f} (published 25.55)  "
          f"slope={m.values['shock_speed']:.4f} (published 0.523)  admissible={m.values['admissible']}  "
          f"({m.runtime:.2f} s)")

    m = measure_bubble(args.bubble_N)
    print(f"example4  N={args.bubble_N}  arrival t={m.values['arrival_extrapolated']:.4f} (published about 4.16)  "
          f"peak p={m.values['peak_pressure']:.2f} at t={m.values['peak_time']:.4f}  ({m.runtime:.2f} s)")


if __name__ == "__main__":
    main()
