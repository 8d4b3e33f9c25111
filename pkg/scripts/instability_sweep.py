#!/usr/bin/env python3
"""Instability of the cumulative-operator equation as the perturbation shrinks.

For each oscillation count the right-hand side moves by delta = 1/(2 n pi)
while the recovered solution moves by about 1, so the amplification grows
like 2 n pi: the data perturbation vanishes in the limit but the solution
perturbation does not.
"""

import argparse
import math

from illposed.fredholm import run_instability_experiment


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--n-osc", type=int, nargs="+", default=[4, 8, 16, 32, 64],
        help="oscillation counts to sweep",
    )
    parser.add_argument(
        "--points-per-osc", type=int, default=80,
        help="grid points per oscillation count (keeps h well under delta/10)",
    )
    args = parser.parse_args()

    print(f"{'n_osc':>6} {'n':>7} {'delta':>10} {'rhs_dev':>10} {'sol_dev':>9} "
          f"{'amplification':>14} {'2*n_osc*pi':>11}")
    for n_osc in args.n_osc:
        n = args.points_per_osc * n_osc
        r = run_instability_experiment(n, n_osc)
        print(
            f"{n_osc:>6} {n:>7} {r.delta:10.6f} {r.rhs_dev:10.6f} "
            f"{r.sol_dev:9.4f} {r.amplification:14.3f} {2 * n_osc * math.pi:11.3f}"
        )


if __name__ == "__main__":
    main()
