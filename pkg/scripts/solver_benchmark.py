#!/usr/bin/env python3
"""Time the witness optimization across state families.

Reports per-solve wall time and the certified duality gap so solve
budgets for sweeps and ensembles can be planned. The solver is
deterministic, so repeated runs time the same arithmetic.
"""
import argparse
import time

import numpy as np

from gmn3q.channel import evolve
from gmn3q.gmn import genuine_negativity
from gmn3q.states import ghz1, pure_to_density, random_pure, random_weighted_graph, w_state


def bench(name, rhos):
    times, gaps = [], []
    for rho in rhos:
        t0 = time.perf_counter()
        res = genuine_negativity(rho)
        times.append(time.perf_counter() - t0)
        gaps.append(res.duality_gap)
    times = 1e3 * np.array(times)
    print(f"{name:18s} n={len(rhos):3d}  mean={times.mean():6.1f} ms  "
          f"max={times.max():6.1f} ms  worst gap={max(gaps):.1e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20, help="samples per family (default 20)")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    bench("named states", [pure_to_density(p) for p in (ghz1(), w_state())])
    bench("haar random", [pure_to_density(p) for p in random_pure(args.seed, args.n)])
    bench("weighted graph", [pure_to_density(p) for p in random_weighted_graph(args.seed, args.n)])
    bench("dephased haar", [evolve(pure_to_density(p), 1.0)
                            for p in random_pure(args.seed + 1, args.n)])


if __name__ == "__main__":
    main()
