"""Empirical constants of the product, commutator and nonlinear estimates at two resolutions."""

import argparse
import math

from nlwave.probes import PROBES, probe_suite
from nlwave.spectral import make_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--s", type=float, default=2.0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    for name in PROBES:
        p = 2 if name == "N_uu" else 1
        reps = [
            probe_suite(name, make_grid(math.pi, N), args.samples, args.seed, s=args.s, p=p, workers=args.workers)
            for N in (256, 512)
        ]
        change = abs(reps[1].empirical_C / reps[0].empirical_C - 1)
        print(reps[1].to_json())
        print(f"  {name}: C(256)={reps[0].empirical_C:.6f} C(512)={reps[1].empirical_C:.6f} change={change:.2e}")


if __name__ == "__main__":
    main()
