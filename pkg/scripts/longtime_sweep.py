"""Escape-time sweep over eps for p = 1, 2 with Gaussian data; prints T_esc * eps^p."""

import argparse
from pathlib import Path

from nlwave.experiments import gaussian_state, longtime_sweep
from nlwave.io import write_sweep
from nlwave.kernels import builtin_kernel
from nlwave.spectral import make_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kernel", default="dirac")
    ap.add_argument("--L", type=float, default=20.0)
    ap.add_argument("--N", type=int, default=512)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.2, 0.1, 0.05])
    ap.add_argument("--powers", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--T-cap", type=float, default=5.0)
    ap.add_argument("--M", type=float, default=10.0)
    ap.add_argument("--workers", type=int, default=3)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()

    st = gaussian_state(make_grid(args.L, args.N))
    k = builtin_kernel(args.kernel)
    rows = []
    for p in args.powers:
        res = longtime_sweep(st, k, p, 2.0, args.eps, T_cap=args.T_cap, M=args.M, workers=args.workers)
        prods = [r.product for r in res]
        for r in res:
            print(f"p={p} eps={r.epsilon:<6g} T_esc={r.T_esc:10.4f} T_esc*eps^p={r.product:.4f} cap_hit={r.cap_hit}")
        print(f"p={p} spread max/min = {max(prods) / min(prods):.4f}")
        rows += res
    if args.out:
        write_sweep(args.out, rows)


if __name__ == "__main__":
    main()
