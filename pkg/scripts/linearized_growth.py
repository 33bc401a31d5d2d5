"""Growth rate of the linearized energy under a resonant pump, for eps and eps/2."""

import argparse
import math

from nlwave.experiments import linearized_growth_fit, resonant_pump
from nlwave.kernels import builtin_kernel
from nlwave.spectral import make_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kernel", default="dirac")
    ap.add_argument("--tau-end", type=float, default=6.0)
    args = ap.parse_args()

    g = make_grid(math.pi, 64)
    k = builtin_kernel(args.kernel)
    w = resonant_pump(g, k)
    for p, eps in ((1, (0.1, 0.05)), (2, (0.2, 0.1))):
        fits = linearized_growth_fit(w, k, 2.0, p, eps, tau_end=args.tau_end)
        ratio = fits[0].kappa / fits[1].kappa
        print(f"p={p} kappa={[round(f.kappa, 6) for f in fits]} ratio={ratio:.4f} (expect {2 ** p})")


if __name__ == "__main__":
    main()
