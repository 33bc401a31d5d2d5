"""Observed orders of the Strang and RK4 integrators on the default nonlinear problem."""

import argparse

from nlwave.experiments import convergence_study, default_problem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-end", type=float, default=2.0)
    ap.add_argument("--p", type=int, default=1)
    ap.add_argument("--epsilon", type=float, default=0.1)
    args = ap.parse_args()

    prob = default_problem(epsilon=args.epsilon, p=args.p, t_end=args.t_end)
    for method, dts in (("strang", (0.04, 0.02, 0.01, 0.005)), ("rk4", (0.02, 0.01, 0.005, 0.0025))):
        res = convergence_study(prob, dts, method)
        print(method)
        for h, d in zip(res.dts, res.differences):
            print(f"  dt={h:<8g} |y_h - y_h/2| = {d:.3e}")
        print("  orders:", ", ".join(f"{o:.3f}" for o in res.orders))


if __name__ == "__main__":
    main()
