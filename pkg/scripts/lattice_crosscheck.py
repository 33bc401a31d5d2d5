"""Spectral triangular-kernel runs against the lattice equation, linear and nonlinear."""

from nlwave.experiments import gaussian_state, lattice_crosscheck
from nlwave.spectral import make_grid


def main():
    st = gaussian_state(make_grid(16.0, 512))
    for label, kw in (("linear t=10", dict(t_end=10.0, nonlinear=False)), ("p=1 eps=0.1 t=5", dict(t_end=5.0))):
        for method in ("rk4", "strang"):
            res = lattice_crosscheck(st.u, st.v, 1, 0.1, refinements=2, method=method, **kw)
            devs = ", ".join(f"{d:.2e}" for d in res.deviations)
            print(f"{label:<16} spectral={method:<6} dt={res.dts}: {devs}")


if __name__ == "__main__":
    main()
