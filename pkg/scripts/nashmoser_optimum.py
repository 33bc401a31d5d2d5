"""Minimum of P_min(D) over D > 3."""

from nlwave.nashmoser import nash_moser_params, optimize_pmin

D, P = optimize_pmin()
print(f"D* = {D:.6f}  P* = {P:.6f}")
print(f"P_min(6) = {nash_moser_params(6.0).P_min!r}")
for d in (3.5, 5.0, 7.35, 10.0, 20.0):
    print(f"P_min({d}) = {nash_moser_params(d).P_min:.4f}")
