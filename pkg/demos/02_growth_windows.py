"""Sample mu along a few subgroups and compare fitted exponents with the theory.

The exponent e of a trajectory is the slope of u1 + u2 against u1, so e = 1
hugs the wall u2 = 0 and e = 2 the diagonal u1 = u2.
"""
import sympy as sp

from cartanlab import catalog as C
from cartanlab.classify import classify_type
from cartanlab.growth import fit_window, predicted_window, sample_orbit

cases = {
    "so1n_an": C.so1n_an(4),
    "h_SU": C.h_SU(2),
    "l5_an": C.l5_an(4),
    "T2.6-8, p=1/2": C.exemplar("P2.10", 4, {"p": sp.Rational(1, 2), "omega": "alpha"}),
    "T2.6-8, p=1/2, beta": C.exemplar("P2.10", 4, {"p": sp.Rational(1, 2), "omega": "beta"}),
    "T2.6-1 (1,2)": C.exemplar("T2.6-1", 4),
}

for name, h in cases.items():
    pred = predicted_window(classify_type(h))
    fit = fit_window(sample_orbit(h, seed=0))
    print(f"{name:<22} predicted [{pred.p:.3f}, {pred.q:.3f}]   fitted [{fit.p:.3f}, {fit.q:.3f}]")
