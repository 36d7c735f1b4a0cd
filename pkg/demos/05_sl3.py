"""SL(3,R): the opposition involution and the B+ ray.

Any connected H with d(H) >= 2 contains a path from h to h^-1; their
Cartan projections are swapped by the opposition involution, so the path
crosses its fixed ray B+, and mu(H) cannot avoid it.
"""
import numpy as np

from cartanlab import catalog as C
from cartanlab.classify import ck_verdict, sl3_d
from cartanlab.properness import appendix_constant, sl3_bplus_crossing

for which in C.SL3_WHICH:
    h = C.sl3_subgroups(which)
    res = sl3_bplus_crossing(h, t_max=10, steps=5)
    print(f"{which:<22} d = {sl3_d(h)}  max distance to B+ along the crossing "
          f"{max(res.minima):.1e}  verdict {ck_verdict(h).verdict}")

print("\nmu is 1-Lipschitz under bounded perturbation:")
for scale in (1e2, 1e4, 1e6):
    c = appendix_constant(200, scale, seed=0)
    print(f"  |g| up to {scale:.0e}: C = {c.C:.4f}")
print(f"  (largest possible value is {np.float64(1.0):.1f})")
