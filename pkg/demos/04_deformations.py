"""Deformations h_B of SU(1,m) cap AN.

A deformation matrix B is orthogonally conjugate to the SU block form
exactly when its symmetric part is scalar and its skew part is a multiple
of an orthogonal matrix.  The nilradical of h_B has center of dimension
1 + dim ker(B^T - B).
"""
import numpy as np
import sympy as sp

from cartanlab import catalog as C
from cartanlab.classify import center_dim, su_conjugacy, su_conjugacy_search

examples = {
    "complex structure J": C.standard_complex_structure(4),
    "2 I + 3 J": 2 * sp.eye(4) + 3 * C.standard_complex_structure(4),
    "explicit m = 3 matrix": sp.Matrix([[0, 1, 0, 1], [-1, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]),
    "random": C.random_deformation(4, np.random.default_rng(3)).B,
}

for name, B in examples.items():
    d = su_conjugacy(B)
    found, resid = su_conjugacy_search(B, starts=10)
    h = C.h_B(3, B)
    nil = C.Subalgebra.span("so2n", 6, [b for b in h.basis if b.coords.is_nilpotent()])
    print(f"{name:<22} SU-type: {'yes' if d.yes else 'no ':<4} (search residual {resid:.1e})"
          f"  center of nilradical: {center_dim(nil)}")
    print(f"{'':<22} charpoly {sp.factor(sp.Matrix(B).charpoly().as_expr())}")
