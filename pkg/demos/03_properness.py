"""Cone separation between sampled Cartan projections.

SO(1,4) lives on the wall and h_B on the diagonal, so their samples drift
apart linearly; two deformations h_B, h_B' share the diagonal and do not.
"""
from cartanlab import catalog as C
from cartanlab.growth import sample_orbit
from cartanlab.properness import (cone_separation, ideal_slope, proper_pair_predicted,
                                  reductive_sample)
from cartanlab.classify import classify_type

so = reductive_sample("SO(1,n)", 4)
hb = C.h_B(2, C.default_hb_matrix(2))
s_hb = sample_orbit(hb, n_dirs=4)
s_hb2 = sample_orbit(C.h_B(2, [[1, 3], [-2, 1]]), n_dirs=4, seed=1)

pred = proper_pair_predicted("SO(1,n)", classify_type(hb))
rep = cone_separation(so, s_hb, predicted=pred, ideal=ideal_slope("SO(1,n)", classify_type(hb)))
print(f"SO(1,4) vs h_B : predicted {pred}, slope {rep.slope:.3f} -> {rep.empirical}")
for R, d in zip(rep.radii, rep.distances):
    print(f"    R = {R:6.2f}  distance {d:6.2f}")

rep2 = cone_separation(s_hb, s_hb2)
print(f"h_B vs h_B'    : slope {rep2.slope:.3f} -> {rep2.empirical}")
