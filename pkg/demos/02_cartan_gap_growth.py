"""Cartan projections and root-gap growth along spheres.

Builds the genus-2 irreducible Fuchsian composition into Sp(4,R), scans
word spheres, and prints how the sphere minima of the simple-root values
grow with word length (the divergence condition in practice).

Run:  python demos/02_cartan_gap_growth.py
"""

import numpy as np

from anosym import anosov, cartan, reps

rep = reps.build_hitchin_base(2, 2)
print("generator mu:", np.round(cartan.cartan_projection(rep.images[0]).lam, 4))

scan = anosov.sphere_scan(rep, 6, seed=0)
print("\n L   count      min a1     mean a1     min a2     mean a2")
for s in scan.spheres:
    print(f"{s.length:2d} {s.count:8d}   {s.min_alpha[0]:8.4f}  {s.mean_alpha[0]:9.4f}"
          f"  {s.min_alpha[1]:9.4f}  {s.mean_alpha[1]:9.4f}")

for i in (1, 2):
    rep_i = anosov.divergence_report(rep, i, 6, scan=scan)
    print(f"\nalpha_{i}: slope {rep_i.slope:.3f} (se {rep_i.slope_se:.3f})"
          f" -> verdict {rep_i.verdict}")

qi = anosov.qi_embedding_check(rep, 6, scan=scan)
print(f"\nQI embedding: constants L={qi.L_fit:.3f}, l={qi.l_fit:.3f}, "
      f"d/|gamma| window {np.round(qi.ratio_window, 3)} -> {qi.verdict}")

# contrast: the product (iota, iota) with eps=-1 has alpha_1 identically zero
fuch = reps.fuchsian_representation(2)
prod = reps.product_rep(fuch, fuch, -1)
scan2 = anosov.sphere_scan(prod, 5, seed=0)
r1 = anosov.divergence_report(prod, 1, 5, scan=scan2)
r2 = anosov.divergence_report(prod, 2, 5, scan=scan2)
print(f"\n(iota,iota), eps=-1: alpha_1 verdict {r1.verdict} "
      f"(minima all {max(r1.minima):.1e}), alpha_2 verdict {r2.verdict}")
