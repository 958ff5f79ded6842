"""Domains of discontinuity for the complexified Hitchin representation.

The bad set over the limit sample consists of complex Lagrangians through a
limit line.  Every Lagrangian whose h-signature is definite-or-mixed with
trivial real intersection (the open strata) stays outside; real Lagrangians
built through a sampled limit line land inside.  A properness witness counts
orbit returns for a point of the Siegel-space orbit.

Run:  python demos/05_domains_of_discontinuity.py
"""

import numpy as np

from anosym import anosov, dod, lagrangians as lg, reps, symplectic

rep_R = reps.build_hitchin_base(2, 2)
rep_C = reps.complexify_rep(rep_R)
sample = anosov.limit_sample(rep_C, 1, 5, 80, seed=11)
print(f"complex limit sample: {len(sample)} lines")

# open strata stay outside the bad set
violations = dod.r0_inclusion_audit(rep_C, sample, 25, seed=1)
print("open-strata audit violations (expect 0):", violations)

# the Siegel-space base point is far from the bad set...
W0 = lg.bounded_domain_embed(rep_C.space, np.zeros((2, 2)))
verdict = dod.in_bad_set(W0, sample)
print(f"bounded-domain base point: {verdict.verdict}, margin {verdict.margin:.3f}")

# ...while a real Lagrangian through a sampled limit line is inside it
L = lg.lagrangian_through(sample.points[0].subspace)
verdict = dod.in_bad_set(L, sample)
print(f"real Lagrangian through a limit line: {verdict.verdict}, "
      f"margin {verdict.margin:.2e}")

# properness witness at the base point, per word length
report = dod.properness_witness(rep_C, W0, sample, 4)
print("\nproperness witness counts by word length:",
      dict(sorted(report.counts_by_length.items())))
print("total returns (1 = identity only):", report.total)

# line-sample disjointness margin (no Lagrangian contains two limit lines)
rep_real_sample = anosov.limit_sample(rep_R, 1, 5, 40, seed=5)
print("\ndisjointness margin of the real line sample:",
      f"{dod.disjointness_audit(rep_real_sample):.3e}")
