"""Limit maps: proximal fixed points, equivariance, dynamics preservation,
and the transversality audit.

Run:  python demos/03_limit_maps_and_dynamics.py
"""

import numpy as np

from anosym import anosov, cartan, numerics, reps, symplectic, words

rep = reps.build_hitchin_base(2, 2)
pres = rep.presentation

# attracting / repelling fixed lines of a single element
g = cartan.word_value(rep, words.parse_word("a b", pres))
Fp, Fm = anosov.proximal_fixed_points(g, 1)
print("F+(ab) =", np.round(Fp.basis.ravel(), 4))
print("F-(ab) =", np.round(Fm.basis.ravel(), 4))
print("g-invariance drift:",
      numerics.subspace_distance(symplectic.apply_element(g, Fp).basis, Fp.basis))

# a 60-point sample of the limit map into P(R^4)
sample = anosov.limit_sample(rep, 1, 5, 60, seed=11)
print(f"\nsampled {len(sample)} boundary points "
      f"(skipped {sample.skipped}/{sample.attempted} non-proximal words)")

audit = anosov.transversality_audit(sample)
print(f"transversality margin over {audit.pair_count} pairs: {audit.margin:.3e} "
      f"(min |omega| {audit.min_omega:.3e}) -> {'pass' if audit.passed else 'fail'}")

dyn = anosov.dynamics_preservation_check(rep, sample, n_tests=25, seed=5)
print(f"dynamics preservation: {dyn.tests - dyn.failures}/{dyn.tests} converged, "
      f"median iterations {dyn.median_iterations}")

# equivariance: xi(gamma . t) = rho(gamma) . xi(t) for a generator gamma
delta = words.parse_word("b a'", pres)
gamma = words.parse_word("c", pres)
conj = words.reduce(gamma + delta + words.word_inverse(gamma), pres)
F_conj, _ = anosov.proximal_fixed_points(cartan.word_value(rep, conj), 1)
F_delta, _ = anosov.proximal_fixed_points(cartan.word_value(rep, delta), 1)
moved = symplectic.apply_element(cartan.word_value(rep, gamma), F_delta)
print("\nequivariance check, span distance:",
      numerics.subspace_distance(F_conj.basis, moved.basis))
