"""The orbit decomposition of complex Lagrangians.

The real symplectic group preserves h(v,w) = i omega_C(conj(v), w); its
orbits on Lag(V_C) are labelled by dim(W ∩ conj(W)) and the signature of h.
This demo classifies hand-built and random Lagrangians, shows the closure
lattice, and exercises the bounded-domain model.

Run:  python demos/04_complex_lagrangian_strata.py
"""

import numpy as np

from anosym import lagrangians as lg
from anosym import numerics, symplectic
from anosym.symplectic import SymplecticSpace, isotropic_subspace, line_subspace

sp1 = SymplecticSpace(1, "C")
for desc, v in [("(e1 + i f1)/sqrt2", np.array([1.0, 1j]) / np.sqrt(2)),
                ("(e1 - i f1)/sqrt2", np.array([1.0, -1j]) / np.sqrt(2)),
                ("e1 (real)", np.array([1.0, 0.0], dtype=complex))]:
    W = line_subspace(sp1, v)
    print(f"n=1  {desc:22s} -> {lg.classify_lagrangian(W)}")

print("\nclosure of H_{1,0} (upper hemisphere):",
      [str(l) for l in lg.stratum_closure(1, 0)])
print("closure of H_{1,1} at n=2:        ",
      [str(l) for l in lg.stratum_closure(1, 1)])

sp2 = SymplecticSpace(2, "C")
W = isotropic_subspace(sp2, np.array([[1, 0], [0, 1], [1j, 0], [0, -1j]],
                                     dtype=complex) / np.sqrt(2))
print("\nspan(e1+if1, e2-if2) ->", lg.classify_lagrangian(W))

# bounded-domain model: graphs of symmetric Z over the reference pair
print("\nbounded domain, n=2:")
print("  Z = 0           ->", lg.classify_lagrangian(lg.bounded_domain_embed(sp2, np.zeros((2, 2)))))
rng = np.random.default_rng(0)
Z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
Z = (Z + Z.T) / 2
Z *= 0.5 / numerics.singular_values(Z)[0]
print("  ||Z|| = 0.5     ->", lg.classify_lagrangian(lg.bounded_domain_embed(sp2, Z)))

# every stratum is reachable by the targeted sampler, and real moves keep it
print("\nstratum sampler + action invariance (n=2):")
real_sp = SymplecticSpace(2, "R")
for lab in lg.all_strata(2):
    W = lg.random_lagrangian(sp2, rng, lab)
    g = symplectic.random_symplectic(real_sp, rng)
    moved = isotropic_subspace(sp2, g.matrix.astype(complex) @ W.basis)
    print(f"  target {str(lab):10s} sampled {str(lg.classify_lagrangian(W)):10s}"
          f" after move {lg.classify_lagrangian(moved)}")
