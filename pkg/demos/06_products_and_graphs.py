"""The doubled space (V + V, omega + -omega): product representations,
graph Lagrangians, the orbit index, and the Lagrangian-vs-Lagrangian
domain for pairs of Fuchsian representations.

Run:  python demos/06_products_and_graphs.py
"""

import numpy as np

from anosym import anosov, cartan, dod, lagrangians as lg, reps, symplectic
from anosym.symplectic import SymplecticSpace

fuch = reps.fuchsian_representation(2)
triv = reps.trivial_rep(fuch.presentation, SymplecticSpace(1, "R"))

# (iota, 1): mu = (lam, 0) per generator; (iota, iota): mu = (lam, lam)
p1 = reps.product_rep(fuch, triv, -1)
p2 = reps.product_rep(fuch, fuch, -1)
print("(iota,1)    generator mu:", np.round(cartan.cartan_projection(p1.images[0]).lam, 4))
print("(iota,iota) generator mu:", np.round(cartan.cartan_projection(p2.images[0]).lam, 4))

# graphs of symplectic maps are Lagrangians of the doubled space; the open
# orbit T_0 identifies with the group through graph / un-graph
spr = SymplecticSpace(1, "R")
rng = np.random.default_rng(3)
g = symplectic.random_symplectic(spr, rng)
W = lg.graph_lagrangian(g)
print("\norbit index of a graph:", lg.product_orbit_type(W))
print("orbit index of the diagonal:", lg.product_orbit_type(lg.diagonal_lagrangian(spr)))
h = lg.graph_to_element(W)
print("graph round-trip error:",
      np.abs(np.exp(g.log_scale) * g.matrix - np.exp(h.log_scale) * h.matrix).max())

# the Q_n domain for a pair of Fuchsians: graphs of rotations stay
# transverse to every sampled limit Lagrangian
sample = anosov.limit_sample(p2, 2, 4, 30, seed=3)
th = 0.7
rot = symplectic.group_element(spr, np.array([[np.cos(th), -np.sin(th)],
                                              [np.sin(th), np.cos(th)]]))
Wrot = lg.graph_lagrangian(rot)
verdict = dod.d_xi_membership(Wrot, sample)
print(f"\ngraph of a rotation in D_xi? {verdict.in_domain} "
      f"(margin {verdict.margin:.3e})")
own = dod.d_xi_membership(sample.points[0].subspace, sample)
print(f"a limit Lagrangian itself in D_xi? {own.in_domain}")
