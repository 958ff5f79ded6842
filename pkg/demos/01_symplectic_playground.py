"""Symplectic basics: the standard form, isotropic subspaces, complements,
transversality, and reduction.

Run:  python demos/01_symplectic_playground.py
"""

import numpy as np

from anosym import symplectic
from anosym.symplectic import SymplecticSpace, isotropic_subspace, line_subspace

sp = SymplecticSpace(2, "R")
print("Standard form J for n=2:")
print(sp.J().astype(int))

# a Lagrangian and its symplectic complement (itself)
L = isotropic_subspace(sp, np.eye(4)[:, :2])
print("\nLagrangian span(e1,e2); complement dimension:",
      symplectic.symplectic_orthogonal(L).shape[1], "(a Lagrangian is its own complement)")

# a line's complement is a 3-dimensional coisotropic
l = line_subspace(sp, np.eye(4)[:, 0])
print("line span(e1); complement dimension:", symplectic.symplectic_orthogonal(l).shape[1])

# transversality of the two standard Lagrangians
M = isotropic_subspace(sp, np.eye(4)[:, 2:])
print("\nspan(e1,e2) transverse to span(f1,f2)?", symplectic.is_transverse(L, M))
print("span(e1,e2) transverse to itself?", symplectic.is_transverse(L, L))

# symplectic reduction by the line span(e1): a standard K^2 emerges
red = symplectic.symplectic_reduction(l)
print("\nreduction by span(e1): reduced half-dimension =", red.reduced_space.n)
e2, f2 = np.eye(4)[:, 1], np.eye(4)[:, 3]
print("omega'(proj e2, proj f2) =",
      float((red.project @ e2) @ red.reduced_space.J() @ (red.project @ f2)))

# random symplectic elements: products of transvections, with the
# reciprocal-pair law of their singular values
rng = np.random.default_rng(1)
g = symplectic.random_symplectic(sp, rng)
from anosym import numerics
sigma = numerics.singular_values(np.exp(g.log_scale) * g.matrix)
print("\nrandom element singular values:", np.round(sigma, 4))
print("reciprocal products:", np.round(sigma * sigma[::-1], 12))
