"""Orbit geometry of complex Lagrangians and the doubled-space orbits.

The real symplectic group acting on Lag(V_C) preserves the Hermitian form
h(v, w) = i omega_C(conj(v), w) of signature (n, n); its orbits are the
strata labelled (i, p', q') with i = dim(W ∩ conj(W)) and (p', q') the
signature of h on W.  The label is computed from the eigenvalues of h on an
orthonormal basis (the signature is basis-independent) and cross-checked
against the conjugate-intersection dimension; disagreement near a stratum
boundary is an error, never a guess.

The doubled space (V ⊕ V, omega ⊕ -omega) is rewritten in standard Darboux
coordinates via a fixed assembly isometry, under which graphs of symplectic
maps become Lagrangians; the open orbit of the splitting identifies with the
group itself through graph/un-graph.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import numerics, symplectic
from .errors import (ContractError, DimensionError, FieldError,
                     IllConditionedError, NotAGraphError)
from .numerics import DEFAULT_TOL
from .symplectic import SymplecticSpace

HERMITIAN_BUILD_TOL = 1e-10
SYMMETRY_TOL = 1e-9


@dataclass(frozen=True, order=True)
class StratumLabel:
    """Orbit label (i, p', q') with i + p' + q' = n."""

    i: int
    p: int
    q: int

    def __post_init__(self):
        if min(self.i, self.p, self.q) < 0:
            raise ValueError("label entries must be nonnegative")

    @property
    def n(self):
        return self.i + self.p + self.q

    def __str__(self):
        if self.i == self.n:
            return "R_n"
        return f"H^{self.i}_{{{self.p},{self.q}}}"


def hermitian_form_on(W, tol=DEFAULT_TOL):
    """Matrix of h(v, w) = i omega_C(conj(v), w) on the orthonormal basis of
    a complex isotropic subspace.  Always Hermitian by construction."""
    if W.space.field != "C":
        raise FieldError("the Hermitian form lives on complex subspaces")
    B = W.basis
    H = 1j * (B.conj().T @ W.space.J() @ B)
    defect = np.abs(H - H.conj().T).max(initial=0.0)
    if defect > HERMITIAN_BUILD_TOL:
        raise ContractError(f"h-matrix defect {defect:.2e}")
    return (H + H.conj().T) / 2.0


def classify_lagrangian(W, tol=DEFAULT_TOL):
    """Stratum label of a complex Lagrangian.

    Eigenvalues of h|_W within rank_tol of zero count toward i; the count is
    cross-checked against dim(W ∩ conj(W)) and any mismatch raises
    IllConditionedError (W is too close to a stratum boundary)."""
    if W.space.field != "C":
        raise FieldError("classification needs a complex Lagrangian")
    n = W.space.n
    if W.dim != n:
        raise DimensionError("classification is defined for Lagrangians")
    H = hermitian_form_on(W, tol)
    eigs, _ = numerics.hermitian_eigen(H, tol)
    p = int(np.sum(eigs > tol.rank_tol))
    q = int(np.sum(eigs < -tol.rank_tol))
    i = n - p - q
    Wbar = symplectic.conjugate_subspace(W, tol)
    i_cross = symplectic.intersection_dim(W, Wbar, tol)
    if i_cross != i:
        raise IllConditionedError(
            f"h-nullity {i} disagrees with dim(W ∩ conj W) = {i_cross}; "
            "input is too close to a stratum boundary")
    return StratumLabel(i, p, q)


def stratum_closure(p, q):
    """Labels in the closure of the open stratum H_{p,q}: all (i, p', q')
    with p' <= p, q' <= q and i = n - p' - q'; includes R_n = (n, 0, 0)."""
    n = p + q
    if n < 1:
        raise ValueError("p + q must be >= 1")
    labels = [StratumLabel(n - pp - qq, pp, qq)
              for pp in range(p + 1) for qq in range(q + 1)]
    return sorted(labels, key=lambda lab: (lab.i, -lab.p))


def all_strata(n):
    """Every orbit label for half-dimension n."""
    return sorted((StratumLabel(n - p - q, p, q)
                   for p in range(n + 1) for q in range(n + 1 - p)),
                  key=lambda lab: (lab.i, -lab.p))


# ---------------------------------------------------------------------------
# Bounded-domain model
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def reference_pair(n):
    """The fixed transverse reference Lagrangians: V+ = span (e_j - i f_j)/√2
    (h-positive) and V- = span (e_j + i f_j)/√2 (h-negative, h-orthogonal
    to V+).  Any other admissible pair differs by a group element."""
    P = np.zeros((2 * n, n), dtype=np.complex128)
    M = np.zeros((2 * n, n), dtype=np.complex128)
    for j in range(n):
        P[j, j] = 1 / np.sqrt(2)
        P[n + j, j] = -1j / np.sqrt(2)
        M[j, j] = 1 / np.sqrt(2)
        M[n + j, j] = 1j / np.sqrt(2)
    return P, M


def bounded_domain_embed(space, Z, tol=DEFAULT_TOL):
    """Graph Lagrangian of a symmetric matrix Z: V+ -> V- from the fixed
    reference pair.  ||Z||_op < 1 lands in the open stratum (0, n, 0)."""
    if space.field != "C":
        raise FieldError("bounded-domain model lives in the complex space")
    Z = np.asarray(Z, dtype=np.complex128)
    n = space.n
    if Z.shape != (n, n):
        raise DimensionError("Z must be n x n")
    if np.abs(Z - Z.T).max(initial=0.0) > SYMMETRY_TOL:
        raise ContractError("Z must be symmetric (graph of a Lagrangian)")
    P, M = reference_pair(n)
    return symplectic.isotropic_subspace(space, P + M @ Z, tol)


def mixed_reference(space, p, tol=DEFAULT_TOL):
    """Signature-flipped reference pair: (span(v+_{<=p}, v-_{>p}),
    span(v-_{<=p}, v+_{>p})): a transverse Lagrangian pair on which h has
    signature (p, n-p) resp. (n-p, p)."""
    n = space.n
    P, M = reference_pair(n)
    A = np.concatenate([P[:, :p], M[:, p:]], axis=1)
    B = np.concatenate([M[:, :p], P[:, p:]], axis=1)
    return A, B


def random_lagrangian(space, rng, stratum=None, zeta=0.6, tol=DEFAULT_TOL):
    """Random complex Lagrangian, optionally inside a prescribed stratum.

    Construction: a graph over the signature-flipped reference pair with
    ||Z|| <= zeta (stays inside the open stratum), lifted through a random
    real isotropic subspace for i > 0, then moved by a random real symplectic
    element (real moves preserve every stratum)."""
    if space.field != "C":
        raise FieldError("random complex Lagrangian needs field C")
    n = space.n
    if stratum is None:
        choices = all_strata(n)
        stratum = choices[int(rng.integers(0, len(choices)))]
    if stratum.n != n:
        raise DimensionError("stratum label does not match the space")
    i, p, q = stratum.i, stratum.p, stratum.q
    real_space = SymplecticSpace(n, "R")
    move = symplectic.random_symplectic(real_space, rng, transvections=6, strength=0.4)
    if i == n:
        B = move.matrix @ np.eye(2 * n)[:, :n]
        return symplectic.isotropic_subspace(space, B.astype(np.complex128), tol)
    if i == 0:
        sub = SymplecticSpace(n, "C")
        W = _mixed_graph(sub, p, _random_graph_param(rng, n, p, zeta), tol)
        W = move.matrix.astype(np.complex128) @ W
        return symplectic.isotropic_subspace(space, W, tol)
    # i > 0: lift a reduced-space Lagrangian through a real isotropic Z'
    Zr = symplectic.isotropic_subspace(
        real_space, move.matrix @ np.eye(2 * n)[:, :i], tol)
    red = symplectic.symplectic_reduction(Zr, tol)
    sub = SymplecticSpace(red.reduced_space.n, "C")
    Wred = _mixed_graph(sub, p, _random_graph_param(rng, red.reduced_space.n, p, zeta), tol)
    lift = red.section.astype(np.complex128) @ Wred
    B = np.concatenate([Zr.basis.astype(np.complex128), lift], axis=1)
    return symplectic.isotropic_subspace(space, B, tol)


def _mixed_graph(space, p, Z, tol):
    """Column span of the graph of Z over the signature-flipped reference
    pair.  Lagrangian iff S Z is symmetric for the flip S = diag(1_p, -1)."""
    A, Bref = mixed_reference(space, p, tol)
    return A + Bref @ Z


def _random_graph_param(rng, n, p, norm_bound):
    """Random graph parameter with S Z symmetric and ||Z|| <= norm_bound < 1,
    which keeps the graph inside the open stratum of signature (p, n-p)."""
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    S = np.diag(np.concatenate([np.ones(p), -np.ones(n - p)]))
    Z = (Z + S @ Z.T @ S) / 2.0
    top = numerics.singular_values(Z)[0]
    if top > 0:
        Z *= norm_bound * (0.2 + 0.8 * float(rng.random())) / top
    return Z


def lagrangian_through(F, tol=DEFAULT_TOL):
    """Some Lagrangian containing the isotropic subspace F (reduction,
    reference Lagrangian of the reduced space, lift)."""
    space = F.space
    n = space.n
    if F.dim == n:
        return F
    red = symplectic.symplectic_reduction(F, tol)
    ref = np.eye(2 * red.reduced_space.n, dtype=space.dtype)[:, : red.reduced_space.n]
    lift = red.section.astype(space.dtype) @ ref
    B = np.concatenate([F.basis, lift], axis=1)
    return symplectic.isotropic_subspace(space, B, tol)


# ---------------------------------------------------------------------------
# Doubled-space orbits and the graph identification
# ---------------------------------------------------------------------------

def doubled_space(factor_space):
    """Standard space receiving (V ⊕ V, omega ⊕ -omega)."""
    return SymplecticSpace(2 * factor_space.n, factor_space.field)


def _assembly(factor_space):
    return symplectic.direct_sum_embedding(
        factor_space.n, factor_space.n, -1, factor_space.field)


def first_factor_basis(factor_space):
    """Orthonormal basis of V ⊕ 0 inside the standard doubled space (a
    2n-dimensional non-isotropic subspace: the form restricts to omega)."""
    T = _assembly(factor_space)
    return T[:, : 2 * factor_space.n]


def product_orbit_type(W, tol=DEFAULT_TOL):
    """Orbit index i = dim(W ∩ (V ⊕ 0)) of a Lagrangian in the doubled
    space; 0 is the open orbit containing the diagonal and all graphs."""
    if W.space.n % 2 != 0:
        raise DimensionError("doubled space must have even half-dimension")
    factor = SymplecticSpace(W.space.n // 2, W.space.field)
    return numerics.intersection_dim(W.basis, first_factor_basis(factor), tol)


def graph_lagrangian(g, tol=DEFAULT_TOL):
    """span{(g v, v)} in the standard doubled space; Lagrangian iff g is
    symplectic (the constructor's isotropy check enforces this)."""
    space = g.space
    T = _assembly(space)
    big = doubled_space(space)
    scale = np.exp(-g.log_scale)
    cols = np.concatenate([g.matrix, scale * np.eye(space.dim, dtype=space.dtype)])
    return symplectic.isotropic_subspace(big, T @ cols, tol)


def graph_to_element(W, tol=DEFAULT_TOL):
    """Recover g from its graph; requires W in the open orbit and transverse
    to 0 ⊕ V (otherwise NotAGraphError)."""
    if W.space.n % 2 != 0:
        raise DimensionError("doubled space must have even half-dimension")
    factor = SymplecticSpace(W.space.n // 2, W.space.field)
    dim = factor.dim
    T = _assembly(factor)
    B = T.T @ W.basis
    X, Y = B[:dim], B[dim:]
    sig_Y = numerics.singular_values(Y)
    if sig_Y[-1] <= tol.rank_tol * max(sig_Y[0], 1e-300):
        raise NotAGraphError("W meets V ⊕ 0: not a graph")
    sig_X = numerics.singular_values(X)
    if sig_X[-1] <= tol.rank_tol * max(sig_X[0], 1e-300):
        raise NotAGraphError("W meets 0 ⊕ V: graph of a singular map")
    g = X @ np.linalg.inv(Y)
    return symplectic.group_element(factor, g, tol=tol)


def diagonal_lagrangian(factor_space, tol=DEFAULT_TOL):
    """The diagonal {(v, v)} = graph of the identity."""
    return graph_lagrangian(symplectic.identity_element(factor_space), tol)
