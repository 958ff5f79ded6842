"""Constructors for the example representation families.

* Fuchsian generators: side-pairing translations of the regular 4g-gon,
  axes through the origin at angles k*pi/(2g), common translation length
  cosh(l/2) = cot(pi/(4g)).  These satisfy the surface presentation used
  throughout (see words.GroupPresentation.relator).
* The 2n-dimensional irreducible representation of SL(2,R) on degree-(2n-1)
  homogeneous polynomials, conjugated so its invariant skew form becomes the
  standard J (the form is solved for numerically and Darboux-normalized,
  which avoids sign-convention errors).
* Products into the doubled space with epsilon = +-1, realification of
  complex representations, and complexification.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import numerics, symplectic, words
from .errors import ConstructionError, ContractError, FieldError
from .numerics import DEFAULT_TOL
from .symplectic import GroupElement, SymplecticSpace

RELATOR_TOL = 1e-6


@dataclass(frozen=True)
class Representation:
    """Generator images of a presentation in Sp(2n, K).

    images maps every letter (generators and inverses) to a GroupElement;
    relator_sign records the +-Id lift ambiguity of surface relators."""

    presentation: words.GroupPresentation
    space: SymplecticSpace
    images: dict
    lineage: str = "custom"
    relator_sign: int = 0
    name: str = ""

    def __getitem__(self, letter):
        return self.images[letter]

    def generator_matrices(self):
        """Stored matrices and log-scales for all letters, stacked."""
        m = self.presentation.n_letters
        mats = np.stack([self.images[l].matrix for l in range(m)])
        logs = np.array([self.images[l].log_scale for l in range(m)])
        return mats, logs


def make_representation(presentation, space, generator_matrices, lineage="custom",
                        name="", tol=DEFAULT_TOL):
    """Wrap generator matrices (one per generator) into a Representation.

    Validates symplecticity of every image and, for surface groups, that the
    relator evaluates to +-Id within 1e-6 (the sign is recorded)."""
    gens = list(generator_matrices)
    if len(gens) != presentation.n_generators:
        raise ConstructionError("wrong number of generator matrices")
    images = {}
    for k, M in enumerate(gens):
        g = symplectic.group_element(space, M, tol=tol)
        images[2 * k] = g
        images[2 * k + 1] = symplectic.inverse(g)
    sign = 0
    if presentation.kind == "surface":
        val = _evaluate_letters(images, presentation.relator, space)
        full = np.exp(val.log_scale) * val.matrix
        dev_plus = np.abs(full - np.eye(space.dim)).max()
        dev_minus = np.abs(full + np.eye(space.dim)).max()
        dev = min(dev_plus, dev_minus)
        # forward error of the relator product is governed by the product of
        # the letter norms (the partial products climb far above the final
        # +-Id before cancelling); accept the backward-stable bound when it
        # exceeds the nominal tolerance
        log_amp = sum(images[l].log_scale + 0.5 * np.log(space.dim)
                      for l in presentation.relator)
        bound = max(RELATOR_TOL,
                    64.0 * np.finfo(float).eps * float(np.exp(min(log_amp, 700.0))))
        if dev > bound:
            raise ConstructionError(
                f"relator residual {dev:.3e} exceeds {bound:.3e}")
        sign = 1 if dev_plus <= dev_minus else -1
    return Representation(presentation, space, images, lineage, sign, name)


def _evaluate_letters(images, word, space):
    g = symplectic.identity_element(space)
    for letter in word:
        g = symplectic.multiply(g, images[letter])
    return g


def evaluate_words_batched(rep, word_rows):
    """Evaluate a list/array of equal-or-ragged words; returns (mats, logs)
    with per-word renormalization (rows are padded internally)."""
    mats_by_letter, logs_by_letter = rep.generator_matrices()
    dim = rep.space.dim
    N = len(word_rows)
    lengths = np.array([len(w) for w in word_rows])
    Lmax = int(lengths.max(initial=0))
    padded = np.zeros((N, Lmax), dtype=np.int16)
    for r, w in enumerate(word_rows):
        padded[r, : len(w)] = np.asarray(w, dtype=np.int16)
    M = np.broadcast_to(np.eye(dim, dtype=rep.space.dtype), (N, dim, dim)).copy()
    logs = np.zeros(N)
    for j in range(Lmax):
        active = lengths > j
        if not active.any():
            break
        letters = padded[active, j]
        M[active] = np.einsum("nij,njk->nik", M[active], mats_by_letter[letters])
        sc = np.abs(M[active]).reshape(-1, dim * dim).max(axis=1)
        M[active] /= sc[:, None, None]
        logs[active] += np.log(sc) + logs_by_letter[letters]
    return M, logs


# ---------------------------------------------------------------------------
# Fuchsian generators
# ---------------------------------------------------------------------------

def fuchsian_generators(genus):
    """2g hyperbolic side-pairing translations of the regular 4g-gon.

    Generator k translates by l along the axis through the origin (basepoint
    i) at angle k*pi/(2g), with cosh(l/2) = cot(pi/(4g)); each has det 1 and
    trace 2 cot(pi/(4g)).  The surface relator evaluates to +-Id; a residual
    above 1e-6 raises ConstructionError."""
    if genus < 2:
        raise ValueError("genus must be >= 2")
    half = np.arccosh(1.0 / np.tan(np.pi / (4 * genus)))
    A = np.diag([np.exp(half), np.exp(-half)])
    gens = []
    for k in range(2 * genus):
        phi = k * np.pi / (2 * genus)
        c, s = np.cos(phi / 2), np.sin(phi / 2)
        R = np.array([[c, -s], [s, c]])
        gens.append(R @ A @ R.T)
    pres = words.surface_group(genus)
    M = np.eye(2)
    for letter in pres.relator:
        G = gens[letter // 2]
        if letter % 2:
            a, b, c, d = G.ravel()
            G = np.array([[d, -b], [-c, a]]) / (a * d - b * c)
        M = M @ G
    dev = min(np.abs(M - np.eye(2)).max(), np.abs(M + np.eye(2)).max())
    if dev > RELATOR_TOL:
        raise ConstructionError(f"octagon relator residual {dev:.3e}", )
    return gens


def fuchsian_representation(genus, tol=DEFAULT_TOL):
    """The Fuchsian representation itself (n = 1).  SL(2,R) = Sp(2,R)."""
    pres = words.surface_group(genus)
    space = SymplecticSpace(1, "R")
    return make_representation(pres, space, fuchsian_generators(genus),
                               lineage="fuchsian", name=f"fuchsian-g{genus}", tol=tol)


# ---------------------------------------------------------------------------
# The irreducible SL(2) representation
# ---------------------------------------------------------------------------

def sym_power_matrix(A, n):
    """Action of a 2x2 matrix on degree-(2n-1) homogeneous polynomials in the
    monomial basis (functorial symmetric power, hence a homomorphism)."""
    A = np.asarray(A)
    k = 2 * n - 1
    dtype = np.complex128 if np.iscomplexobj(A) else np.float64
    out = np.empty((k + 1, k + 1), dtype=dtype)
    a, b, c, d = A[0, 0], A[1, 0], A[0, 1], A[1, 1]
    for j in range(k + 1):
        # column j: expand (A e1)^(k-j) (A e2)^j
        poly = np.ones(1, dtype=dtype)
        for _ in range(k - j):
            poly = np.convolve(poly, np.array([a, b], dtype=dtype))
        for _ in range(j):
            poly = np.convolve(poly, np.array([c, d], dtype=dtype))
        out[:, j] = poly
    return out


def invariant_skew_form(mats, tol=DEFAULT_TOL):
    """Solve g^T B g = B over the given matrices; requires a one-dimensional
    solution space and returns its skew representative."""
    mats = [np.asarray(M) for M in mats]
    m = mats[0].shape[0]
    blocks = []
    for g in mats:
        L = np.empty((m * m, m * m))
        for kk in range(m):
            for ll in range(m):
                E = np.zeros((m, m))
                E[kk, ll] = 1.0
                L[:, kk * m + ll] = (g.T @ E @ g - E).ravel()
        blocks.append(L)
    stacked = np.vstack(blocks)
    ns = numerics.null_space(stacked, tol)
    if ns.shape[1] != 1:
        raise ConstructionError(
            f"invariant-form solution space has dimension {ns.shape[1]}, expected 1"
        )
    B = ns[:, 0].reshape(m, m)
    B = (B - B.T) / 2.0
    if np.abs(B).max() < tol.rank_tol:
        raise ConstructionError("invariant form is symmetric, not skew")
    B = B / np.abs(B).max()
    # the solution direction has an arbitrary overall sign; canonicalize so
    # the first nonzero entry of the first row is positive
    row = B[0]
    lead = np.argmax(np.abs(row) > tol.rank_tol)
    if row[lead] < 0:
        B = -B
    return B


@lru_cache(maxsize=16)
def _sym_power_change_of_basis(n):
    """Fixed change of basis carrying the invariant form of Sym^{2n-1} to the
    standard J, computed once per n from two fixed generic elements.  The
    best-conditioned (orthogonal normal form) Darboux basis is used so the
    conjugation distorts transversality margins as little as possible."""
    probes = [np.array([[2.0, 1.0], [1.0, 1.0]]), np.array([[1.0, -1.0], [1.0, 0.5]])]
    probes = [P / np.sqrt(np.linalg.det(P)) for P in probes]
    mats = [sym_power_matrix(P, n) for P in probes]
    B = invariant_skew_form(mats)
    C = symplectic.skew_normal_basis(B)
    return C, np.linalg.inv(C)


class SymPowerMap:
    """Callable mapping SL(2,K) matrices into Sp(2n,K) matrices."""

    def __init__(self, n):
        self.n = n
        self._C, self._Cinv = _sym_power_change_of_basis(n)

    def __call__(self, A, tol=DEFAULT_TOL):
        A = np.asarray(A)
        det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        if abs(det - 1.0) > 1e-9:
            raise ContractError(f"input must have det 1 (got {det})")
        return self._Cinv @ sym_power_matrix(A, self.n) @ self._C


def sym_power_rep(n):
    """The 2n-dimensional irreducible representation of SL(2), normalized to
    preserve the standard symplectic form."""
    return SymPowerMap(n)


def build_hitchin_base(genus, n, tol=DEFAULT_TOL):
    """The irreducible Fuchsian composition: Fuchsian generators pushed
    through the 2n-dimensional irreducible representation."""
    if genus < 2 or n < 1:
        raise ValueError("need genus >= 2 and n >= 1")
    pres = words.surface_group(genus)
    space = SymplecticSpace(n, "R")
    pi2n = sym_power_rep(n)
    mats = [pi2n(G) for G in fuchsian_generators(genus)]
    return make_representation(pres, space, mats, lineage="sym_power",
                               name=f"hitchin-g{genus}-n{n}", tol=tol)


# ---------------------------------------------------------------------------
# Products, realification, complexification
# ---------------------------------------------------------------------------

def trivial_rep(presentation, space):
    """The trivial representation into Sp of the given space."""
    ident = np.eye(space.dim)
    images = {}
    for k in range(presentation.n_generators):
        g = symplectic.group_element(space, ident)
        images[2 * k] = g
        images[2 * k + 1] = g
    return Representation(presentation, space, images, "trivial", 1, "trivial")


def product_rep(rho1, rho2, epsilon, tol=DEFAULT_TOL):
    """Block-diagonal representation on the doubled space with form
    omega (+) epsilon*omega, rewritten in the standard coordinates."""
    if rho1.presentation != rho2.presentation:
        raise ContractError("product factors must share a presentation")
    if rho1.space.field != rho2.space.field:
        raise FieldError("product factors must share a field")
    pres = rho1.presentation
    big = SymplecticSpace(rho1.space.n + rho2.space.n, rho1.space.field)
    mats = []
    for k in range(pres.n_generators):
        g = symplectic.direct_sum_element(rho1.images[2 * k], rho2.images[2 * k],
                                          epsilon, tol)
        mats.append(np.exp(g.log_scale) * g.matrix)
    return make_representation(
        pres, big, mats, lineage=f"product({epsilon:+d})",
        name=f"product({rho1.name},{rho2.name},eps={epsilon:+d})", tol=tol)


def realify_matrix(M):
    """Realification of a complex 2n x 2n matrix: each entry a+bi becomes
    [[a,-b],[b,a]] in split (real, imaginary) coordinates, then the
    coordinates are rearranged so Re(omega_C) is the standard J."""
    M = np.asarray(M)
    n2 = M.shape[0]
    A, B = M.real, M.imag
    split = np.block([[A, -B], [B, A]])
    T = symplectic.direct_sum_embedding(n2 // 2, n2 // 2, -1)
    return T @ split @ T.T


def realify(rho, tol=DEFAULT_TOL):
    """Representation over R on the realified space (half-dimension 2n)."""
    if rho.space.field != "C":
        raise FieldError("realify expects a complex representation")
    pres = rho.presentation
    big = SymplecticSpace(2 * rho.space.n, "R")
    mats = []
    for k in range(pres.n_generators):
        g = rho.images[2 * k]
        mats.append(np.exp(g.log_scale) * realify_matrix(g.matrix))
    return make_representation(pres, big, mats, lineage="realified",
                               name=f"realified({rho.name})", tol=tol)


def complexify_rep(rho, tol=DEFAULT_TOL):
    """Same matrices, re-tagged complex (Sp(2n,R) inside Sp(2n,C))."""
    if rho.space.field != "R":
        raise FieldError("complexify expects a real representation")
    space = rho.space.complexified()
    mats = [np.exp(rho.images[2 * k].log_scale) * rho.images[2 * k].matrix
            for k in range(rho.presentation.n_generators)]
    return make_representation(rho.presentation, space, mats, lineage="complexified",
                               name=f"complexified({rho.name})", tol=tol)
