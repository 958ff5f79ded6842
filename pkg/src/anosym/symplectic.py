"""The standard symplectic vector space (K^{2n}, omega) and its predicates.

Conventions fixed repo-wide:

* Darboux coordinates (e_1 .. e_n, f_1 .. f_n) with omega(e_j, f_k) = delta_jk,
  so the form matrix is J = [[0, Id], [-Id, 0]] and omega(v, w) = v^T J w.
  The form is bilinear over C as well (no conjugation).
* Subspaces are stored as orthonormal basis matrices and compared only via
  principal angles and rank tests, never entrywise.
* Group elements carry a log-scale factor so that long word products never
  overflow: the stored matrix equals exp(-log_scale) * g.
"""

from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .errors import ContractError, DimensionError, FieldError
from .numerics import DEFAULT_TOL


@dataclass(frozen=True)
class SymplecticSpace:
    """The standard symplectic K^{2n}."""

    n: int
    field: str = "R"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("half-dimension n must be >= 1")
        if self.field not in ("R", "C"):
            raise ValueError("field must be 'R' or 'C'")

    @property
    def dim(self):
        return 2 * self.n

    @property
    def dtype(self):
        return np.complex128 if self.field == "C" else np.float64

    def J(self):
        return standard_J(self.n, self.field)

    def complexified(self):
        return SymplecticSpace(self.n, "C")


def standard_J(n, field="R"):
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J.astype(np.complex128) if field == "C" else J


def omega(space, v, w):
    """The symplectic pairing v^T J w (bilinear, also over C)."""
    return np.asarray(v).T @ space.J() @ np.asarray(w)


@dataclass(frozen=True)
class IsotropicSubspace:
    """A point of Is_i(V): orthonormal 2n x i basis of an omega-isotropic
    subspace.  i = n is a Lagrangian."""

    space: SymplecticSpace
    basis: np.ndarray

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def is_lagrangian(self):
        return self.dim == self.space.n

    def __post_init__(self):
        B = numerics.ensure_finite(self.basis)
        if B.ndim != 2 or B.shape[0] != self.space.dim:
            raise DimensionError("basis shape incompatible with the space")
        if not 1 <= B.shape[1] <= self.space.n:
            raise DimensionError("isotropic dimension must lie in [1, n]")
        object.__setattr__(self, "basis", numerics.as_field_dtype(B, self.space.field))


def isotropic_subspace(space, basis, tol=DEFAULT_TOL):
    """Orthonormalize a spanning set and validate isotropy."""
    B = numerics.as_field_dtype(np.asarray(basis), space.field)
    Q = numerics.orthonormalize(B, tol)
    if Q.shape[1] != B.shape[1]:
        raise ContractError("spanning set is rank deficient")
    defect = np.abs(Q.T @ space.J() @ Q).max(initial=0.0)
    if defect > tol.form_tol * 10:
        raise ContractError(f"subspace is not isotropic: omega-defect {defect:.3e}")
    return IsotropicSubspace(space, Q)


def line_subspace(space, v, tol=DEFAULT_TOL):
    """The isotropic line spanned by a vector (any line is isotropic)."""
    v = np.asarray(v, dtype=space.dtype).reshape(-1, 1)
    return isotropic_subspace(space, v, tol)


@dataclass(frozen=True)
class GroupElement:
    """A symplectic matrix with split-off scale: g = exp(log_scale) * matrix.

    The stored matrix is kept at unit max-norm by the constructors, so word
    products of arbitrary length stay in double range; symplecticity of the
    underlying element is tested scale-corrected.
    """

    space: SymplecticSpace
    matrix: np.ndarray
    log_scale: float = 0.0

    def __post_init__(self):
        M = numerics.ensure_finite(self.matrix)
        if M.shape != (self.space.dim, self.space.dim):
            raise DimensionError("matrix shape incompatible with the space")
        object.__setattr__(self, "matrix", numerics.as_field_dtype(M, self.space.field))

    @property
    def full_matrix(self):
        """exp(log_scale) * matrix; may overflow for long words - prefer the
        (matrix, log_scale) pair in computations."""
        return np.exp(self.log_scale) * self.matrix

    def __matmul__(self, other):
        return multiply(self, other)


def group_element(space, M, log_scale=0.0, tol=DEFAULT_TOL, check=True):
    """Wrap and renormalize a matrix as a group element; verifies the
    scale-corrected symplectic relation when check=True."""
    M = numerics.as_field_dtype(np.asarray(M), space.field)
    scale = np.abs(M).max(initial=0.0)
    if scale == 0.0:
        raise ContractError("zero matrix is not symplectic")
    g = GroupElement(space, M / scale, log_scale + float(np.log(scale)))
    if check and not is_symplectic_element(g, tol):
        raise ContractError("matrix is not symplectic to tolerance")
    return g


def identity_element(space):
    return GroupElement(space, np.eye(space.dim, dtype=space.dtype), 0.0)


def multiply(g, h):
    if g.space != h.space:
        raise DimensionError("elements live in different spaces")
    M = g.matrix @ h.matrix
    scale = np.abs(M).max(initial=0.0)
    if scale == 0.0:
        raise ContractError("product collapsed to zero")
    return GroupElement(g.space, M / scale, g.log_scale + h.log_scale + float(np.log(scale)))


def inverse(g):
    """Symplectic inverse via g^{-1} = -J g^T J.

    With g = exp(s) A the inverse is exp(s) (-J A^T J): symplectic spectra
    are reciprocal-symmetric, so the inverse carries the same scale."""
    J = g.space.J()
    M = -J @ g.matrix.T @ J
    scale = np.abs(M).max(initial=0.0)
    return GroupElement(g.space, M / scale, g.log_scale + float(np.log(scale)))


def is_symplectic(M, tol=DEFAULT_TOL):
    """Entrywise test of M^T J M = J for a plain matrix."""
    M = numerics.ensure_finite(np.asarray(M))
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2 != 0:
        raise DimensionError("symplectic matrices have even square shape")
    n = M.shape[0] // 2
    J = standard_J(n, "C" if np.iscomplexobj(M) else "R")
    return bool(np.abs(M.T @ J @ M - J).max() <= tol.form_tol)


def is_symplectic_element(g, tol=DEFAULT_TOL):
    """Scale-corrected test for a GroupElement: the underlying element
    satisfies g^T J g = J iff matrix^T J matrix = exp(-2 log_scale) J."""
    J = g.space.J()
    target = np.exp(-2.0 * g.log_scale)
    return bool(np.abs(g.matrix.T @ J @ g.matrix - target * J).max() <= tol.form_tol)


def apply_element(g, F, tol=DEFAULT_TOL):
    """Image subspace g . F, re-orthonormalized (scale drops out)."""
    if g.space != F.space:
        raise DimensionError("element and subspace live in different spaces")
    B = numerics.orthonormalize(g.matrix @ F.basis, tol)
    return IsotropicSubspace(F.space, B)


# ---------------------------------------------------------------------------
# Complements, transversality, reduction
# ---------------------------------------------------------------------------

def symplectic_orthogonal(F, tol=DEFAULT_TOL):
    """Orthonormal basis of F^{perp omega} = {v : omega(v, F) = 0}.

    Contains F's span (isotropy) and has dimension 2n - i; a Lagrangian is
    its own complement."""
    A = F.basis.T @ F.space.J()          # rows span the pairing functionals
    return numerics.null_space(A, tol)


def is_transverse(F, G, tol=DEFAULT_TOL):
    """Transversality of flags: F + G^{perp omega} = V = G + F^{perp omega}.

    For Lagrangians this is direct-sum complementarity; for lines it is
    omega(f, g) != 0."""
    if F.space != G.space:
        raise DimensionError("subspaces live in different spaces")
    if F.dim != G.dim:
        raise DimensionError("transversality is defined for equal dimension")
    dim = F.space.dim
    for X, Y in ((F, G), (G, F)):
        C = np.concatenate([X.basis, symplectic_orthogonal(Y, tol)], axis=1)
        if numerics.rank_with_tol(C, tol) < dim:
            return False
    return True


@dataclass(frozen=True)
class Reduction:
    """Symplectic reduction data for an isotropic Z: the reduced space
    Z^{perp}/Z with its projection and a section.

    project maps Z^{perp omega} onto K^{2(n-i)} and pushes omega forward to
    the standard J'; section right-inverts it (project @ section = Id)."""

    reduced_space: SymplecticSpace
    project: np.ndarray
    section: np.ndarray


def symplectic_reduction(Z, tol=DEFAULT_TOL):
    """Reduce by an isotropic subspace Z with dim Z = i < n."""
    space = Z.space
    n, i = space.n, Z.dim
    if i >= n:
        raise DimensionError("reduction by a Lagrangian leaves nothing")
    perp = symplectic_orthogonal(Z, tol)
    # complement of Z inside Z^perp (Euclidean-orthogonal within the span)
    resid = perp - Z.basis @ (Z.basis.conj().T @ perp)
    U = numerics.orthonormalize(resid, tol)
    if U.shape[1] != 2 * (n - i):
        raise ContractError("reduction complement has wrong dimension")
    B = U.T @ space.J() @ U
    D = U @ darboux_basis(B, tol)
    reduced = SymplecticSpace(n - i, space.field)
    Jp = reduced.J()
    # coordinates via omega-pairing against the Darboux frame
    project = np.linalg.solve(Jp, D.T @ space.J())
    return Reduction(reduced, project, D)


def darboux_basis(B, tol=DEFAULT_TOL):
    """Given a nondegenerate skew bilinear form matrix B on K^{2m}, return C
    with C^T B C = J_standard (skew Gram-Schmidt)."""
    B = np.asarray(B)
    m2 = B.shape[0]
    if m2 % 2 != 0:
        raise DimensionError("skew form on odd-dimensional space is degenerate")
    m = m2 // 2
    dtype = np.complex128 if np.iscomplexobj(B) else np.float64
    basis = np.eye(m2, dtype=dtype)
    pairs = []

    def project_off(v):
        for e, f in pairs:
            v = v - (v @ B @ f) * e + (v @ B @ e) * f
        return v

    for _ in range(m):
        cands = [project_off(basis[:, j]) for j in range(m2)]
        norms = [np.linalg.norm(c) for c in cands]
        e = cands[int(np.argmax(norms))]
        e = e / np.linalg.norm(e)
        pair_vals = [abs(e @ B @ c) for c in cands]
        f = cands[int(np.argmax(pair_vals))]
        val = e @ B @ f
        if abs(val) <= tol.rank_tol:
            raise ContractError("form is degenerate; no Darboux basis")
        f = f / val
        pairs.append((e, f))
    C = np.zeros((m2, m2), dtype=dtype)
    for j, (e, f) in enumerate(pairs):
        C[:, j] = e
        C[:, m + j] = f
    return C


def skew_normal_basis(B, tol=DEFAULT_TOL):
    """Best-conditioned Darboux basis of a real nondegenerate skew form:
    C with C^T B C = J and cond(C) = sqrt(lam_max/lam_min), built from the
    orthogonal normal form of B (eigenvalues +-i lam_j, orthonormal real and
    imaginary parts).  Anisotropic Darboux bases distort every downstream
    margin, so the canonical one is used wherever the form is real."""
    B = np.asarray(B)
    if np.iscomplexobj(B):
        raise FieldError("skew normal form implemented for real forms")
    m2 = B.shape[0]
    m = m2 // 2
    beta = B[0, m] if m2 >= 2 else 0.0
    if beta != 0.0 and np.abs(B - beta * standard_J(m)).max() <= 1e-12 * np.abs(B).max():
        # already proportional to J: scale (and swap e/f for a negative
        # factor) so pi_2 stays the identity map
        if beta > 0:
            return np.eye(m2) / np.sqrt(beta)
        swap = np.zeros((m2, m2))
        swap[:m, m:] = np.eye(m)
        swap[m:, :m] = np.eye(m)
        return swap / np.sqrt(-beta)
    w, v = np.linalg.eig((B - B.T) / 2.0)
    idx = [j for j in range(m2) if w[j].imag > tol.rank_tol]
    if len(idx) != m2 // 2:
        raise ContractError("form is degenerate; no Darboux basis")
    order = sorted(idx, key=lambda j: -w[j].imag)
    xs, ys = [], []
    for j in order:
        lam = w[j].imag
        u = v[:, j]
        # normalize the phase so real/imag parts are an orthonormal pair
        phase = np.exp(-1j * np.angle(u[np.argmax(np.abs(u))]))
        u = u * phase
        x = u.real / np.linalg.norm(u.real)
        y = u.imag / np.linalg.norm(u.imag) if np.linalg.norm(u.imag) > 0 else u.real
        xs.append(x / np.sqrt(lam))
        ys.append(y / np.sqrt(lam))
    C = np.column_stack(xs + ys)
    J = standard_J(m2 // 2)
    if np.abs(C.T @ B @ C - J).max() > 1e-8:
        C = np.column_stack(xs + [-y for y in ys])
    dev = np.abs(C.T @ B @ C - J).max()
    if dev > 1e-8:
        raise ContractError(f"skew normal form failed (dev {dev:.2e})")
    return C


def conjugate_subspace(W, tol=DEFAULT_TOL):
    """Entrywise conjugate of a complex subspace, re-orthonormalized."""
    if W.space.field != "C":
        raise FieldError("conjugation needs the complex field")
    B = numerics.orthonormalize(W.basis.conj(), tol)
    return IsotropicSubspace(W.space, B)


def intersection_dim(A, B, tol=DEFAULT_TOL):
    """dim of the intersection of two spans (bases orthonormal)."""
    A_b = A.basis if isinstance(A, IsotropicSubspace) else np.asarray(A)
    B_b = B.basis if isinstance(B, IsotropicSubspace) else np.asarray(B)
    return numerics.intersection_dim(A_b, B_b, tol)


# ---------------------------------------------------------------------------
# Direct sums and random elements
# ---------------------------------------------------------------------------

def direct_sum_embedding(n1, n2, eps, field="R"):
    """Isometry T from the split space (K^{2n1} (+) K^{2n2}, J1 (+) eps*J2)
    onto the standard K^{2(n1+n2)}: T^T J_std T = J1 (+) eps J2.

    Split coordinates are ordered (e^1, f^1, e^2, f^2).  For eps = -1 the
    second factor's e/f roles are swapped, which carries -J2 to J."""
    if eps not in (+1, -1):
        raise ValueError("eps must be +1 or -1")
    N = n1 + n2
    T = np.zeros((2 * N, 2 * (n1 + n2)))
    for j in range(n1):
        T[j, j] = 1.0
        T[N + j, n1 + j] = 1.0
    for j in range(n2):
        if eps == +1:
            T[n1 + j, 2 * n1 + j] = 1.0
            T[N + n1 + j, 2 * n1 + n2 + j] = 1.0
        else:
            T[N + n1 + j, 2 * n1 + j] = 1.0
            T[n1 + j, 2 * n1 + n2 + j] = 1.0
    return T.astype(np.complex128) if field == "C" else T


def direct_sum_element(g1, g2, eps, tol=DEFAULT_TOL):
    """Block-diagonal element of the standard doubled space from elements of
    the two factors (second factor conjugated per eps)."""
    if g1.space.field != g2.space.field:
        raise FieldError("factors must share a field")
    n1, n2 = g1.space.n, g2.space.n
    field = g1.space.field
    T = direct_sum_embedding(n1, n2, eps, field)
    big = SymplecticSpace(n1 + n2, field)
    # assemble on the split space then push through T (T is orthogonal)
    M = np.zeros((2 * (n1 + n2), 2 * (n1 + n2)), dtype=big.dtype)
    s1 = np.exp(g1.log_scale - max(g1.log_scale, g2.log_scale))
    s2 = np.exp(g2.log_scale - max(g1.log_scale, g2.log_scale))
    M[: 2 * n1, : 2 * n1] = s1 * g1.matrix
    M[2 * n1 :, 2 * n1 :] = s2 * g2.matrix
    assembled = T @ M @ T.T
    return group_element(big, assembled, log_scale=max(g1.log_scale, g2.log_scale), tol=tol)


def random_symplectic(space, rng, transvections=8, strength=0.6, tol=DEFAULT_TOL):
    """Random element as a product of symplectic transvections
    x -> x + lam * omega(x, v) v (these generate Sp)."""
    dim = space.dim
    M = np.eye(dim, dtype=space.dtype)
    J = space.J()
    for _ in range(transvections):
        v = rng.standard_normal(dim)
        if space.field == "C":
            v = v + 1j * rng.standard_normal(dim)
        v = v / np.linalg.norm(v)
        lam = strength * rng.standard_normal()
        if space.field == "C":
            lam = lam + 1j * strength * rng.standard_normal()
        M = M @ (np.eye(dim, dtype=space.dtype) - lam * np.outer(v, v) @ J)
    return group_element(space, M, tol=tol)


def random_symplectic_small(space, rng, size=0.4, tol=DEFAULT_TOL):
    """Random element near the identity via the Cayley transform of a
    Hamiltonian matrix X = J S (S symmetric); ||mu|| stays of order `size`."""
    n = space.n
    S = rng.standard_normal((2 * n, 2 * n))
    if space.field == "C":
        S = S + 1j * rng.standard_normal((2 * n, 2 * n))
    S = (S + S.T) / 2
    X = space.J() @ S
    X = X * (size / max(np.abs(numerics.singular_values(X))[0], 1e-300))
    eye = np.eye(2 * n, dtype=space.dtype)
    M = np.linalg.solve(eye - X / 2, eye + X / 2)
    return group_element(space, M, tol=tol)
