"""Domains of discontinuity: bad-set membership, stratum tests, and
properness witnesses.

The bad set over a limit sample is the union of incidence varieties
K_{xi(t)} (Lagrangians through a limit line for i = 1, lines inside a limit
Lagrangian for i = n).  Verdicts against a finite sample are one-sided: an
"inside" with a tiny residual is reliable because the true bad set is
closed, while every "outside" is sample-relative and is stamped with the
sample size; outside margins below the near-boundary threshold are flagged.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import lagrangians, numerics, reps, symplectic, words
from .errors import ContractError, DimensionError, IllConditionedError
from .numerics import DEFAULT_TOL
from .rng import stream

NEAR_MARGIN_FLAG = 1e-3
CONJ_STABLE_TOL = 1e-8
PROPERNESS_RADIUS = 0.1


def containment_residual(inner, outer):
    """sin of the largest angle between `inner` and its projection into
    `outer` (0 iff inner ⊆ outer); bases orthonormal."""
    A = inner.basis if hasattr(inner, "basis") else np.asarray(inner)
    B = outer.basis if hasattr(outer, "basis") else np.asarray(outer)
    R = A - B @ (B.conj().T @ A)
    sigma = numerics.singular_values(R)
    return float(min(sigma[0], 1.0)) if sigma.size else 0.0


def contains_line(L, line, tol=DEFAULT_TOL):
    """True iff the line lies inside the Lagrangian (residual < rank_tol)."""
    if L.space != line.space:
        raise DimensionError("line and Lagrangian live in different spaces")
    return containment_residual(line, L) < tol.rank_tol


def nontransverse_to(L, L_prime, tol=DEFAULT_TOL):
    """L' ∩ L != 0: membership in the non-transversality variety N_L."""
    if L.space != L_prime.space:
        raise DimensionError("Lagrangians live in different spaces")
    return symplectic.intersection_dim(L, L_prime, tol) >= 1


@dataclass(frozen=True)
class BadSetVerdict:
    verdict: str          # "inside" | "outside"
    margin: float
    witness: tuple        # boundary word achieving the margin
    sample_size: int
    near_boundary: bool   # outside verdict with margin below the flag level

    @property
    def inside(self):
        return self.verdict == "inside"


def in_bad_set(candidate, sample, tol=DEFAULT_TOL):
    """Membership of a candidate in the sampled bad set K_xi.

    For a limit sample in lines (i = 1) candidates are Lagrangians and the
    test is 'some sampled line is contained in the candidate'; for a sample
    in Lagrangians (i = n) candidates are lines and the test is 'the
    candidate is contained in some sampled Lagrangian'."""
    n = sample.space.n
    if candidate.space.dim != sample.space.dim or candidate.space.field != sample.space.field:
        raise DimensionError("candidate and sample live in different spaces")
    if not sample.points:
        raise ContractError("empty limit sample")
    if sample.index == 1:
        if candidate.dim != n:
            raise DimensionError("candidates against a line sample must be Lagrangian")
        residuals = [containment_residual(p.subspace, candidate) for p in sample.points]
    elif sample.index == n:
        if candidate.dim != 1:
            raise DimensionError("candidates against a Lagrangian sample must be lines")
        residuals = [containment_residual(candidate, p.subspace) for p in sample.points]
    else:
        raise DimensionError("bad-set queries need index 1 or n")
    j = int(np.argmin(residuals))
    margin = float(residuals[j])
    verdict = "inside" if margin < tol.rank_tol else "outside"
    return BadSetVerdict(verdict, margin, sample.points[j].boundary.element,
                         len(sample.points), verdict == "outside" and margin < NEAR_MARGIN_FLAG)


# ---------------------------------------------------------------------------
# Stratumwise tests
# ---------------------------------------------------------------------------

def real_intersection_form(W, tol=DEFAULT_TOL):
    """Real form Z' of W ∩ conj(W): the real subspace whose complexification
    is the intersection.  Raises IllConditionedError if the intersection is
    not conjugation-stable to 1e-8."""
    Wbar = symplectic.conjugate_subspace(W, tol)
    C = numerics.subspace_intersection(W.basis, Wbar.basis, tol)
    if C.shape[1] == 0:
        return np.zeros((W.space.dim, 0))
    drift = numerics.subspace_distance(C, C.conj())
    if drift > CONJ_STABLE_TOL:
        raise IllConditionedError(
            f"W ∩ conj(W) not conjugation-stable (drift {drift:.2e})")
    stacked = np.concatenate([C.real, C.imag], axis=1)
    R = numerics.orthonormalize(stacked, tol)
    if R.shape[1] != C.shape[1]:
        raise IllConditionedError("real form of the intersection has wrong rank")
    back = numerics.subspace_distance(R.astype(np.complex128), C)
    if back > CONJ_STABLE_TOL:
        raise IllConditionedError("real form does not recomplexify to the intersection")
    return R


def stratum_bad_test(W, real_sample, tol=DEFAULT_TOL):
    """Bad-set membership of a Lagrangian in a stratum with q' = 0, decided
    through the real bundle picture: W is bad iff some sampled real limit
    line lies inside the real form of W ∩ conj(W)."""
    label = lagrangians.classify_lagrangian(W, tol)
    if label.q != 0:
        raise ContractError("stratum test applies to labels (i, n', 0) only")
    if real_sample.index != 1:
        raise ContractError("stratum test needs a line sample of the real rep")
    Z = real_intersection_form(W, tol)
    if Z.shape[1] == 0:
        return False
    for p in real_sample.points:
        if containment_residual(p.subspace.basis.real, Z) < tol.rank_tol:
            return True
    return False


def r0_inclusion_audit(rep_C, sample, m, seed=0, tol=DEFAULT_TOL):
    """Draw m random Lagrangians from every open stratum H_{p,q} and assert
    each is outside the sampled bad set of the complexified representation.
    Returns the violation count (expected 0)."""
    if not rep_C.lineage.startswith("complexified"):
        raise ContractError("audit hypothesis: representation must be a complexification")
    rng = stream(seed, "r0-audit")
    n = rep_C.space.n
    violations = 0
    for p in range(n + 1):
        q = n - p
        for _ in range(m):
            W = lagrangians.random_lagrangian(
                rep_C.space, rng, lagrangians.StratumLabel(0, p, q), tol=tol)
            if in_bad_set(W, sample, tol).inside:
                violations += 1
    return violations


# ---------------------------------------------------------------------------
# Lagrangian-vs-Lagrangian domain (Q_n case)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DomainVerdict:
    in_domain: bool
    margin: float
    witness: tuple
    sample_size: int


def d_xi_membership(candidate, sample, tol=DEFAULT_TOL):
    """Membership in D_xi = complement of the union of non-transversality
    sets N_{xi(t)}: in the domain iff transverse to every sampled limit
    Lagrangian; margin is the worst smallest singular value of the
    concatenated bases."""
    if sample.index != sample.space.n:
        raise ContractError("D_xi is defined over a Lagrangian limit sample")
    if candidate.dim != sample.space.n:
        raise DimensionError("candidate must be Lagrangian")
    margin = math.inf
    witness = None
    in_domain = True
    for p in sample.points:
        conc = np.concatenate([candidate.basis, p.subspace.basis], axis=1)
        smin = float(numerics.singular_values(conc)[-1])
        if smin < margin:
            margin, witness = smin, p.boundary.element
        if nontransverse_to(candidate, p.subspace, tol):
            in_domain = False
    return DomainVerdict(in_domain, margin, witness, len(sample.points))


def disjointness_audit(sample, tol=DEFAULT_TOL):
    """For a line sample: no Lagrangian can contain two sampled lines as long
    as omega pairs them nontrivially; returns the min |omega| margin over
    distinct pairs (equals the i = 1 transversality margin)."""
    if sample.index != 1:
        raise ContractError("disjointness audit applies to line samples")
    pts = sample.points
    if len(pts) < 2:
        raise ContractError("need at least two points")
    V = np.concatenate([p.subspace.basis for p in pts], axis=1)
    gram = np.abs(V.T @ sample.space.J() @ V)
    margin = math.inf
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            if numerics.subspace_distance(pts[a].subspace.basis,
                                          pts[b].subspace.basis) < 1e-8:
                continue  # identical approximants are excluded
            margin = min(margin, float(gram[a, b]))
    return margin


# ---------------------------------------------------------------------------
# Properness witness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropernessReport:
    counts_by_length: dict
    total: int
    radius: float
    note: str = ""


def properness_witness(rep, candidate, sample, length, radius=PROPERNESS_RADIUS,
                       tol=DEFAULT_TOL):
    """Count group elements up to each word length that return the candidate
    within the principal-angle radius.  For a properly discontinuous action
    away from the bad set the count stabilizes as the length grows."""
    verdict = in_bad_set(candidate, sample, tol)
    if verdict.inside:
        raise ContractError("candidate lies inside the sampled bad set")
    counts = {0: 1}
    total = 1
    pres = rep.presentation
    for L in range(1, length + 1):
        sphere = words.enumerate_sphere(pres, L)
        if not sphere:
            counts[L] = 0
            continue
        mats, logs = reps.evaluate_words_batched(rep, sphere)
        images = np.einsum("nij,jk->nik", mats, candidate.basis)
        Q, _ = np.linalg.qr(images)
        overlaps = np.einsum("ji,njk->nik", candidate.basis.conj(), Q)
        sigma = numerics.singular_values_fast(overlaps)
        angles = np.arccos(np.clip(sigma[:, -1], -1.0, 1.0))
        hits = int(np.sum(angles < radius))
        counts[L] = hits
        total += hits
    note = ""
    if total > 1 and all(counts[L] == len(words.enumerate_sphere(pres, L))
                         for L in range(1, length + 1)):
        note = ("every element returned the candidate: empirical properness "
                "failure (or empty domain); emptiness cannot be certified "
                "from a finite sample")
    return PropernessReport(counts, total, radius, note)
