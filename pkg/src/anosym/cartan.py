"""Cartan projection mu and simple-root functionals for Sp(2n, K).

mu(g) is the vector of the top n log singular values (lambda_1 >= ... >=
lambda_n >= 0), valued in the closed Weyl chamber; it is computed from
singular values only, never from an explicit K exp(a) K factorization.
Simple roots are the gap functionals alpha_i = lambda_i - lambda_{i+1} for
i < n and alpha_n = 2 lambda_n.

Distance in the symmetric space is normalized as d(g x0, x0) = ||mu(g)||_2.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import numerics, symplectic
from .errors import AlphabetError, ContractError
from .numerics import DEFAULT_TOL

RECIPROCAL_PAIR_RTOL = 1e-6
LAMBDA_CLAMP = 1e-10


@dataclass(frozen=True)
class CartanVector:
    """mu(g) with the element's reciprocal-pair defect attached."""

    space: symplectic.SymplecticSpace
    lam: np.ndarray
    reciprocal_defect: float = 0.0

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if np.any(np.diff(lam) > 1e-12):
            raise ContractError("Cartan vector must be sorted descending")
        if lam.size and lam[-1] < -DEFAULT_TOL.form_tol:
            raise ContractError("Cartan vector has a significantly negative entry")
        lam = np.where(np.abs(lam) < LAMBDA_CLAMP, 0.0, lam)
        object.__setattr__(self, "lam", np.maximum(lam, 0.0))

    @property
    def norm(self):
        return float(np.linalg.norm(self.lam))


def simple_root_values(mu):
    """alpha_i = lambda_i - lambda_{i+1} (i < n), alpha_n = 2 lambda_n."""
    lam = mu.lam if isinstance(mu, CartanVector) else np.asarray(mu, dtype=float)
    alphas = np.empty_like(lam)
    alphas[:-1] = lam[:-1] - lam[1:]
    alphas[-1] = 2.0 * lam[-1]
    return alphas


def log_singular_values(matrix, log_scale=0.0):
    """All 2n log singular values of exp(log_scale) * matrix, descending."""
    sigma = numerics.singular_values(matrix)
    return np.log(np.maximum(sigma, 1e-300)) + log_scale


def cartan_projection(g, tol=DEFAULT_TOL, check=True, warn=True):
    """mu(g) = (log sigma_1, ..., log sigma_n) of a group element.

    The full spectrum is checked against the reciprocal-pair law
    sigma_j * sigma_{2n+1-j} = 1 (relative 1e-6); a violation attaches a
    warning rather than failing, since it signals accumulated roundoff in
    very long products."""
    if check and not symplectic.is_symplectic_element(g, tol):
        raise ContractError("cartan_projection expects a symplectic element")
    n = g.space.n
    logs = log_singular_values(g.matrix, g.log_scale)
    defect = float(np.abs(logs + logs[::-1]).max(initial=0.0))
    if warn and defect > RECIPROCAL_PAIR_RTOL:
        warnings.warn(
            f"singular spectrum violates the reciprocal-pair law (defect {defect:.2e})",
            RuntimeWarning,
            stacklevel=2,
        )
    return CartanVector(g.space, lam=np.sort(logs[:n])[::-1], reciprocal_defect=defect)


def mu_batched(matrices, log_scales):
    """Top-n log singular values for a stack of renormalized matrices.

    Fast-path variant used by sphere scans; lambda_n is clamped at zero.
    Returns an (N, n) array."""
    matrices = np.asarray(matrices)
    n = matrices.shape[-1] // 2
    sigma = numerics.singular_values_fast(matrices)
    lam = np.log(np.maximum(sigma[..., :n], 1e-300)) + np.asarray(log_scales)[..., None]
    lam = np.where(np.abs(lam) < LAMBDA_CLAMP, 0.0, lam)
    return np.maximum(lam, 0.0)


def symmetric_space_distance(g, tol=DEFAULT_TOL):
    """d(g x0, x0) := ||mu(g)||_2."""
    return cartan_projection(g, tol).norm


def word_value(rep, word, tol=DEFAULT_TOL):
    """Evaluate a word under the representation with per-step renormalization
    into log_scale.  The empty word gives the identity."""
    ident = symplectic.identity_element(rep.space)
    g = ident
    for letter in word:
        if letter not in rep.images:
            raise AlphabetError(f"letter {letter!r} is not in the generator alphabet")
        g = symplectic.multiply(g, rep.images[letter])
    return g
