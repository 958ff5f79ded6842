"""Finite desk-scale models of free and surface groups.

Letters are small integers: generator k is letter 2k, its inverse 2k+1, so
``letter ^ 1`` inverts.  Words are tuples of letters in the public API and
int8 arrays in the batch machinery.  Text form is space-separated generator
names with inverses suffixed by an apostrophe, e.g. ``a b' a``.

Surface groups of genus g use the side-pairing presentation of the regular
4g-gon (2g generators, one relator of length 4g in the alternating pattern
x0 x1' x2 x3' ... x0' x1 x2' x3 ...).  Geodesic words are exactly the freely
reduced words containing no factor longer than half the relator from any
cyclic conjugate of the relator or its inverse (Dehn reduction); element
equality is decided by Dehn reduction plus a numerical fingerprint under a
fixed faithful Fuchsian representation.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AlphabetError, BudgetError, ContractError
from .rng import stream

DEFAULT_CAP_FREE = 14
DEFAULT_CAP_SURFACE = 10
MAX_ENUMERATED_WORDS = 8_000_000
FINGERPRINT_GRID = 1e-9


def letter_inverse(letter):
    return letter ^ 1


@dataclass(frozen=True)
class GroupPresentation:
    """A free group F_k (kind='free', rank=k) or the genus-g surface group
    (kind='surface', genus=g) with its 4g-gon relator."""

    kind: str
    rank: int = 0
    genus: int = 0
    cap: int = 0

    def __post_init__(self):
        if self.kind == "free":
            if self.rank < 2:
                raise ValueError("free rank must be >= 2")
            object.__setattr__(self, "cap", self.cap or DEFAULT_CAP_FREE)
        elif self.kind == "surface":
            if self.genus < 2:
                raise ValueError("surface genus must be >= 2")
            object.__setattr__(self, "cap", self.cap or DEFAULT_CAP_SURFACE)
        else:
            raise ValueError("kind must be 'free' or 'surface'")

    @property
    def n_generators(self):
        return self.rank if self.kind == "free" else 2 * self.genus

    @property
    def n_letters(self):
        return 2 * self.n_generators

    @property
    def generator_names(self):
        return [chr(ord("a") + k) for k in range(self.n_generators)]

    @property
    def relator(self):
        """Cyclically reduced relator (surface only; empty for free)."""
        if self.kind == "free":
            return ()
        m = self.n_generators
        first = tuple(2 * k if k % 2 == 0 else 2 * k + 1 for k in range(m))
        second = tuple(l ^ 1 for l in first)
        return first + second


def free_group(rank, cap=0):
    return GroupPresentation("free", rank=rank, cap=cap)


def surface_group(genus, cap=0):
    return GroupPresentation("surface", genus=genus, cap=cap)


# ---------------------------------------------------------------------------
# Word parsing and reduction
# ---------------------------------------------------------------------------

def parse_word(text, presentation):
    """Parse 'a b' a' into a letter tuple."""
    names = presentation.generator_names
    out = []
    for token in text.split():
        inv = token.endswith("'")
        name = token[:-1] if inv else token
        if name not in names:
            raise AlphabetError(f"unknown generator {name!r}")
        out.append(2 * names.index(name) + (1 if inv else 0))
    return tuple(out)


def format_word(word, presentation):
    names = presentation.generator_names
    return " ".join(names[l // 2] + ("'" if l % 2 else "") for l in word)


def free_reduce(word):
    out = []
    for l in word:
        if out and out[-1] == (l ^ 1):
            out.pop()
        else:
            out.append(l)
    return tuple(out)


@lru_cache(maxsize=None)
def _relator_factors(presentation):
    """All factors of length > half-relator from cyclic conjugates of the
    relator and its inverse, keyed by length, with replacement words.

    A factor u of length h+j (j >= 1) in a cyclic conjugate r = u v satisfies
    u = v^{-1}, so u may be replaced by the shorter word v^{-1} ... inverse of
    the complement."""
    r = presentation.relator
    L = len(r)
    half = L // 2
    table = {}
    rot_sources = []
    for base in (r, tuple(l ^ 1 for l in reversed(r))):
        for i in range(L):
            rot_sources.append(base[i:] + base[:i])
    for rot in rot_sources:
        for flen in range(half + 1, L + 1):
            factor = rot[:flen]
            complement = rot[flen:]
            replacement = tuple(l ^ 1 for l in reversed(complement))
            table.setdefault(factor, replacement)
    return table


def dehn_reduce(word, presentation):
    """Free reduction plus Dehn's algorithm for the surface relator.

    The output contains no factor longer than half the relator; it represents
    the same group element and is never longer than the input."""
    for l in word:
        if not 0 <= l < presentation.n_letters:
            raise AlphabetError(f"letter {l} outside alphabet")
    w = free_reduce(word)
    if presentation.kind == "free":
        return w
    table = _relator_factors(presentation)
    half = len(presentation.relator) // 2
    changed = True
    while changed:
        changed = False
        for flen in range(len(presentation.relator), half, -1):
            if len(w) < flen:
                continue
            for start in range(len(w) - flen + 1):
                factor = w[start : start + flen]
                rep = table.get(factor)
                if rep is not None:
                    w = free_reduce(w[:start] + rep + w[start + flen :])
                    changed = True
                    break
            if changed:
                break
    return w


def reduce(word, presentation):
    """Spec-facing reduction: free reduction, then Dehn for surface kind."""
    return dehn_reduce(word, presentation)


def is_geodesic(word, presentation):
    """True iff freely reduced and (surface) free of >half-relator factors."""
    if free_reduce(word) != tuple(word):
        return False
    if presentation.kind == "free":
        return True
    half = len(presentation.relator) // 2
    table = _relator_factors(presentation)
    w = tuple(word)
    for flen in (half + 1,):
        for start in range(len(w) - flen + 1):
            if w[start : start + flen] in table:
                return False
    return True


def word_inverse(word):
    return tuple(l ^ 1 for l in reversed(word))


# ---------------------------------------------------------------------------
# Batched geodesic-word machinery
# ---------------------------------------------------------------------------

def forbidden_factor_codes(presentation):
    """(codes, flen): packed integer codes of the forbidden factors of length
    half+1, for vectorized suffix tests.  Empty for free groups."""
    if presentation.kind == "free":
        return np.zeros(0, dtype=np.int64), 0
    half = len(presentation.relator) // 2
    flen = half + 1
    base = presentation.n_letters
    codes = set()
    for factor in _relator_factors(presentation):
        if len(factor) == flen:
            code = 0
            for l in factor:
                code = code * base + l
            codes.add(code)
    return np.array(sorted(codes), dtype=np.int64), flen


def extend_words(presentation, words):
    """One-step geodesic extension of an (N, L) int8 word array.

    Returns (new_words, parent_rows, letters): row r of new_words extends
    words[parent_rows[r]] by letters[r], stays freely reduced, and (surface)
    avoids forbidden >half-relator factors."""
    words = np.asarray(words, dtype=np.int8)
    N, L = words.shape
    codes, flen = forbidden_factor_codes(presentation)
    base = presentation.n_letters
    parents, letters = [], []
    if codes.size and L >= flen - 1:
        suffix = words[:, -(flen - 1) :].astype(np.int64)
        packed = np.zeros(N, dtype=np.int64)
        for j in range(flen - 1):
            packed = packed * base + suffix[:, j]
    else:
        packed = None
    for l in range(base):
        if L == 0:
            mask = np.ones(N, dtype=bool)
        else:
            mask = words[:, -1] != (l ^ 1)
        if packed is not None:
            mask &= ~np.isin(packed * base + l, codes)
        idx = np.where(mask)[0]
        parents.append(idx)
        letters.append(np.full(idx.size, l, dtype=np.int8))
    parent_rows = np.concatenate(parents)
    letter_col = np.concatenate(letters)
    new_words = np.concatenate(
        [words[parent_rows], letter_col[:, None]], axis=1
    )
    return new_words, parent_rows, letter_col


def geodesic_words_array(presentation, length, max_words=MAX_ENUMERATED_WORDS):
    """All geodesic spellings of the given length as an (N, length) array.

    These cover every group element of that length; at lengths >= half the
    relator a few elements appear with two spellings (merged by
    enumerate_sphere's fingerprint pass)."""
    if length < 0:
        raise ValueError("length must be >= 0")
    if length > presentation.cap:
        raise BudgetError(f"length {length} beyond cap {presentation.cap}")
    words = np.zeros((1, 0), dtype=np.int8)
    for _ in range(length):
        words, _, _ = extend_words(presentation, words)
        if words.shape[0] > max_words:
            raise BudgetError(
                f"enumeration exceeds the word budget ({words.shape[0]} > {max_words})"
            )
    return words


def sample_geodesic_words(presentation, length, count, rng):
    """Random geodesic words of exact length via seeded random extension.

    Used where full spheres exceed the scan budget; not uniform on the
    sphere, and flagged as sampled by callers."""
    words = np.zeros((count, 0), dtype=np.int8)
    base = presentation.n_letters
    codes, flen = forbidden_factor_codes(presentation)
    for pos in range(length):
        # rejection-free: score random priorities, pick the best legal letter
        priorities = rng.random((count, base))
        legal = np.ones((count, base), dtype=bool)
        if pos > 0:
            legal[np.arange(count), words[:, -1] ^ 1] = False
        if codes.size and pos >= flen - 1:
            packed = np.zeros(count, dtype=np.int64)
            for j in range(flen - 1):
                packed = packed * base + words[:, -(flen - 1) + j]
            for l in range(base):
                legal[:, l] &= ~np.isin(packed * base + l, codes)
        priorities[~legal] = -1.0
        chosen = np.argmax(priorities, axis=1).astype(np.int8)
        words = np.concatenate([words, chosen[:, None]], axis=1)
    return words


# ---------------------------------------------------------------------------
# Fingerprints and element-level enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _fingerprint_matrices(presentation):
    """Images of all letters under a fixed faithful representation:
    the octagon Fuchsian matrices for surface groups, an SL(2,R) Schottky-like
    pair pattern for free groups (injective on the reduced words we compare)."""
    m = presentation.n_generators
    mats = np.zeros((2 * m, 2, 2))
    if presentation.kind == "surface":
        from .reps import fuchsian_generators

        gens = fuchsian_generators(presentation.genus)
    else:
        gens = []
        for k in range(m):
            t = 2.0 + k
            c, s = np.cos(k * np.pi / (2 * m + 1)), np.sin(k * np.pi / (2 * m + 1))
            R = np.array([[c, -s], [s, c]])
            gens.append(R @ np.diag([t, 1.0 / t]) @ R.T)
    for k, G in enumerate(gens):
        mats[2 * k] = G
        a, b, c, d = G.ravel()
        mats[2 * k + 1] = np.array([[d, -b], [-c, a]]) / (a * d - b * c)
    return mats


def _fingerprint_keys(presentation, words):
    """Integer fingerprint rows for an (N, L) word array: the renormalized
    matrix value under the fixed faithful rep, sign-canonicalized and
    snapped to a grid coarser than roundoff but finer than the verified
    element separation."""
    mats = _fingerprint_matrices(presentation)
    words = np.asarray(words, dtype=np.int8)
    N, L = words.shape
    M = np.broadcast_to(np.eye(2), (N, 2, 2)).copy()
    logs = np.zeros(N)
    for j in range(L):
        M = np.einsum("nij,njk->nik", M, mats[words[:, j]])
        sc = np.abs(M).reshape(N, 4).max(axis=1)
        M /= sc[:, None, None]
        logs += np.log(sc)
    flat = M.reshape(N, 4)
    lead = np.argmax(np.abs(flat) > 0.5, axis=1)
    sign = np.sign(flat[np.arange(N), lead])
    flat = flat * sign[:, None]
    key = np.round(flat / FINGERPRINT_GRID).astype(np.int64)
    logkey = np.round(logs / (FINGERPRINT_GRID * (1.0 + np.abs(logs)))).astype(np.int64)
    return np.concatenate([key, logkey[:, None]], axis=1)


def enumerate_sphere(presentation, length, max_words=MAX_ENUMERATED_WORDS):
    """All distinct group elements of word length exactly `length`, one
    geodesic representative each, in stable enumeration order."""
    words = geodesic_words_array(presentation, length, max_words)
    if presentation.kind == "free" or length == 0 or words.shape[0] == 0:
        return [tuple(int(l) for l in row) for row in words]
    keys = _fingerprint_keys(presentation, words)
    _, first = np.unique(keys, axis=0, return_index=True)
    first.sort()
    return [tuple(int(l) for l in words[i]) for i in first]


def enumerate_ball(presentation, length, max_words=MAX_ENUMERATED_WORDS):
    """Distinct elements of word length <= length (includes the identity)."""
    out = [()]
    for L in range(1, length + 1):
        out.extend(enumerate_sphere(presentation, L, max_words))
    return out


def words_equal(presentation, u, v):
    """Element equality: exact reduced words for free groups, Dehn reduction
    plus fingerprint for surface groups."""
    ru, rv = dehn_reduce(u, presentation), dehn_reduce(v, presentation)
    if presentation.kind == "free" or ru == rv:
        return ru == rv
    if len(ru) != len(rv):
        # Dehn-reduced spellings of one element have equal (geodesic) length
        return False
    arr = np.array([ru, rv], dtype=np.int8)
    keys = _fingerprint_keys(presentation, arr)
    return bool(np.all(keys[0] == keys[1]))


def is_power_of(presentation, u, v):
    """True iff u equals v^k as reduced words for some k >= 1."""
    u = dehn_reduce(u, presentation)
    v = dehn_reduce(v, presentation)
    if not v:
        return not u
    k = 1
    while True:
        power = dehn_reduce(v * k, presentation)
        if len(power) > len(u):
            return False
        if words_equal(presentation, power, u):
            return True
        k += 1


def commutes(presentation, u, v):
    """uv = vu; in a torsion-free hyperbolic group this holds iff u and v
    are powers of a common element, i.e. share their fixed-point pair."""
    return words_equal(presentation, tuple(u) + tuple(v), tuple(v) + tuple(u))


# ---------------------------------------------------------------------------
# Boundary approximants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryPointApprox:
    """A sampled boundary point: the attracting (+) or repelling (-) fixed
    point of an infinite-order element."""

    element: tuple
    sign: str = "+"

    def __post_init__(self):
        if not self.element:
            raise ContractError("boundary approximant needs a nonempty element")
        if self.sign not in ("+", "-"):
            raise ValueError("sign must be '+' or '-'")


def sample_boundary_pairs(presentation, length, count, rng=None, seed=0):
    """Pairs (gamma+, delta+) of distinct boundary approximants.

    Elements are drawn from spheres up to `length`; pairs where one element
    is a word power of the other, or where the two commute (shared axis),
    are rejected."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = rng if rng is not None else stream(seed, "boundary-pairs")
    pool = []
    for L in range(1, length + 1):
        pool.extend(enumerate_sphere(presentation, L))
        if len(pool) > 50 * count:
            break
    if len(pool) < 2:
        raise BudgetError("not enough distinct elements below the horizon")
    pairs = []
    attempts = 0
    while len(pairs) < count:
        attempts += 1
        if attempts > 200 * count:
            raise BudgetError("could not find enough non-power pairs")
        i, j = rng.integers(0, len(pool), size=2)
        if i == j:
            continue
        u, v = pool[int(i)], pool[int(j)]
        if is_power_of(presentation, u, v) or is_power_of(presentation, v, u):
            continue
        if commutes(presentation, u, v):
            continue
        pairs.append((BoundaryPointApprox(u, "+"), BoundaryPointApprox(v, "+")))
    return pairs
