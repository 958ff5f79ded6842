from fractions import Fraction

import numpy as np
import pytest

from anosym import cartan, symplectic, words
from anosym.cartan import (CartanVector, cartan_projection, simple_root_values,
                           word_value)
from anosym.errors import AlphabetError, ContractError
from anosym.symplectic import SymplecticSpace, group_element, random_symplectic


class TestProjection:
    def test_diagonal_exp_chamber(self):
        sp = SymplecticSpace(1, "R")
        g = group_element(sp, np.diag([np.e**2, np.e**-2]))
        assert np.allclose(cartan_projection(g).lam, [2.0])

    def test_rotation_maps_to_zero(self):
        sp = SymplecticSpace(1, "R")
        th = 0.7
        g = group_element(sp, np.array([[np.cos(th), -np.sin(th)],
                                        [np.sin(th), np.cos(th)]]))
        assert np.allclose(cartan_projection(g).lam, [0.0])

    def test_chamber_element_n2(self):
        sp = SymplecticSpace(2, "R")
        g = group_element(sp, np.diag(np.exp([3.0, 1.0, -3.0, -1.0])))
        assert np.allclose(cartan_projection(g).lam, [3.0, 1.0])

    def test_nonsymplectic_rejected(self):
        sp = SymplecticSpace(1, "R")
        with pytest.raises(ContractError):
            cartan_projection(symplectic.GroupElement(sp, np.diag([0.5, 0.6])))

    def test_mu_of_inverse(self, rng):
        sp = SymplecticSpace(3, "R")
        for _ in range(100):
            g = random_symplectic(sp, rng)
            mu = cartan_projection(g).lam
            mu_inv = cartan_projection(symplectic.inverse(g)).lam
            assert np.abs(mu - mu_inv).max() < 1e-8

    def test_bi_K_invariance(self, rng):
        # mu(k g k') = mu(g) for orthogonal-symplectic k, k' in U(n)
        sp = SymplecticSpace(2, "R")
        def random_k():
            th = rng.uniform(0, 2 * np.pi)
            c, s = np.cos(th), np.sin(th)
            return np.block([[c * np.eye(2), -s * np.eye(2)],
                             [s * np.eye(2), c * np.eye(2)]])
        for _ in range(50):
            g = random_symplectic(sp, rng)
            k1, k2 = random_k(), random_k()
            assert symplectic.is_symplectic(k1)
            kg = symplectic.GroupElement(sp, k1 @ g.matrix @ k2, g.log_scale)
            assert np.abs(cartan_projection(kg, check=False).lam
                          - cartan_projection(g).lam).max() < 1e-8

    def test_reciprocal_pair_law(self, rng):
        sp = SymplecticSpace(2, "R")
        for _ in range(100):
            g = random_symplectic(sp, rng)
            logs = cartan.log_singular_values(g.matrix, g.log_scale)
            assert np.abs(logs + logs[::-1]).max() < 1e-6

    def test_subadditivity(self, rng):
        sp = SymplecticSpace(2, "R")
        for _ in range(100):
            g = random_symplectic(sp, rng)
            h = random_symplectic(sp, rng)
            mu_gh = cartan_projection(symplectic.multiply(g, h))
            assert mu_gh.norm <= cartan_projection(g).norm + cartan_projection(h).norm + 1e-8


class TestRoots:
    def test_definition(self):
        sp = SymplecticSpace(2, "R")
        mu = CartanVector(sp, np.array([3.0, 1.0]))
        assert np.allclose(simple_root_values(mu), [2.0, 2.0])

    def test_wall(self):
        sp = SymplecticSpace(2, "R")
        mu = CartanVector(sp, np.array([5.0, 0.0]))
        assert np.allclose(simple_root_values(mu), [5.0, 0.0])

    def test_last_root_doubles(self):
        sp = SymplecticSpace(1, "R")
        mu = CartanVector(sp, np.array([2.0]))
        assert np.allclose(simple_root_values(mu), [4.0])


class TestWordValue:
    def test_empty_word_identity(self, fuchsian_g2):
        g = word_value(fuchsian_g2, ())
        assert g.log_scale == 0.0
        assert np.abs(g.matrix - np.eye(2)).max() == 0.0

    def test_cancellation(self, fuchsian_g2):
        g = word_value(fuchsian_g2, (0, 1))
        assert np.abs(np.exp(g.log_scale) * g.matrix - np.eye(2)).max() < 1e-10

    def test_unknown_letter(self, fuchsian_g2):
        with pytest.raises(AlphabetError):
            word_value(fuchsian_g2, (99,))

    def test_long_word_exact_rational_oracle(self, fuchsian_g2, rng):
        # exact product over Fractions on a length-10 prefix; the renormalized
        # float path must agree to 1e-10 relative
        pres = fuchsian_g2.presentation
        word = tuple(int(l) for l in
                     words.sample_geodesic_words(pres, 30, 1, rng)[0])
        g30 = word_value(fuchsian_g2, word)
        assert np.all(np.isfinite(g30.matrix)) and np.isfinite(g30.log_scale)
        prefix = word[:10]
        gens = {}
        for l in set(prefix):
            M = fuchsian_g2.images[l]
            full = np.exp(M.log_scale) * M.matrix
            gens[l] = [[Fraction(float(x)) for x in row] for row in full]
        exact = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        for l in prefix:
            A, B = exact, gens[l]
            exact = [[A[r][0] * B[0][c] + A[r][1] * B[1][c] for c in range(2)]
                     for r in range(2)]
        approx = word_value(fuchsian_g2, prefix)
        full = np.exp(approx.log_scale) * approx.matrix
        exact_np = np.array([[float(exact[r][c]) for c in range(2)] for r in range(2)])
        assert np.abs(full - exact_np).max() <= 1e-10 * (1 + np.abs(exact_np).max())
