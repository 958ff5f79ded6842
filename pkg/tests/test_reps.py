import numpy as np
import pytest

from anosym import cartan, numerics, reps, symplectic, words
from anosym.errors import ConstructionError, ContractError, FieldError
from anosym.reps import (build_hitchin_base, complexify_rep, fuchsian_generators,
                         fuchsian_representation, invariant_skew_form,
                         make_representation, product_rep, realify,
                         realify_matrix, sym_power_matrix, sym_power_rep,
                         trivial_rep)


def det2(M):
    return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]


class TestFuchsian:
    def test_determinants_exact(self):
        for G in fuchsian_generators(2):
            assert abs(det2(G) - 1.0) < 1e-12

    def test_traces_closed_form(self):
        expected = 2.0 / np.tan(np.pi / 8)
        for G in fuchsian_generators(2):
            assert abs(np.trace(G) - expected) < 1e-9

    def test_all_hyperbolic(self):
        for g in (2, 3):
            for G in fuchsian_generators(g):
                assert abs(np.trace(G)) > 2.0

    def test_relator_matrix_product_oracle(self, surface2):
        gens = fuchsian_generators(2)
        M = np.eye(2)
        for l in surface2.relator:
            G = gens[l // 2]
            if l % 2:
                a, b, c, d = G.ravel()
                G = np.array([[d, -b], [-c, a]]) / (a * d - b * c)
            M = M @ G
        dev = min(np.abs(M - np.eye(2)).max(), np.abs(M + np.eye(2)).max())
        assert dev < 1e-6

    def test_genus_validation(self):
        with pytest.raises(ValueError):
            fuchsian_generators(1)


class TestSymPower:
    def test_identity(self):
        for n in (1, 2, 3):
            assert np.abs(sym_power_rep(n)(np.eye(2)) - np.eye(2 * n)).max() < 1e-12

    def test_n1_is_identity_map(self, rng):
        A = rng.normal(size=(2, 2))
        A /= np.sqrt(abs(det2(A)))
        if det2(A) < 0:
            A[:, 0] *= -1
        assert np.abs(sym_power_rep(1)(A) - A).max() < 1e-12

    def test_weights_of_diagonal(self):
        # Sym^3 weights 3,1,-1,-3: mu(diag(t,1/t)) = (3 log t, log t)
        D = sym_power_rep(2)(np.diag([2.0, 0.5]))
        s = numerics.singular_values(D)
        assert np.allclose(np.log(s[:2]), [3 * np.log(2), np.log(2)], atol=1e-10)

    def test_homomorphism(self, rng):
        pi = sym_power_rep(2)
        for _ in range(20):
            A = rng.normal(size=(2, 2))
            A /= np.sqrt(abs(det2(A)))
            if det2(A) < 0:
                A[:, 0] *= -1
            B = rng.normal(size=(2, 2))
            B /= np.sqrt(abs(det2(B)))
            if det2(B) < 0:
                B[:, 0] *= -1
            assert np.abs(pi(A) @ pi(B) - pi(A @ B)).max() < 1e-8

    def test_det_contract(self):
        with pytest.raises(ContractError):
            sym_power_rep(2)(np.diag([2.0, 1.0]))

    def test_invariant_form_unique(self):
        probes = [np.array([[2.0, 1.0], [1.0, 1.0]]),
                  np.array([[1.0, -1.0], [1.0, 0.5]])]
        probes = [P / np.sqrt(det2(P)) for P in probes]
        B = invariant_skew_form([sym_power_matrix(P, 2) for P in probes])
        assert np.abs(B + B.T).max() < 1e-12
        for P in probes:
            M = sym_power_matrix(P, 2)
            assert np.abs(M.T @ B @ M - B).max() < 1e-8


class TestHitchin:
    def test_n1_is_fuchsian(self, fuchsian_g2):
        h = build_hitchin_base(2, 1)
        for k in range(4):
            assert np.abs(h.images[2 * k].matrix - fuchsian_g2.images[2 * k].matrix).max() < 1e-10

    def test_images_symplectic(self, hitchin_g2_n2):
        for k in range(4):
            g = hitchin_g2_n2.images[2 * k]
            assert symplectic.is_symplectic_element(g)

    def test_generator_gaps_positive(self, hitchin_g2_n2):
        for k in range(4):
            mu = cartan.cartan_projection(hitchin_g2_n2.images[2 * k])
            alphas = cartan.simple_root_values(mu)
            assert np.all(alphas > 0)

    def test_homomorphism_on_words(self, hitchin_g2_n2, rng):
        pres = hitchin_g2_n2.presentation
        for _ in range(50):
            u = tuple(int(l) for l in words.sample_geodesic_words(pres, 3, 1, rng)[0])
            v = tuple(int(l) for l in words.sample_geodesic_words(pres, 3, 1, rng)[0])
            gu = cartan.word_value(hitchin_g2_n2, u)
            gv = cartan.word_value(hitchin_g2_n2, v)
            guv = cartan.word_value(hitchin_g2_n2, u + v)
            lhs = symplectic.multiply(gu, gv)
            scale = np.exp(lhs.log_scale - guv.log_scale)
            assert np.abs(lhs.matrix * scale - guv.matrix).max() < 1e-7


class TestProduct:
    def test_iota_one_mu(self, product_iota_one):
        # singular values e^lam, 1, 1, e^-lam per generator
        mu = cartan.cartan_projection(product_iota_one.images[0])
        lam = np.arccosh(1.0 / np.tan(np.pi / 8))
        assert np.allclose(mu.lam, [lam, 0.0], atol=1e-10)

    def test_iota_iota_alpha1_zero(self, product_iota_iota):
        mu = cartan.cartan_projection(product_iota_iota.images[0])
        alphas = cartan.simple_root_values(mu)
        assert abs(alphas[0]) < 1e-10
        assert alphas[1] > 0

    def test_block_singular_value_oracle(self, fuchsian_g2, rng):
        # assembled doubled element has the union of the factor spectra
        triv = trivial_rep(fuchsian_g2.presentation, symplectic.SymplecticSpace(1, "R"))
        prod = product_rep(fuchsian_g2, triv, -1)
        for k in range(4):
            s_small = numerics.singular_values(
                np.exp(fuchsian_g2.images[2 * k].log_scale) * fuchsian_g2.images[2 * k].matrix)
            g = prod.images[2 * k]
            s_big = numerics.singular_values(np.exp(g.log_scale) * g.matrix)
            expected = np.sort(np.concatenate([s_small, [1.0, 1.0]]))[::-1]
            assert np.abs(s_big - expected).max() < 1e-9

    def test_eps_plus_one(self, fuchsian_g2):
        prod = product_rep(fuchsian_g2, fuchsian_g2, +1)
        for k in range(4):
            assert symplectic.is_symplectic_element(prod.images[2 * k])
        # alpha_2 = 2*min(lam1, lam2) for equal diagonal-type factors
        mu = cartan.cartan_projection(prod.images[0])
        lam = np.arccosh(1.0 / np.tan(np.pi / 8))
        assert np.allclose(cartan.simple_root_values(mu), [0.0, 2 * lam], atol=1e-9)

    def test_trivial_of_identity(self, fuchsian_g2):
        triv = trivial_rep(fuchsian_g2.presentation, symplectic.SymplecticSpace(1, "R"))
        prod = product_rep(fuchsian_g2, triv, -1)
        e = cartan.word_value(prod, ())
        assert np.abs(e.matrix - np.eye(4)).max() == 0.0

    def test_presentation_mismatch(self, fuchsian_g2, free2):
        other = trivial_rep(free2, symplectic.SymplecticSpace(1, "R"))
        with pytest.raises(ContractError):
            product_rep(fuchsian_g2, other, -1)


class TestRealify:
    def test_identity(self):
        assert np.abs(realify_matrix(np.eye(2, dtype=complex)) - np.eye(4)).max() < 1e-14

    def test_diag_mu(self, free2):
        space = symplectic.SymplecticSpace(1, "C")
        r = 2.0
        rep = make_representation(free2, space,
                                  [np.diag([r, 1 / r]).astype(complex),
                                   np.diag([np.exp(0.3j), np.exp(-0.3j)])])
        real = realify(rep)
        assert real.space.n == 2
        mu = cartan.cartan_projection(real.images[0])
        assert np.allclose(mu.lam, [np.log(r), np.log(r)], atol=1e-10)

    def test_unitary_realification_mu_zero(self, free2):
        space = symplectic.SymplecticSpace(1, "C")
        rep = make_representation(free2, space,
                                  [np.diag([np.exp(0.9j), np.exp(-0.9j)]),
                                   np.diag([np.exp(0.2j), np.exp(-0.2j)])])
        real = realify(rep)
        for k in (0, 2):
            assert np.allclose(cartan.cartan_projection(real.images[k]).lam, 0.0, atol=1e-10)

    def test_field_error(self, fuchsian_g2):
        with pytest.raises(FieldError):
            realify(fuchsian_g2)


class TestComplexify:
    def test_entries_identical(self, fuchsian_g2):
        c = complexify_rep(fuchsian_g2)
        assert c.space.field == "C"
        for k in range(8):
            assert np.abs(c.images[k].matrix - fuchsian_g2.images[k].matrix).max() < 1e-14

    def test_mu_unchanged(self, fuchsian_g2, rng):
        c = complexify_rep(fuchsian_g2)
        pres = fuchsian_g2.presentation
        for _ in range(100):
            w = tuple(int(l) for l in words.sample_geodesic_words(pres, 4, 1, rng)[0])
            mu_r = cartan.cartan_projection(cartan.word_value(fuchsian_g2, w)).lam
            mu_c = cartan.cartan_projection(cartan.word_value(c, w)).lam
            assert np.abs(mu_r - mu_c).max() < 1e-10

    def test_limit_lines_conjugation_fixed(self, complexified_hitchin):
        from anosym import anosov
        g = complexified_hitchin.images[0]
        F, _ = anosov.proximal_fixed_points(g, 1)
        Fbar = symplectic.conjugate_subspace(F)
        assert numerics.subspace_distance(F.basis, Fbar.basis) < 1e-8

    def test_field_error(self, complexified_hitchin):
        with pytest.raises(FieldError):
            complexify_rep(complexified_hitchin)


class TestConstruction:
    def test_wrong_generator_count(self, surface2):
        with pytest.raises(ConstructionError):
            make_representation(surface2, symplectic.SymplecticSpace(1, "R"),
                                [np.eye(2)])

    def test_relator_failure_detected(self, surface2, rng):
        mats = [symplectic.random_symplectic(symplectic.SymplecticSpace(1, "R"), rng,
                                             transvections=3).full_matrix
                for _ in range(4)]
        with pytest.raises(ConstructionError):
            make_representation(surface2, symplectic.SymplecticSpace(1, "R"), mats)
