import numpy as np
import pytest

from anosym import lagrangians as lg
from anosym import numerics, symplectic
from anosym.errors import (ContractError, DimensionError, FieldError,
                           IllConditionedError, NotAGraphError)
from anosym.symplectic import (SymplecticSpace, conjugate_subspace,
                               isotropic_subspace, line_subspace,
                               random_symplectic)


def spc(n):
    return SymplecticSpace(n, "C")


class TestHermitianForm:
    def test_plus_minus_lines(self):
        # omega_C(e1 - i f1, e1 + i f1) = 2i, times i and normalized: -1
        W = line_subspace(spc(1), np.array([1.0, 1j]) / np.sqrt(2))
        H = lg.hermitian_form_on(W)
        assert np.allclose(H, [[-1.0]])
        W2 = line_subspace(spc(1), np.array([1.0, -1j]) / np.sqrt(2))
        assert np.allclose(lg.hermitian_form_on(W2), [[1.0]])

    def test_real_lagrangian_h_zero(self):
        W = isotropic_subspace(spc(2), np.eye(4)[:, :2].astype(complex))
        assert np.abs(lg.hermitian_form_on(W)).max() < 1e-12

    def test_field_error(self):
        L = line_subspace(SymplecticSpace(1, "R"), [1.0, 0.0])
        with pytest.raises(FieldError):
            lg.hermitian_form_on(L)


class TestClassification:
    def test_n1_three_labels(self):
        lower = line_subspace(spc(1), np.array([1.0, 1j]) / np.sqrt(2))
        upper = line_subspace(spc(1), np.array([1.0, -1j]) / np.sqrt(2))
        real = line_subspace(spc(1), np.array([1.0, 0.0], dtype=complex))
        assert str(lg.classify_lagrangian(lower)) == "H^0_{0,1}"
        assert str(lg.classify_lagrangian(upper)) == "H^0_{1,0}"
        assert str(lg.classify_lagrangian(real)) == "R_n"

    def test_mixed_signature(self):
        B = np.array([[1, 0], [0, 1], [1j, 0], [0, -1j]], dtype=complex) / np.sqrt(2)
        W = isotropic_subspace(spc(2), B)
        assert lg.classify_lagrangian(W) == lg.StratumLabel(0, 1, 1)

    def test_nullity_matches_intersection(self, rng):
        for n in (1, 2, 3):
            sp = spc(n)
            for _ in range(60):
                W = lg.random_lagrangian(sp, rng)
                H = lg.hermitian_form_on(W)
                eigs, _ = numerics.hermitian_eigen(H)
                nullity = int(np.sum(np.abs(eigs) <= 1e-8))
                Wbar = conjugate_subspace(W)
                assert nullity == symplectic.intersection_dim(W, Wbar)

    def test_action_invariance(self, rng):
        sp = spc(2)
        real_sp = SymplecticSpace(2, "R")
        for _ in range(20):
            W = lg.random_lagrangian(sp, rng)
            label = lg.classify_lagrangian(W)
            for _ in range(5):
                g = random_symplectic(real_sp, rng)
                moved = isotropic_subspace(sp, g.matrix.astype(complex) @ W.basis)
                assert lg.classify_lagrangian(moved) == label

    def test_conjugation_swaps_signature(self, rng):
        sp = spc(3)
        for _ in range(40):
            W = lg.random_lagrangian(sp, rng)
            a = lg.classify_lagrangian(W)
            b = lg.classify_lagrangian(conjugate_subspace(W))
            assert (a.i, a.p, a.q) == (b.i, b.q, b.p)

    def test_signature_bound(self, rng):
        sp = spc(3)
        for _ in range(60):
            lab = lg.classify_lagrangian(lg.random_lagrangian(sp, rng))
            assert abs(lab.p - lab.q) <= 3 - lab.i
            assert lab.p + lab.q + lab.i == 3

    def test_near_boundary_stays_consistent(self):
        # approaching R_n: the h-nullity and the conjugate-intersection
        # dimension track each other, so labels stay well-defined both sides
        # of the cutoff
        sp = spc(1)
        for eps in (1e-4, 1e-6, 1e-10):
            v = np.array([1.0, 1j * eps])
            W = line_subspace(sp, v / np.linalg.norm(v))
            label = lg.classify_lagrangian(W)
            assert label in (lg.StratumLabel(0, 0, 1), lg.StratumLabel(1, 0, 0))

    def test_mismatch_guard_raises(self, monkeypatch):
        # the cross-check guard itself: a disagreement between the h-nullity
        # and the conjugate-intersection dimension must not be papered over
        sp = spc(1)
        W = line_subspace(sp, np.array([1.0, 1j]) / np.sqrt(2))
        monkeypatch.setattr(symplectic, "intersection_dim", lambda *a, **k: 1)
        with pytest.raises(IllConditionedError):
            lg.classify_lagrangian(W)

    def test_non_lagrangian_rejected(self):
        with pytest.raises(DimensionError):
            lg.classify_lagrangian(line_subspace(spc(2), np.eye(4)[:, 0].astype(complex)))


class TestClosure:
    def test_n1_hemispheres(self):
        assert [str(l) for l in lg.stratum_closure(1, 0)] == ["H^0_{1,0}", "R_n"]

    def test_n2_definite(self):
        labels = lg.stratum_closure(2, 0)
        assert [(l.i, l.p, l.q) for l in labels] == [(0, 2, 0), (1, 1, 0), (2, 0, 0)]

    def test_n2_split(self):
        labels = lg.stratum_closure(1, 1)
        assert [(l.i, l.p, l.q) for l in labels] == [(0, 1, 1), (1, 1, 0), (1, 0, 1), (2, 0, 0)]

    def test_includes_closed_orbit(self):
        for p in range(4):
            assert lg.StratumLabel(3, 0, 0) in lg.stratum_closure(p, 3 - p)


class TestBoundedDomain:
    def test_zero_graph(self):
        sp = spc(2)
        W = lg.bounded_domain_embed(sp, np.zeros((2, 2)))
        P, _ = lg.reference_pair(2)
        assert numerics.subspace_distance(W.basis, P) < 1e-12
        assert lg.classify_lagrangian(W) == lg.StratumLabel(0, 2, 0)

    def test_unit_z_on_boundary(self):
        sp = spc(1)
        W = lg.bounded_domain_embed(sp, np.array([[1.0]]))
        assert lg.classify_lagrangian(W).i >= 1

    def test_interior_classifies_positive(self, rng):
        sp = spc(2)
        for _ in range(20):
            Z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            Z = (Z + Z.T) / 2
            Z *= 0.5 / max(numerics.singular_values(Z)[0], 1e-12)
            W = lg.bounded_domain_embed(sp, Z)
            assert lg.classify_lagrangian(W) == lg.StratumLabel(0, 2, 0)

    def test_nonsymmetric_rejected(self, rng):
        with pytest.raises(ContractError):
            lg.bounded_domain_embed(spc(2), rng.normal(size=(2, 2)) + np.array([[0, 1], [0, 0]]))


class TestStratumSamplers:
    def test_all_strata_hit(self, rng):
        for n in (1, 2, 3):
            sp = spc(n)
            for lab in lg.all_strata(n):
                for _ in range(3):
                    W = lg.random_lagrangian(sp, rng, lab)
                    assert lg.classify_lagrangian(W) == lab

    def test_lagrangian_through_line(self, rng):
        sp = spc(2)
        for _ in range(10):
            g = random_symplectic(sp, rng)
            line = symplectic.apply_element(
                g, line_subspace(sp, np.eye(4)[:, 0].astype(complex)))
            L = lg.lagrangian_through(line)
            assert L.is_lagrangian
            resid = line.basis - L.basis @ (L.basis.conj().T @ line.basis)
            assert np.abs(resid).max() < 1e-9


class TestGraphs:
    def test_diagonal(self):
        spr = SymplecticSpace(2, "R")
        D = lg.diagonal_lagrangian(spr)
        assert lg.product_orbit_type(D) == 0
        back = lg.graph_to_element(D)
        assert np.abs(np.exp(back.log_scale) * back.matrix - np.eye(4)).max() < 1e-10

    def test_round_trip(self, rng):
        spr = SymplecticSpace(2, "R")
        for _ in range(30):
            g = random_symplectic(spr, rng)
            W = lg.graph_lagrangian(g)
            h = lg.graph_to_element(W)
            gf = np.exp(g.log_scale) * g.matrix
            hf = np.exp(h.log_scale) * h.matrix
            assert np.abs(gf - hf).max() < 1e-9

    def test_nonsymplectic_graph_fails(self):
        spr = SymplecticSpace(1, "R")
        bad = symplectic.GroupElement(spr, np.diag([2.0, 3.0]) / 3.0, np.log(3.0))
        with pytest.raises(ContractError):
            lg.graph_lagrangian(bad)

    def test_L_plus_Lprime_orbit_type(self):
        spr = SymplecticSpace(2, "R")
        T = symplectic.direct_sum_embedding(2, 2, -1)
        split = np.zeros((8, 4))
        split[:4, :2] = np.eye(4)[:, :2]
        split[4:, 2:] = np.eye(4)[:, 2:]
        W = isotropic_subspace(SymplecticSpace(4, "R"), T @ split)
        assert lg.product_orbit_type(W) == 2

    def test_first_factor_not_a_graph(self):
        spr = SymplecticSpace(1, "R")
        big = SymplecticSpace(2, "R")
        T = symplectic.direct_sum_embedding(1, 1, -1)
        # L + L' meets V+0; un-graphing must fail
        split = np.zeros((4, 2))
        split[0, 0] = 1.0
        split[3, 1] = 1.0
        W = isotropic_subspace(big, T @ split)
        with pytest.raises(NotAGraphError):
            lg.graph_to_element(W)

    def test_equivariance_of_graphs(self, rng):
        spr = SymplecticSpace(1, "R")
        g = random_symplectic(spr, rng)
        h = random_symplectic(spr, rng)
        W_gh = lg.graph_lagrangian(symplectic.multiply(g, h))
        W_h = lg.graph_lagrangian(h)
        act = symplectic.direct_sum_element(g, symplectic.identity_element(spr), -1)
        moved = symplectic.apply_element(act, W_h)
        assert numerics.subspace_distance(W_gh.basis, moved.basis) < 1e-9
