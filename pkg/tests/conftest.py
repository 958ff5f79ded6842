import numpy as np
import pytest

from anosym import reps, symplectic, words


@pytest.fixture(scope="session")
def fuchsian_g2():
    return reps.fuchsian_representation(2)


@pytest.fixture(scope="session")
def hitchin_g2_n2():
    return reps.build_hitchin_base(2, 2)


@pytest.fixture(scope="session")
def product_iota_one(fuchsian_g2):
    triv = reps.trivial_rep(fuchsian_g2.presentation, symplectic.SymplecticSpace(1, "R"))
    return reps.product_rep(fuchsian_g2, triv, -1)


@pytest.fixture(scope="session")
def product_iota_iota(fuchsian_g2):
    return reps.product_rep(fuchsian_g2, fuchsian_g2, -1)


@pytest.fixture(scope="session")
def complexified_hitchin(hitchin_g2_n2):
    return reps.complexify_rep(hitchin_g2_n2)


@pytest.fixture(scope="session")
def surface2():
    return words.surface_group(2)


@pytest.fixture(scope="session")
def free2():
    return words.free_group(2)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
