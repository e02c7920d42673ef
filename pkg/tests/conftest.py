import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(202401)


def random_state(rng, dim_a, dim_b):
    """Haar-ish random pure state of C^dim_a (x) C^dim_b."""
    from loccdisc import BipartiteState

    v = rng.standard_normal(dim_a * dim_b) + 1j * rng.standard_normal(dim_a * dim_b)
    return BipartiteState(dim_a, dim_b, v / np.linalg.norm(v))


def random_orthogonal_pair(rng, dim_a, dim_b):
    from loccdisc import BipartiteState

    v1 = rng.standard_normal(dim_a * dim_b) + 1j * rng.standard_normal(dim_a * dim_b)
    v1 /= np.linalg.norm(v1)
    v2 = rng.standard_normal(dim_a * dim_b) + 1j * rng.standard_normal(dim_a * dim_b)
    v2 -= np.vdot(v1, v2) * v1
    v2 /= np.linalg.norm(v2)
    return BipartiteState(dim_a, dim_b, v1), BipartiteState(dim_a, dim_b, v2)
