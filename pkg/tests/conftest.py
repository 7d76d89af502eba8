import numpy as np
import pytest

from svdlab.matrix import SymmetricMatrix, orth_tol


@pytest.fixture
def sym():
    """Factory for seeded random symmetric matrices."""

    def make(n: int, seed: int, scale: float = 1.0) -> SymmetricMatrix:
        g = np.random.default_rng(seed).normal(0.0, scale, (n, n))
        return SymmetricMatrix(0.5 * (g + g.T))

    return make


@pytest.fixture
def check_svd():
    """Assert the factorization contract: orthogonal factors, ordered
    nonnegative singular values, and a reconstruction residual on the same
    footing as the orthogonality budget."""

    def check(a, res, resid_bound=None):
        n = res.n
        assert res.sigma.min() >= 0.0
        assert np.all(np.diff(res.sigma) <= 0.0)
        assert res.orth_defect() <= orth_tol(n)
        # the residual stacks errors from both factor applications, so it
        # gets a small multiple of the orthogonality budget
        bound = 4.0 * orth_tol(n) if resid_bound is None else resid_bound
        assert res.residual(a) <= bound

    return check


# the worked 2x2 used across the whole suite: singular values known to 4dp
PAIR_2X2 = np.array([[16.7118, 10.7270], [10.7270, 34.2341]])
PAIR_SIGMA = np.array([39.3231, 11.6228])


@pytest.fixture
def pair_2x2():
    return SymmetricMatrix(PAIR_2X2)
