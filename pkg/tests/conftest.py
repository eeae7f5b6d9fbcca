"""Shared distribution builders for the test suite.

Each builder returns a pair (JointDistribution, dense numpy array) so tests
can drive the library and the brute-force reference from the same data.
"""

import itertools

import numpy as np
import pytest

from hyperharmonic import JointDistribution


def dense_to_distribution(p: np.ndarray) -> JointDistribution:
    p = np.asarray(p, dtype=float)
    mass = {
        idx: float(v) for idx, v in np.ndenumerate(p) if v > 0
    }
    return JointDistribution(
        num_variables=p.ndim,
        alphabet_sizes=p.shape,
        mass=mass,
    )


def xor_triple():
    """Two fair coins plus their parity: no pairwise dependence, pure synergy."""
    p = np.zeros((2, 2, 2))
    for a, b in itertools.product((0, 1), repeat=2):
        p[a, b, a ^ b] = 0.25
    return dense_to_distribution(p), p


def bit_copy(num_variables: int):
    """One fair coin copied into every variable."""
    p = np.zeros((2,) * num_variables)
    p[(0,) * num_variables] = 0.5
    p[(1,) * num_variables] = 0.5
    return dense_to_distribution(p), p


def independent_bits(num_variables: int):
    shape = (2,) * num_variables
    p = np.full(shape, 1.0 / 2**num_variables)
    return dense_to_distribution(p), p


def correlated_pair(p00=0.4, p01=0.1, p10=0.2, p11=0.3):
    return np.array([[p00, p01], [p10, p11]])


def product_distribution(*factors: np.ndarray):
    """Dense outer product of independent blocks of variables."""
    dense = factors[0]
    for factor in factors[1:]:
        dense = np.multiply.outer(dense, factor)
    return dense_to_distribution(dense), dense


def random_pmf(rng: np.random.Generator, shape, sparsity=0.3):
    """Random dense pmf with a fraction of outcomes zeroed out."""
    p = rng.random(shape)
    mask = rng.random(shape) < sparsity
    p[mask] = 0.0
    if p.sum() == 0:
        p[(0,) * len(shape)] = 1.0
    p /= p.sum()
    return dense_to_distribution(p), p


@pytest.fixture
def xor_distribution():
    return xor_triple()[0]
