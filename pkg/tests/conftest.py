import numpy as np
import pytest

from tracelab import random_unitary


def bounded_positive(dim, rng, lo=0.5, hi=2.0):
    """Positive definite with spectrum in [lo, hi]; keeps identities well conditioned."""
    u = random_unitary(dim, rng)
    w = rng.uniform(lo, hi, size=dim)
    return (u * w) @ u.conj().T


def bounded_invertible(dim, rng, lo=0.5, hi=2.0):
    u = random_unitary(dim, rng)
    v = random_unitary(dim, rng)
    w = rng.uniform(lo, hi, size=dim)
    return (u * w) @ v.conj().T


def bounded_hermitian_invertible(dim, rng, lo=0.5, hi=2.0):
    u = random_unitary(dim, rng)
    w = rng.uniform(lo, hi, size=dim) * rng.choice([-1.0, 1.0], size=dim)
    return (u * w) @ u.conj().T


def random_hermitian(dim, rng):
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    return (g + g.conj().T) / 2.0


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
