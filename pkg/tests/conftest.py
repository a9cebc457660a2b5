import numpy as np
import pytest

from micromaser.fock import TruncatedSpace


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)


def random_density(space: TruncatedSpace, rng, envelope: float = 0.5) -> np.ndarray:
    """Random full-rank density matrix with amplitudes decaying up the ladder.

    The e^{-envelope n} profile keeps the top levels nearly empty so that
    truncation artifacts stay below test tolerances.
    """
    n = np.arange(space.dim)
    weights = np.exp(-envelope * n)
    g = rng.standard_normal((space.dim, space.dim)) + 1j * rng.standard_normal(
        (space.dim, space.dim)
    )
    g = weights[:, None] * g
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def coherent_density(space: TruncatedSpace, amplitude: float) -> np.ndarray:
    """Truncated coherent state |alpha><alpha|, renormalized on the space."""
    import math

    n = np.arange(space.dim)
    amp = np.array(
        [amplitude**k / math.sqrt(math.factorial(k)) for k in n], dtype=float
    )
    amp *= np.exp(-(amplitude**2) / 2.0)
    amp /= np.linalg.norm(amp)
    return np.outer(amp, amp)
