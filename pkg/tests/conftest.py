import numpy as np
import pytest

from kdvgalerkin import SpectralField


def random_field(n, rng, decay=2.0, scale=1.0):
    """Random real field with |c_j| ~ scale/(1+|j|)**decay (smooth-ish spectrum)."""
    pos = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    pos *= scale / (1.0 + np.arange(n + 1)) ** decay
    pos[0] = pos[0].real
    coeffs = np.concatenate([np.conj(pos[1:][::-1]), pos])
    return SpectralField(coeffs)


def assert_coeffs_close(a, b, atol, msg=""):
    ca = a.coeffs if isinstance(a, SpectralField) else np.asarray(a)
    cb = b.coeffs if isinstance(b, SpectralField) else np.asarray(b)
    worst = np.max(np.abs(ca - cb))
    assert worst <= atol, f"{msg} max coefficient error {worst:.3e} > {atol:.1e}"


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
