import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdvgalerkin import (
    GridResolutionError,
    GridSampling,
    SpectralField,
    differentiate,
    inner_product,
    l2_distance,
    l2_norm,
    project,
    synthesize,
)
from kdvgalerkin.field import TAU, grid_points

from conftest import assert_coeffs_close, random_field


def dft_oracle(values, n):
    """Brute-force discrete Fourier coefficients at the -pi-based nodes."""
    m = len(values)
    x = grid_points(m)
    return np.array(
        [np.sum(values * np.exp(-1j * j * x)) / m for j in range(-n, n + 1)]
    )


class TestSpectralField:
    def test_rejects_asymmetric_coeffs(self):
        c = np.array([0.1, 1.0, 0.3 + 1j], dtype=complex)
        with pytest.raises(ValueError, match="conjugate-symmetric"):
            SpectralField(c)

    def test_rejects_even_length(self):
        with pytest.raises(ValueError):
            SpectralField(np.zeros(4, dtype=complex))

    def test_mode_zero_made_exactly_real(self, rng):
        f = random_field(5, rng)
        assert f.coeffs[5].imag == 0.0

    def test_coeff_accessor_out_of_range(self):
        f = SpectralField.from_modes(2, {1: 0.5})
        assert f.coeff(1) == 0.5
        assert f.coeff(-1) == 0.5
        assert f.coeff(7) == 0.0

    def test_change_degree_roundtrip(self, rng):
        f = random_field(6, rng)
        g = f.change_degree(12).change_degree(6)
        assert_coeffs_close(f, g, 0.0)

    def test_immutable(self):
        f = SpectralField.from_modes(2, {1: 0.5})
        with pytest.raises(ValueError):
            f.coeffs[0] = 1.0


class TestProject:
    def test_cosine_single_mode(self):
        x = grid_points(8)
        f = project(GridSampling(np.cos(x)), 2)
        assert_coeffs_close(f, SpectralField.from_modes(2, {1: 0.5}), 1e-15)

    def test_constant(self):
        f = project(GridSampling(np.ones(4)), 1)
        assert_coeffs_close(f, SpectralField.from_modes(1, {0: 1.0}), 1e-15)

    def test_truncates_high_mode(self):
        # cos(3x) on 16 points has no content below mode 3; verified against
        # the explicit quadrature sum, not just the FFT path.
        x = grid_points(16)
        values = np.cos(3 * x)
        f = project(GridSampling(values), 2)
        oracle = dft_oracle(values, 2)
        assert np.max(np.abs(oracle)) < 1e-15
        assert_coeffs_close(f.coeffs, oracle, 1e-14)

    def test_matches_quadrature_oracle(self, rng):
        f = random_field(5, rng)
        samples = synthesize(f, 16)
        proj = project(samples, 5)
        assert_coeffs_close(proj.coeffs, dft_oracle(samples.values, 5), 1e-13)

    def test_grid_too_small(self):
        with pytest.raises(GridResolutionError):
            project(GridSampling(np.ones(8)), 4)


class TestSynthesize:
    def test_cosine_values(self):
        f = SpectralField.from_modes(1, {1: 0.5})
        out = synthesize(f, 4)
        assert np.allclose(out.values, np.cos(out.x), atol=1e-15)

    def test_zero_field(self):
        out = synthesize(SpectralField.zeros(3), 9)
        assert np.all(out.values == 0.0)

    def test_grid_too_small(self):
        with pytest.raises(GridResolutionError):
            synthesize(SpectralField.zeros(4), 8)

    @settings(max_examples=30, deadline=None)
    @given(
        seed=st.integers(0, 2**31 - 1),
        n=st.integers(1, 20),
        extra=st.integers(0, 40),
    )
    def test_roundtrip_identity(self, seed, n, extra):
        f = random_field(n, np.random.default_rng(seed))
        m = 2 * n + 1 + extra
        g = project(synthesize(f, m), n)
        assert_coeffs_close(f, g, 1e-12)

    def test_roundtrip_m64(self, rng):
        f = random_field(10, rng)
        assert_coeffs_close(f, project(synthesize(f, 64), 10), 1e-12)


class TestDifferentiate:
    def test_third_derivative_of_cosine_is_sine(self):
        f = SpectralField.from_modes(1, {1: 0.5})
        d3 = differentiate(f, 3)
        assert_coeffs_close(d3, SpectralField.from_modes(1, {1: -0.5j}), 1e-15)

    def test_constant_annihilated(self):
        f = SpectralField.from_modes(3, {0: 2.5})
        for order in (1, 2, 5):
            assert np.all(differentiate(f, order).coeffs == 0.0)

    def test_first_derivative_mode_two(self):
        # d/dx (e^{2ix} + e^{-2ix}) = 2i e^{2ix} - 2i e^{-2ix}
        f = SpectralField.from_modes(2, {2: 1.0})
        d = differentiate(f, 1)
        assert d.coeff(2) == pytest.approx(2j)
        assert d.coeff(-2) == pytest.approx(-2j)

    def test_composition_equals_second_order(self, rng):
        f = random_field(12, rng)
        twice = differentiate(differentiate(f, 1), 1)
        assert_coeffs_close(twice, differentiate(f, 2), 1e-12)

    def test_preserves_symmetry(self, rng):
        d = differentiate(random_field(9, rng), 3)
        assert_coeffs_close(d.coeffs, np.conj(d.coeffs[::-1]), 0.0)


class TestNorms:
    def test_cosine_norm(self):
        assert l2_norm(SpectralField.from_modes(4, {1: 0.5})) == pytest.approx(np.sqrt(np.pi))

    def test_constant_norm(self):
        assert l2_norm(SpectralField.from_modes(1, {0: 1.0})) == pytest.approx(np.sqrt(TAU))

    def test_matches_trapezoid_quadrature(self, rng):
        f = random_field(8, rng)
        values = synthesize(f, 64).values  # M = 8N
        quad = np.sqrt(np.sum(values**2) * TAU / values.size)
        assert l2_norm(f) == pytest.approx(quad, rel=1e-10)

    def test_parseval_inner_product(self, rng):
        a = random_field(6, rng)
        b = random_field(6, rng)
        m = 128
        va, vb = synthesize(a, m).values, synthesize(b, m).values
        quad = np.sum(va * vb) * TAU / m
        assert inner_product(a, b) == pytest.approx(quad, rel=1e-10, abs=1e-12)


def test_projection_error_decays_spectrally():
    # exp(cos x) is entire, so successive projections collapse at spectral
    # speed; below the rounding floor ordering would be noise, hence the clamp.
    m = 512
    samples = GridSampling(np.exp(np.cos(grid_points(m))))
    degrees = [2, 4, 8, 16, 32]
    dists = [l2_distance(project(samples, n), project(samples, 2 * n)) for n in degrees]
    for coarse, fine in zip(dists, dists[1:]):
        assert fine <= coarse or max(coarse, fine) < 1e-12
    assert dists[-1] < 1e-12
