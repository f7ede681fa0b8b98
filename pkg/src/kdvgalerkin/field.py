"""Trigonometric-polynomial fields on the 2*pi-periodic interval.

A field of degree N is a real-valued function represented by its complex
Fourier coefficients for modes -N..N.  Coefficients are stored in full
(both half-spectra) in ascending mode order; conjugate symmetry is enforced
on construction so every instance represents a real function exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridResolutionError

TAU = 2.0 * np.pi

# Tolerance for rejecting coefficient arrays that are not conjugate-symmetric.
# Anything worse than this is a symmetry bug upstream, not rounding noise.
_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Immutable degree-N trigonometric polynomial, coefficients for modes -N..N.

    ``coeffs[i]`` holds the coefficient of ``exp(1j*(i - N)*x)``.  The stored
    array is exactly conjugate-symmetric (the represented function is real);
    inputs violating symmetry beyond rounding noise are rejected.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.size < 3 or c.size % 2 == 0:
            raise ValueError("coeffs must be a 1-d array of odd length >= 3 (modes -N..N)")
        mirror = np.conj(c[::-1])
        scale = 1.0 + np.max(np.abs(c))
        defect = np.max(np.abs(c - mirror))
        if not np.isfinite(scale) or defect > _SYMMETRY_TOL * scale:
            raise ValueError(
                f"coefficients are not conjugate-symmetric (defect {defect:.3e}, scale {scale:.3e})"
            )
        c = 0.5 * (c + mirror)  # exact symmetry; also zeroes imag of mode 0
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self) -> int:
        return (self.coeffs.size - 1) // 2

    def coeff(self, j: int) -> complex:
        """Coefficient of exp(1j*j*x); zero for |j| > N."""
        if abs(j) > self.N:
            return 0.0 + 0.0j
        return complex(self.coeffs[self.N + j])

    def change_degree(self, n: int) -> "SpectralField":
        """Truncate (the L2 projection) or zero-extend to degree n."""
        if n < 1:
            raise ValueError("degree must be >= 1")
        if n == self.N:
            return self
        out = np.zeros(2 * n + 1, dtype=np.complex128)
        m = min(n, self.N)
        out[n - m : n + m + 1] = self.coeffs[self.N - m : self.N + m + 1]
        return SpectralField(out)

    @staticmethod
    def zeros(n: int) -> "SpectralField":
        if n < 1:
            raise ValueError("degree must be >= 1")
        return SpectralField(np.zeros(2 * n + 1, dtype=np.complex128))

    @staticmethod
    def from_modes(n: int, modes) -> "SpectralField":
        """Build a degree-n field from {j: coefficient}; the -j side is implied.

        Entries are interpreted as the coefficient of exp(1j*j*x) for j >= 0;
        conjugates are placed at -j.  A nonreal j=0 entry is rejected.
        """
        c = np.zeros(2 * n + 1, dtype=np.complex128)
        for j, val in modes.items():
            j = int(j)
            val = complex(val)
            if abs(j) > n:
                raise ValueError(f"mode {j} outside degree {n}")
            if j == 0:
                if val.imag != 0.0:
                    raise ValueError("mode 0 must be real")
                c[n] = val
            else:
                c[n + abs(j)] = val if j > 0 else np.conj(val)
                c[n - abs(j)] = np.conj(c[n + abs(j)])
        return SpectralField(c)


@dataclass(frozen=True, eq=False)
class GridSampling:
    """Real samples at the uniform nodes x_m = -pi + 2*pi*m/M, m = 0..M-1."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("values must be a 1-d array of length >= 2")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def M(self) -> int:
        return self.values.size

    @property
    def x(self) -> np.ndarray:
        return -np.pi + TAU * np.arange(self.M) / self.M


def grid_points(m: int) -> np.ndarray:
    """The sampling nodes x_m = -pi + 2*pi*m/M."""
    return -np.pi + TAU * np.arange(m) / m


def project(samples: GridSampling, n: int) -> SpectralField:
    """Degree-n truncation of the discrete Fourier expansion of the samples.

    Requires M >= 2n+1 so the retained modes are unisolvent on the grid.
    """
    m = samples.M
    if n < 1:
        raise ValueError("degree must be >= 1")
    if m < 2 * n + 1:
        raise GridResolutionError(f"need M >= 2N+1 grid points (M={m}, N={n})")
    half = np.fft.rfft(samples.values) / m
    # The grid starts at -pi, which shows up as an alternating phase factor.
    j = np.arange(n + 1)
    pos = half[: n + 1] * np.where(j % 2 == 0, 1.0, -1.0)
    c = np.empty(2 * n + 1, dtype=np.complex128)
    c[n:] = pos
    c[:n] = np.conj(pos[1:][::-1])
    return SpectralField(c)


def synthesize(field: SpectralField, m: int) -> GridSampling:
    """Evaluate the field at the M uniform nodes.

    The inverse transform is complex; the imaginary residue is checked against
    a rounding-level bound before being discarded, so a broken symmetry
    invariant fails loudly instead of silently producing a wrong real part.
    """
    n = field.N
    if m < 2 * n + 1:
        raise GridResolutionError(f"need M >= 2N+1 grid points (M={m}, N={n})")
    spec = np.zeros(m, dtype=np.complex128)
    j = np.arange(-n, n + 1)
    spec[np.mod(j, m)] = field.coeffs * np.where(j % 2 == 0, 1.0, -1.0)
    values = np.fft.ifft(spec) * m
    _check_imag_residue(values, tol=1e-12)
    return GridSampling(np.ascontiguousarray(values.real))


def _check_imag_residue(values: np.ndarray, tol: float) -> None:
    residue = np.max(np.abs(values.imag))
    scale = 1.0 + np.max(np.abs(values.real))
    if residue > tol * scale:
        raise AssertionError(
            f"imaginary residue {residue:.3e} exceeds {tol:.1e}*(1+max|value|)={tol * scale:.3e}; "
            "conjugate symmetry was violated upstream"
        )


def differentiate(field: SpectralField, order: int = 1) -> SpectralField:
    """Differentiate ``order`` times: coefficient j is scaled by (1j*j)**order.

    Mode 0 gets multiplier 0, so the mean is annihilated; no special case.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    n = field.N
    j = np.arange(-n, n + 1, dtype=np.float64)
    return SpectralField(field.coeffs * (1j * j) ** order)


def l2_norm(field: SpectralField) -> float:
    """L2 norm on (-pi, pi): sqrt(2*pi * sum |c_j|^2) by Parseval."""
    return float(np.sqrt(TAU * np.sum(np.abs(field.coeffs) ** 2)))


def inner_product(a: SpectralField, b: SpectralField) -> float:
    """L2 inner product of two real fields (Parseval form); fields may differ in degree."""
    n = min(a.N, b.N)
    ca = a.coeffs[a.N - n : a.N + n + 1]
    cb = b.coeffs[b.N - n : b.N + n + 1]
    return float(TAU * np.real(np.sum(ca * np.conj(cb))))
