"""Exact (dealiased) Galerkin products of spectral fields.

The coefficient-j of a product is the full truncated convolution sum; no
aliasing error enters for any retained mode.  The active kernel backend does
the arithmetic (compiled convolution or zero-padded FFT).
"""

from __future__ import annotations

from . import _backend
from .field import SpectralField


def galerkin_product(a: SpectralField, b: SpectralField) -> SpectralField:
    """Projection onto degree N of the pointwise product a*b (exact)."""
    if a.N != b.N:
        raise ValueError(f"degree mismatch: {a.N} != {b.N}")
    return SpectralField(_backend.product_truncated(a.coeffs, b.coeffs, a.N))


def galerkin_power(a: SpectralField, p: int) -> SpectralField:
    """Projection onto degree N of a**p (exact for any p >= 1)."""
    if p < 1:
        raise ValueError("power must be >= 1")
    if p == 1:
        return a
    return SpectralField(_backend.power_truncated(a.coeffs, p, a.N))
