"""Equation family and the semidiscrete right-hand side.

The dispersive family is u_t - L u_x + f(u)_x = 0 with Fourier symbol
l(xi) = delta*|xi|^(2m) - gamma*|xi|^(2r) and flux f(u) = u^(q+1)/(q+1).
KdV is the member (delta, m, gamma, r, q) = (1, 1, 0, 0, 1), for which the
right-hand side reduces to F(v) = -v_xxx - P_N(v^2/2)_x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import SpectralField
from .products import galerkin_power

# Largest integer exactly representable in a double; multipliers beyond this
# would silently lose precision on the stiffest modes.
_EXACT_INT_LIMIT = 2.0**53


@dataclass(frozen=True)
class EquationSpec:
    """Dispersion and nonlinearity parameters of one equation in the family.

    ``linearized`` is a test hook that zeroes the nonlinear flux so the exact
    single-mode flow is available for comparison; it is not a config key.
    """

    delta: float = 1.0
    m: int = 1
    gamma: float = 0.0
    r: int = 0
    q: int = 1
    linearized: bool = False

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be > 0")
        if self.m < 1:
            raise ValueError("m must be an integer >= 1")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if not 0 <= self.r < self.m:
            raise ValueError("r must satisfy 0 <= r < m")
        if self.q < 1:
            raise ValueError("q must be an integer >= 1")

    @staticmethod
    def kdv() -> "EquationSpec":
        return EquationSpec(delta=1.0, m=1, gamma=0.0, r=0, q=1)

    @property
    def is_kdv(self) -> bool:
        return (
            self.delta == 1.0
            and self.m == 1
            and self.gamma == 0.0
            and self.q == 1
            and not self.linearized
        )


@dataclass(frozen=True, eq=False)
class LinearMultipliers:
    """Per-mode factors lambda_j = 1j * j * l(j) of the linear part of F.

    All entries are purely imaginary (skew symbol), so the linear flow
    conserves every mode amplitude; lambda_0 = 0.
    """

    N: int
    lam: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=np.complex128)
        lam.flags.writeable = False
        object.__setattr__(self, "lam", lam)


def linear_multipliers(spec: EquationSpec, n: int) -> LinearMultipliers:
    """Multiplier table for degree n; for KdV lambda_j = 1j * j**3."""
    if n < 1:
        raise ValueError("N must be >= 1")
    if float(n) ** (2 * spec.m + 1) >= _EXACT_INT_LIMIT:
        raise ValueError(
            f"multipliers overflow exact double range: N^(2m+1) = {n}^{2 * spec.m + 1} >= 2^53"
        )
    j = np.arange(-n, n + 1, dtype=np.float64)
    aj = np.abs(j)
    symbol = spec.delta * aj ** (2 * spec.m) - spec.gamma * aj ** (2 * spec.r)
    return LinearMultipliers(N=n, lam=1j * j * symbol)


def nonlinear_flux(v: SpectralField, spec: EquationSpec) -> SpectralField:
    """Projected flux P_N f(v) = P_N(v^(q+1)) / (q+1)."""
    if spec.linearized:
        return SpectralField.zeros(v.N)
    pw = galerkin_power(v, spec.q + 1)
    return SpectralField(pw.coeffs / (spec.q + 1))


def apply_F(v: SpectralField, spec: EquationSpec, mult: LinearMultipliers | None = None) -> SpectralField:
    """Semidiscrete right-hand side: coefficient j is lambda_j*v_j - 1j*j*flux_j."""
    if mult is None:
        mult = linear_multipliers(spec, v.N)
    elif mult.N != v.N:
        raise ValueError(f"multiplier table degree {mult.N} != field degree {v.N}")
    n = v.N
    j = np.arange(-n, n + 1, dtype=np.float64)
    out = mult.lam * v.coeffs
    if not spec.linearized:
        out = out - 1j * j * nonlinear_flux(v, spec).coeffs
    return SpectralField(out)
