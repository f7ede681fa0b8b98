"""Conserved functionals, drift tracking, and error norms.

For the KdV member of the family the three classical invariants are computed
spectrally exactly: mass, the squared L2 norm, and the Hamiltonian-type
integral of u_x^2 - u^3/3.  The cubic term uses the fully dealiased cube so
the telemetry measures the integrator, not aliasing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .equations import EquationSpec
from .field import TAU, SpectralField, l2_norm
from .products import galerkin_power


@dataclass(frozen=True)
class InvariantTriple:
    """Mass, squared L2 norm, and (for KdV only) the cubic Hamiltonian integral.

    i3 is None when the equation is not the KdV member; its Hamiltonian
    differs and is not computed here.
    """

    i1: float
    i2: float
    i3: float | None

    def __post_init__(self):
        if self.i2 < 0:
            raise ValueError("i2 is a squared norm and cannot be negative")


def invariants(v: SpectralField, spec: EquationSpec | None = None) -> InvariantTriple:
    """The three conserved integrals of v; i3 only for the KdV member."""
    c = v.coeffs
    n = v.N
    i1 = TAU * float(np.real(c[n]))
    i2 = TAU * float(np.sum(np.abs(c) ** 2))
    if spec is not None and not spec.is_kdv:
        return InvariantTriple(i1=i1, i2=i2, i3=None)
    j = np.arange(-n, n + 1, dtype=np.float64)
    grad_sq = TAU * float(np.sum(j**2 * np.abs(c) ** 2))
    cube_mean = float(np.real(galerkin_power(v, 3).coeffs[n]))
    return InvariantTriple(i1=i1, i2=i2, i3=grad_sq - TAU * cube_mean / 3.0)


def l2_distance(a: SpectralField, b: SpectralField) -> float:
    """Parseval L2 distance; the lower-degree field is zero-extended."""
    n = max(a.N, b.N)
    ca = a.change_degree(n).coeffs
    cb = b.change_degree(n).coeffs
    return float(np.sqrt(TAU * np.sum(np.abs(ca - cb) ** 2)))


@dataclass(frozen=True)
class DriftReport:
    """Worst deviation of each tracked quantity from its first observed value."""

    l2_drift: float
    i1_drift: float
    i1_time: float
    i2_drift: float
    i2_time: float
    i3_drift: float | None
    i3_time: float | None
    observations: int


class DriftTracker:
    """Observer that accumulates invariant drift along a trajectory.

    Feed it to evolve() as the observer, or call observe() directly; the
    first observation is the baseline.
    """

    def __init__(self, spec: EquationSpec | None = None):
        self._spec = spec
        self._base: InvariantTriple | None = None
        self._base_l2: float = 0.0
        self._count = 0
        self._l2_drift = 0.0
        self._drift = {"i1": (0.0, 0.0), "i2": (0.0, 0.0), "i3": (0.0, 0.0)}
        self._track_i3 = True

    def observe(self, n, t, state, traces):
        inv = invariants(state, self._spec)
        norm = l2_norm(state)
        self._count += 1
        if self._base is None:
            self._base = inv
            self._base_l2 = norm
            self._track_i3 = inv.i3 is not None
            return
        self._l2_drift = max(self._l2_drift, abs(norm - self._base_l2))
        for name, cur, ref in (("i1", inv.i1, self._base.i1), ("i2", inv.i2, self._base.i2)):
            dev = abs(cur - ref)
            if dev > self._drift[name][0]:
                self._drift[name] = (dev, t)
        if self._track_i3 and inv.i3 is not None:
            dev = abs(inv.i3 - self._base.i3)
            if dev > self._drift["i3"][0]:
                self._drift["i3"] = (dev, t)

    __call__ = observe

    def report(self) -> DriftReport:
        if self._count < 2:
            raise ValueError("drift needs at least 2 observed states")
        i3_drift, i3_time = self._drift["i3"] if self._track_i3 else (None, None)
        return DriftReport(
            l2_drift=self._l2_drift,
            i1_drift=self._drift["i1"][0],
            i1_time=self._drift["i1"][1],
            i2_drift=self._drift["i2"][0],
            i2_time=self._drift["i2"][1],
            i3_drift=i3_drift,
            i3_time=i3_time,
            observations=self._count,
        )
