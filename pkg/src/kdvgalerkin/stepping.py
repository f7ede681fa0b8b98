"""Composition time stepping built from implicit-midpoint substeps.

One step of size k is a chain of s midpoint-rule substeps with fractions
b_1..b_s.  Each substep solves its implicit midpoint equation by the
preconditioned fixed-point iteration that is diagonal in coefficient space;
the observed contraction and iteration counts are reported per stage.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from . import _backend
from .equations import EquationSpec, LinearMultipliers, linear_multipliers
from .errors import GuardViolationError, StageDivergenceError
from .field import SpectralField, synthesize

log = logging.getLogger("kdvgalerkin")

GUARD_MODES = ("reject", "warn", "off")


@dataclass(frozen=True)
class CompositionScheme:
    """Ordered substep fractions of a symmetric composition method."""

    b: tuple
    formal_order: int
    name: str

    def __post_init__(self):
        b = tuple(float(x) for x in self.b)
        object.__setattr__(self, "b", b)
        s = len(b)
        if s < 1 or any(x == 0.0 for x in b):
            raise ValueError("substep fractions must be nonzero")
        if self.formal_order < 2 or self.formal_order % 2 != 0:
            raise ValueError("formal_order must be an even integer >= 2")
        if abs(sum(b) - 1.0) > 1e-14:
            raise ValueError(f"substep fractions must sum to 1 (got {sum(b)!r})")
        for i in range(s):
            if abs(b[i] - b[s - 1 - i]) > 1e-14 * max(1.0, abs(b[i])):
                raise ValueError("substep fractions must be palindromic")
        for j in range(3, self.formal_order, 2):
            power_sum = sum(x**j for x in b)
            if abs(power_sum) > 1e-12:
                raise ValueError(f"sum of b^{j} must vanish for order {self.formal_order}")

    @property
    def stages(self) -> int:
        return len(self.b)


def scheme_imr() -> CompositionScheme:
    """The implicit midpoint rule itself: one substep, order 2."""
    return CompositionScheme(b=(1.0,), formal_order=2, name="imr")


def scheme_yoshida(order: int) -> CompositionScheme:
    """Triple-jump composition of the midpoint rule with the given even order >= 4.

    Going from order 2r to 2r+2 replaces every substep by three copies scaled
    by d1, d2, d1 with d1 = 1/(2 - 2**(1/(2r+1))) and d2 = 1 - 2*d1, so order
    2p uses 3**(p-1) stages.
    """
    if order < 4 or order % 2 != 0:
        raise ValueError("order must be an even integer >= 4")
    b = [1.0]
    r = 1
    while 2 * r + 2 <= order:
        d1 = 1.0 / (2.0 - 2.0 ** (1.0 / (2 * r + 1)))
        d2 = 1.0 - 2.0 * d1
        b = [d * x for d in (d1, d2, d1) for x in b]
        r += 1
    return CompositionScheme(b=tuple(b), formal_order=order, name=f"yoshida{order}")


_SCHEMES = {
    "imr": scheme_imr,
    "yoshida4": lambda: scheme_yoshida(4),
    "yoshida6": lambda: scheme_yoshida(6),
    "yoshida8": lambda: scheme_yoshida(8),
}


def scheme_by_name(name: str) -> CompositionScheme:
    try:
        factory = _SCHEMES[name]
    except KeyError:
        raise ValueError(
            f"unknown scheme {name!r}; valid names: {', '.join(sorted(_SCHEMES))}"
        ) from None
    return factory()


@dataclass(frozen=True)
class StepperConfig:
    """Time step and stage-solver controls.

    k may be negative (a backward step, used by the time-symmetry checks);
    evolve() itself requires a forward step.  c0_estimate stands in for the
    unknown inverse-inequality constant in the contraction guard.
    """

    k: float
    fp_tol: float = 1e-13
    fp_max_iter: int = 100
    c0_estimate: float = 1.0
    guard_mode: str = "warn"

    def __post_init__(self):
        if self.k == 0.0 or not math.isfinite(self.k):
            raise ValueError("k must be a nonzero finite number")
        if not 0.0 < self.fp_tol < 1.0:
            raise ValueError("fp_tol must lie in (0, 1)")
        if self.fp_max_iter < 2:
            raise ValueError("fp_max_iter must be >= 2")
        if self.c0_estimate <= 0.0:
            raise ValueError("c0_estimate must be > 0")
        if self.guard_mode not in GUARD_MODES:
            raise ValueError(f"guard_mode must be one of {GUARD_MODES}")

    def with_k(self, k: float) -> "StepperConfig":
        return replace(self, k=k)


@dataclass(frozen=True)
class StageTrace:
    """Observability record of one stage solve."""

    iterations_used: int
    final_residual: float
    gamma_estimate: float
    converged: bool


def imr_substage(
    y_prev: SpectralField,
    bk: float,
    spec: EquationSpec,
    cfg: StepperConfig,
    mult: LinearMultipliers | None = None,
):
    """One midpoint-rule substep of size bk from y_prev.

    Solves the midpoint equation for Z via the diagonal fixed-point iteration
    and returns (2Z - y_prev, trace).  The per-mode divisor 1 - (bk/2)*lambda_j
    never vanishes because lambda_j is purely imaginary; bk may be negative.
    """
    if bk == 0.0:
        raise ValueError("substep size must be nonzero")
    if mult is None:
        mult = linear_multipliers(spec, y_prev.N)
    elif mult.N != y_prev.N:
        raise ValueError(f"multiplier table degree {mult.N} != field degree {y_prev.N}")
    z, iters, final_rel, gamma, converged = _backend.stage_solve(
        y_prev.coeffs, mult.lam, bk, spec.q, cfg.fp_tol, cfg.fp_max_iter, spec.linearized
    )
    trace = StageTrace(
        iterations_used=iters,
        final_residual=final_rel,
        gamma_estimate=gamma,
        converged=converged,
    )
    if not converged:
        raise StageDivergenceError(
            f"stage iteration did not converge in {iters} iterations "
            f"(relative increment {final_rel:.3e}, tol {cfg.fp_tol:.1e})",
            trace=trace,
        )
    return SpectralField(2.0 * z - y_prev.coeffs), trace


def sup_norm_estimate(field: SpectralField) -> float:
    """Max absolute value sampled on a 4N grid (the guard's R)."""
    return float(np.max(np.abs(synthesize(field, 4 * field.N).values)))


def stability_guard(cfg: StepperConfig, n: int, scheme: CompositionScheme, r_sup: float) -> float:
    """Contraction-guard value Gamma = (c0/2) * |k| * max|b_i| * N * (R+1)."""
    if r_sup < 0:
        raise ValueError("R must be >= 0")
    bmax = max(abs(x) for x in scheme.b)
    return 0.5 * cfg.c0_estimate * abs(cfg.k) * bmax * n * (r_sup + 1.0)


def _check_guard(u, scheme, cfg, step_index, warn):
    """Evaluate the guard for the state u; raise, optionally warn, or pass."""
    gamma = stability_guard(cfg, u.N, scheme, sup_norm_estimate(u))
    if gamma < 1.0:
        return False
    message = (
        f"contraction guard violated at step {step_index}: Gamma = {gamma:.4g} >= 1 "
        f"(k={cfg.k:g}, N={u.N})"
    )
    if cfg.guard_mode == "reject":
        raise GuardViolationError(message, gamma=gamma, step_index=step_index)
    if warn:
        log.warning(message)
    return True


def step(
    u: SpectralField,
    scheme: CompositionScheme,
    spec: EquationSpec,
    cfg: StepperConfig,
    mult: LinearMultipliers | None = None,
    _step_index: int = 0,
    _skip_guard: bool = False,
):
    """One full composition step of size cfg.k; returns (state, stage traces)."""
    if mult is None:
        mult = linear_multipliers(spec, u.N)
    if cfg.guard_mode != "off" and not _skip_guard:
        _check_guard(u, scheme, cfg, _step_index, warn=True)
    traces = []
    y = u
    for i, b in enumerate(scheme.b, start=1):
        try:
            y, trace = imr_substage(y, cfg.k * b, spec, cfg, mult=mult)
        except StageDivergenceError as exc:
            raise StageDivergenceError(
                f"stage {i}/{scheme.stages} of step {_step_index}: {exc}",
                trace=exc.trace,
                stage_index=i,
                step_index=_step_index,
            ) from None
        traces.append(trace)
    return y, traces


def evolve(
    u0: SpectralField,
    T: float,
    scheme: CompositionScheme,
    spec: EquationSpec,
    cfg: StepperConfig,
    observer=None,
    observe_every: int = 1,
) -> SpectralField:
    """March from u0 to time T = M*k; T must be an integer multiple of k.

    The observer, when given, is called as observer(n, t_n, state, traces) at
    n = 0, every observe_every-th step, and the final step.  A repeated guard
    violation in warn mode is logged only on its first occurrence.
    """
    if T <= 0.0:
        raise ValueError("T must be > 0")
    if cfg.k <= 0.0:
        raise ValueError("evolve requires a forward step (k > 0)")
    m_steps = round(T / cfg.k)
    if m_steps < 1 or abs(m_steps * cfg.k - T) > 1e-12 * T:
        raise ValueError(
            f"T must be an integer multiple of k (T={T!r}, k={cfg.k!r}); "
            "adjust k rather than letting the horizon drift"
        )
    mult = linear_multipliers(spec, u0.N)
    u = u0
    if observer is not None:
        observer(0, 0.0, u, [])
    warned = False
    for n in range(1, m_steps + 1):
        if cfg.guard_mode != "off":
            violated = _check_guard(u, scheme, cfg, n, warn=not warned)
            warned = warned or violated
        u, traces = step(u, scheme, spec, cfg, mult=mult, _step_index=n, _skip_guard=True)
        if observer is not None and (n % observe_every == 0 or n == m_steps):
            observer(n, n * cfg.k, u, traces)
    return u
