"""Convergence studies: temporal order, one-step (local) order, spatial accuracy.

There is no closed-form test solution, so every study measures
self-convergence: the reference is the same spatial resolution driven with a
much finer time step (temporal, local) or a much finer spatial resolution at
the same time step (spatial).  Points whose error sits at the rounding floor
are excluded from the order fit and recorded as such.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .equations import EquationSpec
from .errors import GuardViolationError, StageDivergenceError
from .field import GridSampling, SpectralField, grid_points, l2_norm, project
from .invariants import l2_distance
from .stepping import CompositionScheme, StepperConfig, evolve, step

_EPS = float(np.finfo(np.float64).eps)

# Errors below this multiple of machine epsilon (times the reference norm)
# carry no order information; they are rounding noise.
_FLOOR_FACTOR = 1e3


@dataclass(frozen=True)
class StudyReport:
    """Outcome of one convergence study.

    points holds (parameter, error) pairs that entered the order fit;
    excluded holds (parameter, error, reason) for dropped points.  When fewer
    than two points survive, estimated_order is NaN and the report is flagged
    floor_limited (all signal at rounding level) or degenerate (all zero).
    """

    study_kind: str
    points: tuple
    estimated_order: float
    reference_descriptor: str
    excluded: tuple = ()
    degenerate: bool = False
    floor_limited: bool = False
    stage_iterations: tuple = ()

    def __post_init__(self):
        for _, err in self.points:
            if not err > 0:
                raise ValueError("fitted points must have positive errors")

    @property
    def points_used(self) -> int:
        return len(self.points)


def estimate_order(points) -> float:
    """Least-squares slope of log(error) against log(parameter)."""
    pts = [(float(p), float(e)) for p, e in points]
    if len(pts) < 2:
        raise ValueError("order estimation needs at least 2 points")
    params = np.array([p for p, _ in pts])
    errors = np.array([e for _, e in pts])
    if np.any(params <= 0) or np.any(errors <= 0):
        raise ValueError("parameters and errors must be positive")
    if np.unique(params).size < 2:
        raise ValueError("parameters must not be all equal")
    slope = np.polyfit(np.log(params), np.log(errors), 1)[0]
    return float(slope)


def as_field(u0, n: int) -> SpectralField:
    """Initial data at degree n: project a callable, or re-truncate a field."""
    if isinstance(u0, SpectralField):
        return u0.change_degree(n)
    if callable(u0):
        m = max(8 * n, 64)
        return project(GridSampling(np.asarray(u0(grid_points(m)), dtype=np.float64)), n)
    raise TypeError("u0 must be a SpectralField or a callable of x")


class _IterationMax:
    """Observer recording the largest stage iteration count seen."""

    def __init__(self):
        self.max_iters = 0

    def __call__(self, n, t, state, traces):
        for tr in traces:
            if tr.iterations_used > self.max_iters:
                self.max_iters = tr.iterations_used


@contextmanager
def _study_point(label):
    """Abort the study naming the offending point when a run fails."""
    try:
        yield
    except StageDivergenceError as exc:
        raise StageDivergenceError(
            f"study aborted at {label}: {exc}",
            trace=exc.trace,
            stage_index=exc.stage_index,
            step_index=exc.step_index,
        ) from None
    except GuardViolationError as exc:
        raise GuardViolationError(
            f"study aborted at {label}: {exc}", gamma=exc.gamma, step_index=exc.step_index
        ) from None


def _split_points(raw, floor):
    """Partition (param, error) pairs into fitted points and excluded ones."""
    points, excluded = [], []
    for param, err in raw:
        if err == 0.0:
            excluded.append((param, err, "zero"))
        elif err < floor:
            excluded.append((param, err, "floor"))
        else:
            points.append((param, err))
    return tuple(points), tuple(excluded)


def _make_report(kind, raw, floor, descriptor, stage_iterations):
    points, excluded = _split_points(raw, floor)
    degenerate = all(err == 0.0 for _, err in raw)
    floor_limited = not degenerate and len(points) < 2
    if len(points) >= 2:
        order = estimate_order(points)
    else:
        order = float("nan")
    return StudyReport(
        study_kind=kind,
        points=points,
        estimated_order=order,
        reference_descriptor=descriptor,
        excluded=excluded,
        degenerate=degenerate,
        floor_limited=floor_limited,
        stage_iterations=tuple(stage_iterations),
    )


def _check_k_list(k_list):
    ks = [float(k) for k in k_list]
    if len(ks) < 2:
        raise ValueError("insufficient points: a study needs at least 2 step sizes")
    if any(k <= 0 for k in ks):
        raise ValueError("step sizes must be positive")
    if any(b >= a for a, b in zip(ks, ks[1:])):
        raise ValueError("k_list must be strictly decreasing")
    return ks


def temporal_study(
    u0,
    spec: EquationSpec,
    scheme: CompositionScheme,
    n: int,
    T: float,
    k_list,
    *,
    fp_tol: float = 1e-13,
    fp_max_iter: int = 100,
    guard_mode: str = "warn",
) -> StudyReport:
    """Global-in-time order: errors at t=T against the same run at k_ref = min(k)/10.

    The reference shares N, so spatial truncation cancels and the fit isolates
    the temporal exponent.
    """
    ks = _check_k_list(k_list)
    field0 = as_field(u0, n)
    k_ref = min(ks) / 10.0

    def run(k):
        watcher = _IterationMax()
        cfg = StepperConfig(k=k, fp_tol=fp_tol, fp_max_iter=fp_max_iter, guard_mode=guard_mode)
        state = evolve(field0, T, scheme, spec, cfg, observer=watcher, observe_every=1)
        return state, watcher.max_iters

    with _study_point(f"reference k={k_ref:g}"):
        reference, _ = run(k_ref)
    floor = _FLOOR_FACTOR * _EPS * l2_norm(reference)
    raw, iter_stats = [], []
    for k in ks:
        with _study_point(f"k={k:g}"):
            state, iters = run(k)
        raw.append((k, l2_distance(state, reference)))
        iter_stats.append((k, iters))
    descriptor = f"self-convergence: {scheme.name}, N={n}, T={T:g}, k_ref={k_ref:g}"
    return _make_report("temporal", raw, floor, descriptor, iter_stats)


def local_error_study(
    u0,
    spec: EquationSpec,
    scheme: CompositionScheme,
    n: int,
    k_list,
    *,
    fp_tol: float = 1e-13,
    fp_max_iter: int = 100,
    substep_ratio: int = 100,
) -> StudyReport:
    """One-step defect against the same scheme substepped substep_ratio times.

    The substepped run's own error is smaller than the one-step defect by a
    factor substep_ratio**formal_order, so it stands in for the semidiscrete
    flow over one step.
    """
    ks = _check_k_list(k_list)
    field0 = as_field(u0, n)
    raw, iter_stats = [], []
    floor = 0.0
    for k in ks:
        cfg = StepperConfig(k=k, fp_tol=fp_tol, fp_max_iter=fp_max_iter, guard_mode="warn")
        with _study_point(f"k={k:g}"):
            one, traces = step(field0, scheme, spec, cfg)
            fine_cfg = cfg.with_k(k / substep_ratio)
            reference = evolve(field0, k, scheme, spec, fine_cfg)
        raw.append((k, l2_distance(one, reference)))
        iter_stats.append((k, max((tr.iterations_used for tr in traces), default=0)))
        floor = max(floor, _FLOOR_FACTOR * _EPS * l2_norm(reference))
    descriptor = f"one-step defect: {scheme.name}, N={n}, reference substep k/{substep_ratio}"
    return _make_report("local", raw, floor, descriptor, iter_stats)


def spatial_study(
    u0,
    spec: EquationSpec,
    scheme: CompositionScheme,
    k_small: float,
    n_list,
    T: float,
    *,
    n_ref: int | None = None,
    fp_tol: float = 1e-13,
    fp_max_iter: int = 100,
) -> StudyReport:
    """Error at t=T of each resolution against a much finer one at the same k."""
    ns = [int(v) for v in n_list]
    if len(ns) < 2:
        raise ValueError("insufficient points: a study needs at least 2 resolutions")
    if any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 1:
        raise ValueError("N_list must be strictly increasing positive integers")
    if n_ref is None:
        n_ref = 2 * max(ns)
    if max(ns) >= n_ref:
        raise ValueError(f"reference resolution {n_ref} must exceed max(N_list)={max(ns)}")
    cfg = StepperConfig(k=k_small, fp_tol=fp_tol, fp_max_iter=fp_max_iter, guard_mode="warn")
    with _study_point(f"reference N={n_ref}"):
        reference = evolve(as_field(u0, n_ref), T, scheme, spec, cfg)
    floor = _FLOOR_FACTOR * _EPS * l2_norm(reference)
    raw, iter_stats = [], []
    for n in ns:
        watcher = _IterationMax()
        with _study_point(f"N={n}"):
            state = evolve(as_field(u0, n), T, scheme, spec, cfg, observer=watcher)
        raw.append((float(n), l2_distance(state, reference)))
        iter_stats.append((float(n), watcher.max_iters))
    descriptor = f"spatial self-convergence: {scheme.name}, N_ref={n_ref}, k={k_small:g}, T={T:g}"
    return _make_report("spatial", raw, floor, descriptor, iter_stats)
