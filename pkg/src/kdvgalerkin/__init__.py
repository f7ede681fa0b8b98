"""Conservative Fourier-Galerkin solver for KdV-type dispersive equations.

Space: trigonometric polynomials with exact (dealiased) Galerkin products.
Time: symmetric composition of implicit-midpoint substeps (orders 2-8) with
a diagonal fixed-point stage solver.  A study harness measures convergence
orders and invariant drift.
"""

from ._backend import BACKEND_NAME, HAVE_COMPILED
from .equations import EquationSpec, LinearMultipliers, apply_F, linear_multipliers, nonlinear_flux
from .errors import ConfigError, GridResolutionError, GuardViolationError, StageDivergenceError
from .field import (
    GridSampling,
    SpectralField,
    differentiate,
    inner_product,
    l2_norm,
    project,
    synthesize,
)
from .invariants import DriftReport, DriftTracker, InvariantTriple, invariants, l2_distance
from .products import galerkin_power, galerkin_product
from .stepping import (
    CompositionScheme,
    StageTrace,
    StepperConfig,
    evolve,
    imr_substage,
    scheme_by_name,
    scheme_imr,
    scheme_yoshida,
    stability_guard,
    step,
    sup_norm_estimate,
)
from .studies import (
    StudyReport,
    estimate_order,
    local_error_study,
    spatial_study,
    temporal_study,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "HAVE_COMPILED",
    "CompositionScheme",
    "ConfigError",
    "DriftReport",
    "DriftTracker",
    "EquationSpec",
    "GridResolutionError",
    "GridSampling",
    "GuardViolationError",
    "InvariantTriple",
    "LinearMultipliers",
    "SpectralField",
    "StageDivergenceError",
    "StageTrace",
    "StepperConfig",
    "StudyReport",
    "apply_F",
    "differentiate",
    "estimate_order",
    "evolve",
    "galerkin_power",
    "galerkin_product",
    "imr_substage",
    "inner_product",
    "invariants",
    "l2_distance",
    "l2_norm",
    "linear_multipliers",
    "local_error_study",
    "nonlinear_flux",
    "project",
    "scheme_by_name",
    "scheme_imr",
    "scheme_yoshida",
    "spatial_study",
    "stability_guard",
    "step",
    "sup_norm_estimate",
    "synthesize",
    "temporal_study",
]
