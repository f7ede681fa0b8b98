"""Run configuration: flat `section.key = value` text with env overrides.

Validation is whole-file: every problem is collected and reported together,
so a bad config never triggers any computation.  Environment variables named
KDVG_<SECTION>_<KEY> override file values.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .equations import EquationSpec
from .errors import ConfigError
from .field import SpectralField
from .stepping import GUARD_MODES, CompositionScheme, StepperConfig, scheme_by_name

ENV_PREFIX = "KDVG_"

SCHEME_NAMES = ("imr", "yoshida4", "yoshida6", "yoshida8")
INITIAL_KINDS = ("cosine", "gaussian_periodic", "modes")
STUDY_KINDS = ("temporal", "spatial", "local")


def _parse_int(text):
    return int(text)


def _parse_float(text):
    return float(text)


def _parse_str(text):
    return text


def _parse_float_list(text):
    return [float(item) for item in text.replace(",", " ").split()]


def _parse_int_list(text):
    return [int(item) for item in text.replace(",", " ").split()]


def _parse_modes(text):
    """Comma-separated `j=complex` entries, e.g. `1=0.5, 2=0.25+0.1j`."""
    modes = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        j_text, _, value_text = item.partition("=")
        j = int(j_text.strip())
        value = complex(value_text.strip().replace(" ", ""))
        if j in modes:
            raise ValueError(f"mode {j} given twice")
        modes[j] = value
    if not modes:
        raise ValueError("empty mode list")
    return modes


# key -> (parser, constraint description, constraint predicate)
_KEYS = {
    "equation.preset": (_parse_str, "must be 'kdv'", lambda v: v == "kdv"),
    "equation.delta": (_parse_float, "must be > 0", lambda v: v > 0),
    "equation.m": (_parse_int, "must be an integer >= 1", lambda v: v >= 1),
    "equation.gamma": (_parse_float, "must be >= 0", lambda v: v >= 0),
    "equation.r": (_parse_int, "must be an integer >= 0", lambda v: v >= 0),
    "equation.q": (_parse_int, "must be an integer >= 1", lambda v: v >= 1),
    "grid.N": (_parse_int, "must be an integer >= 1", lambda v: v >= 1),
    "time.k": (_parse_float, "must be > 0", lambda v: v > 0),
    "time.T": (_parse_float, "must be > 0", lambda v: v > 0),
    "scheme.name": (
        _parse_str,
        f"must be one of {', '.join(SCHEME_NAMES)}",
        lambda v: v in SCHEME_NAMES,
    ),
    "solver.fp_tol": (_parse_float, "must lie in (0, 1)", lambda v: 0 < v < 1),
    "solver.fp_max_iter": (_parse_int, "must be an integer >= 2", lambda v: v >= 2),
    "solver.c0": (_parse_float, "must be > 0", lambda v: v > 0),
    "solver.guard": (
        _parse_str,
        f"must be one of {', '.join(GUARD_MODES)}",
        lambda v: v in GUARD_MODES,
    ),
    "initial.kind": (
        _parse_str,
        f"must be one of {', '.join(INITIAL_KINDS)}",
        lambda v: v in INITIAL_KINDS,
    ),
    "initial.amplitude": (_parse_float, "must be finite", lambda v: np.isfinite(v)),
    "initial.wavenumber": (_parse_int, "must be an integer >= 1", lambda v: v >= 1),
    "initial.width": (_parse_float, "must be > 0", lambda v: v > 0),
    "initial.center": (_parse_float, "must be finite", lambda v: np.isfinite(v)),
    "initial.modes": (_parse_modes, "must be `j=complex` pairs", lambda v: True),
    "output.every": (_parse_int, "must be an integer >= 1", lambda v: v >= 1),
    "output.dir": (_parse_str, "must be nonempty", lambda v: bool(v)),
    "study.k_list": (
        _parse_float_list,
        "must be strictly decreasing positive floats",
        lambda v: len(v) >= 1 and all(x > 0 for x in v) and all(a > b for a, b in zip(v, v[1:])),
    ),
    "study.N_list": (
        _parse_int_list,
        "must be strictly increasing integers >= 1",
        lambda v: len(v) >= 1 and v[0] >= 1 and all(a < b for a, b in zip(v, v[1:])),
    ),
    "study.N_ref": (_parse_int, "must be an integer >= 2", lambda v: v >= 2),
    "study.order_min": (_parse_float, "must be finite", lambda v: np.isfinite(v)),
    "study.order_max": (_parse_float, "must be finite", lambda v: np.isfinite(v)),
}


@dataclass
class RunConfig:
    """Validated configuration for one run or study."""

    equation: EquationSpec
    n: int
    scheme_name: str
    k: float
    T: float
    fp_tol: float = 1e-13
    fp_max_iter: int = 100
    c0: float = 1.0
    guard: str = "warn"
    initial_kind: str = "cosine"
    initial_amplitude: float = 1.0
    initial_wavenumber: int = 1
    initial_width: float = 0.5
    initial_center: float = 0.0
    initial_modes: dict | None = None
    output_every: int = 1
    output_dir: str = "out"
    k_list: list = field(default_factory=list)
    n_list: list = field(default_factory=list)
    n_ref: int | None = None
    order_min: float | None = None
    order_max: float | None = None

    def scheme(self) -> CompositionScheme:
        return scheme_by_name(self.scheme_name)

    def stepper(self, k: float | None = None) -> StepperConfig:
        return StepperConfig(
            k=self.k if k is None else k,
            fp_tol=self.fp_tol,
            fp_max_iter=self.fp_max_iter,
            c0_estimate=self.c0,
            guard_mode=self.guard,
        )

    def initial_field(self, n: int | None = None) -> SpectralField:
        return build_initial(self, self.n if n is None else n)


def build_initial(cfg: RunConfig, n: int) -> SpectralField:
    """Exact degree-n projection of the configured initial data."""
    if cfg.initial_kind == "cosine":
        w = cfg.initial_wavenumber
        if w > n:
            return SpectralField.zeros(n)
        return SpectralField.from_modes(n, {w: 0.5 * cfg.initial_amplitude})
    if cfg.initial_kind == "gaussian_periodic":
        # Coefficients of the periodized Gaussian in closed form.
        sigma = cfg.initial_width
        j = np.arange(-n, n + 1, dtype=np.float64)
        mag = cfg.initial_amplitude * sigma / np.sqrt(2.0 * np.pi)
        coeffs = mag * np.exp(-0.5 * sigma**2 * j**2) * np.exp(-1j * j * cfg.initial_center)
        return SpectralField(coeffs)
    if cfg.initial_kind == "modes":
        if not cfg.initial_modes:
            raise ConfigError(["initial.modes: required when initial.kind = modes"])
        return SpectralField.from_modes(n, cfg.initial_modes)
    raise ConfigError([f"initial.kind: unknown kind {cfg.initial_kind!r}"])


def _read_pairs(text: str, problems: list) -> dict:
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        name = name.strip()
        value = value.strip()
        if not sep or not name:
            problems.append(f"line {lineno}: expected `section.key = value`, got {raw.strip()!r}")
            continue
        if name not in _KEYS:
            problems.append(f"line {lineno}: unknown key {name!r}")
            continue
        if name in pairs:
            problems.append(f"line {lineno}: duplicate key {name!r}")
            continue
        pairs[name] = value
    return pairs


_CANONICAL_KEY = {k.lower(): k for k in _KEYS}


def _env_overrides(environ) -> dict:
    overrides = {}
    for name, value in environ.items():
        if not name.startswith(ENV_PREFIX):
            continue
        rest = name[len(ENV_PREFIX) :].lower()
        section, _, key = rest.partition("_")
        flat = f"{section}.{key}"
        overrides[_CANONICAL_KEY.get(flat, flat)] = value
    return overrides


def parse_config(text: str, environ=None) -> RunConfig:
    """Parse and fully validate; raises ConfigError carrying every problem."""
    problems: list[str] = []
    pairs = _read_pairs(text, problems)

    env = _env_overrides(os.environ if environ is None else environ)
    for name, value in env.items():
        if name not in _KEYS:
            problems.append(f"environment override {ENV_PREFIX}...: unknown key {name!r}")
        else:
            pairs[name] = value

    values: dict = {}
    for name, raw in pairs.items():
        parser, description, predicate = _KEYS[name]
        try:
            value = parser(raw)
        except (ValueError, TypeError) as exc:
            problems.append(f"{name}: cannot parse {raw!r} ({exc})")
            continue
        if not predicate(value):
            problems.append(f"{name}: {description} (got {raw!r})")
            continue
        values[name] = value

    for required in ("grid.N", "time.k", "time.T", "scheme.name"):
        if required not in values and not any(p.startswith(required) for p in problems):
            problems.append(f"{required}: required key is missing")

    if values.get("initial.kind") == "modes" and "initial.modes" not in values:
        problems.append("initial.modes: required when initial.kind = modes")

    # the kdv preset is the default; explicit equation.* keys override it
    equation = None
    eq_params = {"delta": 1.0, "m": 1, "gamma": 0.0, "r": 0, "q": 1}
    eq_params.update(
        (key.split(".", 1)[1], values[key])
        for key in values
        if key.startswith("equation.") and key != "equation.preset"
    )
    try:
        equation = EquationSpec(**eq_params)
    except ValueError as exc:
        problems.append(f"equation.*: {exc}")

    if problems:
        raise ConfigError(problems)

    return RunConfig(
        equation=equation,
        n=values["grid.N"],
        scheme_name=values["scheme.name"],
        k=values["time.k"],
        T=values["time.T"],
        fp_tol=values.get("solver.fp_tol", 1e-13),
        fp_max_iter=values.get("solver.fp_max_iter", 100),
        c0=values.get("solver.c0", 1.0),
        guard=values.get("solver.guard", "warn"),
        initial_kind=values.get("initial.kind", "cosine"),
        initial_amplitude=values.get("initial.amplitude", 1.0),
        initial_wavenumber=values.get("initial.wavenumber", 1),
        initial_width=values.get("initial.width", 0.5),
        initial_center=values.get("initial.center", 0.0),
        initial_modes=values.get("initial.modes"),
        output_every=values.get("output.every", 1),
        output_dir=values.get("output.dir", "out"),
        k_list=values.get("study.k_list", []),
        n_list=values.get("study.N_list", []),
        n_ref=values.get("study.N_ref"),
        order_min=values.get("study.order_min"),
        order_max=values.get("study.order_max"),
    )
