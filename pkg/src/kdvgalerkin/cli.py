"""Command-line entry point.

Subcommands: `run <config>`, `study temporal|spatial|local <config>`,
`invariants <snapshot>`.  Exit codes: 0 success, 1 config error,
2 acceptance violation, 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

from .config import STUDY_KINDS, parse_config
from .errors import ConfigError, GuardViolationError, StageDivergenceError
from .field import l2_norm, project
from .fileio import (
    atomic_write_text,
    diagnostic_record,
    fmt,
    read_snapshot,
    snapshot_text,
    spectrum_text,
    study_records_text,
    study_table_text,
)
from .invariants import invariants
from .stepping import evolve
from .studies import local_error_study, spatial_study, temporal_study

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ACCEPTANCE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _load_config(path):
    try:
        with open(path) as handle:
            text = handle.read()
    except OSError as exc:
        print(f"error: cannot read config {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO) from None
    try:
        return parse_config(text)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG) from None


def _write_outputs(out_dir, files):
    try:
        os.makedirs(out_dir, exist_ok=True)
        for name, text in files.items():
            atomic_write_text(os.path.join(out_dir, name), text)
    except OSError as exc:
        print(f"error: cannot write {out_dir}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO) from None


def cmd_run(cfg) -> int:
    scheme = cfg.scheme()
    stepper = cfg.stepper()
    u0 = cfg.initial_field()
    records = []

    def observer(n, t, state, traces):
        iters = max((tr.iterations_used for tr in traces), default=0)
        gamma = max((tr.gamma_estimate for tr in traces), default=0.0)
        records.append(
            diagnostic_record(n, t, l2_norm(state), invariants(state, cfg.equation), iters, gamma)
        )

    try:
        final = evolve(
            u0, cfg.T, scheme, cfg.equation, stepper,
            observer=observer, observe_every=cfg.output_every,
        )
    except (StageDivergenceError, GuardViolationError) as exc:
        step_index = getattr(exc, "step_index", None)
        print(f"numerical failure at step {step_index}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    _write_outputs(
        cfg.output_dir,
        {
            "diagnostics.txt": "\n".join(records) + "\n",
            "final_snapshot.txt": snapshot_text(final, cfg.T, 4 * final.N),
            "final_spectrum.txt": spectrum_text(final),
        },
    )
    return EXIT_OK


def cmd_study(cfg, kind: str) -> int:
    scheme = cfg.scheme()
    try:
        if kind == "temporal":
            if not cfg.k_list:
                print("config error: study.k_list: required for a temporal study", file=sys.stderr)
                return EXIT_CONFIG
            report = temporal_study(
                cfg.initial_field(), cfg.equation, scheme, cfg.n, cfg.T, cfg.k_list,
                fp_tol=cfg.fp_tol, fp_max_iter=cfg.fp_max_iter, guard_mode=cfg.guard,
            )
        elif kind == "local":
            if not cfg.k_list:
                print("config error: study.k_list: required for a local study", file=sys.stderr)
                return EXIT_CONFIG
            report = local_error_study(
                cfg.initial_field(), cfg.equation, scheme, cfg.n, cfg.k_list,
                fp_tol=cfg.fp_tol, fp_max_iter=cfg.fp_max_iter,
            )
        else:
            if not cfg.n_list:
                print("config error: study.N_list: required for a spatial study", file=sys.stderr)
                return EXIT_CONFIG
            n_ref = cfg.n_ref if cfg.n_ref is not None else 2 * max(cfg.n_list)
            # Initial data built at the reference degree; truncation to each
            # study degree is the exact projection for every configured kind.
            report = spatial_study(
                cfg.initial_field(n=n_ref), cfg.equation, scheme, cfg.k,
                cfg.n_list, cfg.T, n_ref=n_ref,
                fp_tol=cfg.fp_tol, fp_max_iter=cfg.fp_max_iter,
            )
    except (StageDivergenceError, GuardViolationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    _write_outputs(
        cfg.output_dir,
        {
            f"study_{kind}.txt": study_table_text(report),
            f"study_{kind}_records.txt": study_records_text(report),
        },
    )
    order = report.estimated_order
    print(f"{kind} study: order={fmt(order) if not math.isnan(order) else 'nan'} "
          f"points_used={report.points_used}")
    violations = []
    if cfg.order_min is not None and not order >= cfg.order_min:
        violations.append(f"fitted order {order:.4g} below order_min {cfg.order_min:g}")
    if cfg.order_max is not None and not order <= cfg.order_max:
        violations.append(f"fitted order {order:.4g} above order_max {cfg.order_max:g}")
    if violations:
        for v in violations:
            print(f"acceptance violation: {v}", file=sys.stderr)
        return EXIT_ACCEPTANCE
    return EXIT_OK


def cmd_invariants(path) -> int:
    try:
        n, t, samples = read_snapshot(path)
        field = project(samples, n)
    except OSError as exc:
        print(f"error: cannot read snapshot {path}: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError, IndexError) as exc:
        print(f"error: malformed snapshot {path}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    inv = invariants(field)
    print(
        f"t={fmt(t)} l2={fmt(l2_norm(field))} i1={fmt(inv.i1)} i2={fmt(inv.i2)} "
        f"i3={fmt(inv.i3)}"
    )
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="kdvg",
        description="Conservative Fourier-Galerkin solver for KdV-type equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="time-march a configured problem")
    p_run.add_argument("config")

    p_study = sub.add_parser("study", help="run a convergence study")
    p_study.add_argument("kind", choices=STUDY_KINDS)
    p_study.add_argument("config")

    p_inv = sub.add_parser("invariants", help="conserved integrals of a snapshot file")
    p_inv.add_argument("snapshot")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; here 2 means an acceptance
        # violation, so report bad invocations as config errors instead
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")

    try:
        if args.command == "run":
            return cmd_run(_load_config(args.config))
        if args.command == "study":
            return cmd_study(_load_config(args.config), args.kind)
        return cmd_invariants(args.snapshot)
    except SystemExit as exc:  # config/O errors surfaced by helpers
        return int(exc.code)


if __name__ == "__main__":
    sys.exit(main())
