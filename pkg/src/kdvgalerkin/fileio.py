"""Line-oriented text formats and atomic file writes.

Everything emitted is plain text meant for diff-based regression: a snapshot
of grid samples, a spectrum dump, one diagnostic record per observation, and
study tables.  Floats are printed with 17 significant digits so files
round-trip exactly.
"""

from __future__ import annotations

import os
import tempfile

import numpy as np

from .field import GridSampling, SpectralField, synthesize


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".txt")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def snapshot_text(field: SpectralField, t: float, m: int) -> str:
    samples = synthesize(field, m)
    lines = [f"N={field.N} M={m} t={fmt(t)}"]
    for x, v in zip(samples.x, samples.values):
        lines.append(f"{fmt(x)} {fmt(v)}")
    return "\n".join(lines) + "\n"


def read_snapshot(path):
    """Parse a snapshot file; returns (N, t, GridSampling)."""
    with open(path) as handle:
        header = handle.readline().strip()
        fields = dict(item.split("=", 1) for item in header.split())
        n = int(fields["N"])
        m = int(fields["M"])
        t = float(fields["t"])
        values = np.empty(m, dtype=np.float64)
        for i in range(m):
            line = handle.readline()
            if not line:
                raise ValueError(f"snapshot truncated: expected {m} samples, got {i}")
            values[i] = float(line.split()[1])
    return n, t, GridSampling(values)


def spectrum_text(field: SpectralField) -> str:
    n = field.N
    lines = []
    for j in range(-n, n + 1):
        c = field.coeffs[n + j]
        lines.append(f"{j} {fmt(c.real)} {fmt(c.imag)}")
    return "\n".join(lines) + "\n"


def diagnostic_record(n, t, l2, inv, stage_iters_max, gamma_max) -> str:
    """One observation as a key=value line; i3 is 'na' when not applicable."""
    i3 = "na" if inv.i3 is None else fmt(inv.i3)
    return (
        f"n={n} t={fmt(t)} l2={fmt(l2)} i1={fmt(inv.i1)} i2={fmt(inv.i2)} i3={i3} "
        f"stage_iters_max={stage_iters_max} gamma_max={fmt(gamma_max)}"
    )


def parse_record(line: str) -> dict:
    out = {}
    for item in line.split():
        key, value = item.split("=", 1)
        out[key] = value
    return out


def study_table_text(report) -> str:
    """Human-readable study table: `param error` rows plus a summary line."""
    lines = [f"{fmt(p)} {fmt(e)}" for p, e in report.points]
    lines.append(f"order={fmt(report.estimated_order)} points_used={report.points_used}")
    return "\n".join(lines) + "\n"


def study_records_text(report) -> str:
    """Machine-readable copy: one diagnostic-style record per study point."""
    lines = [
        f"kind={report.study_kind} reference={report.reference_descriptor!r} "
        f"order={fmt(report.estimated_order)} points_used={report.points_used} "
        f"degenerate={int(report.degenerate)} floor_limited={int(report.floor_limited)}"
    ]
    for p, e in report.points:
        lines.append(f"param={fmt(p)} error={fmt(e)} status=fitted")
    for p, e, reason in report.excluded:
        lines.append(f"param={fmt(p)} error={fmt(e)} status=excluded reason={reason}")
    return "\n".join(lines) + "\n"
