"""Pure-NumPy kernels: dealiased products by zero-padded FFT, stage fixed point.

This is the reference backend.  Products are computed on a grid padded far
enough that every retained coefficient of the truncated product is exact
(no aliasing), which makes the discrete operators identical to the Galerkin
ones.  The compiled backend in ``_kernels`` computes the same quantities by
direct truncated convolution; both must agree to rounding.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

_EPS = float(np.finfo(np.float64).eps)

# After a real-space multiply the synthesized factors must be real up to
# rounding; a larger imaginary residue means conjugate symmetry was broken.
_MULTIPLY_IMAG_TOL = 1e-10

_plan_cache: dict[tuple[int, int], tuple[int, np.ndarray, np.ndarray, np.ndarray]] = {}


def _next_fast_len(target: int) -> int:
    """Smallest 5-smooth integer >= target (friendly FFT length)."""
    if target <= 2:
        return max(target, 1)
    m = target
    while True:
        k = m
        for p in (2, 3, 5):
            while k % p == 0:
                k //= p
        if k == 1:
            return m
        m += 1


def _plan(n_out: int, deg_total: int):
    """Padded length and phase/index vectors for projecting modes -n_out..n_out.

    deg_total is the polynomial degree of the product being sampled; the padded
    length M satisfies M > n_out + deg_total so no alias lands on a kept mode.
    """
    key = (n_out, deg_total)
    plan = _plan_cache.get(key)
    if plan is None:
        m = _next_fast_len(n_out + deg_total + 1)
        j = np.arange(n_out + 1)
        sign_out = np.where(j % 2 == 0, 1.0, -1.0)
        plan = (m, sign_out)
        _plan_cache[key] = plan
    return plan


def _synth_real(c: np.ndarray, m: int) -> np.ndarray:
    """Values of the field with coefficients c (modes -n..n) on the m-point grid."""
    n = (c.size - 1) // 2
    spec = np.zeros(m, dtype=np.complex128)
    j = np.arange(-n, n + 1)
    spec[np.mod(j, m)] = c * np.where(j % 2 == 0, 1.0, -1.0)
    values = np.fft.ifft(spec) * m
    residue = np.max(np.abs(values.imag))
    if residue > _MULTIPLY_IMAG_TOL * (1.0 + np.max(np.abs(values.real))):
        raise AssertionError(
            f"imaginary residue {residue:.3e} in padded synthesis; symmetry bug upstream"
        )
    return values.real


def _project(values: np.ndarray, n_out: int, sign_out: np.ndarray) -> np.ndarray:
    half = np.fft.rfft(values) / values.size
    pos = half[: n_out + 1] * sign_out
    out = np.empty(2 * n_out + 1, dtype=np.complex128)
    out[n_out:] = pos
    out[:n_out] = np.conj(pos[1:][::-1])
    return out


def product_truncated(a: np.ndarray, b: np.ndarray, n_out: int) -> np.ndarray:
    """Exact coefficients -n_out..n_out of the product of two fields."""
    na = (a.size - 1) // 2
    nb = (b.size - 1) // 2
    m, sign_out = _plan(n_out, na + nb)
    return _project(_synth_real(a, m) * _synth_real(b, m), n_out, sign_out)


def power_truncated(a: np.ndarray, p: int, n_out: int) -> np.ndarray:
    """Exact coefficients -n_out..n_out of the p-th power of a field."""
    if p == 1 and n_out == (a.size - 1) // 2:
        return a.copy()
    na = (a.size - 1) // 2
    m, sign_out = _plan(n_out, p * na)
    return _project(_synth_real(a, m) ** p, n_out, sign_out)


def stage_solve(
    y: np.ndarray,
    lam: np.ndarray,
    bk: float,
    q: int,
    fp_tol: float,
    max_iter: int,
    linearized: bool,
):
    """Fixed-point solve for the stage midpoint Z of one midpoint-rule substep.

    Iterates, in coefficient space,
        Z_{new,j} = (y_j - (bk/2) * (1j*j) * flux_j(Z)) / (1 - (bk/2) * lam_j)
    with flux(Z) the projected nonlinearity Z**(q+1)/(q+1), starting from
    Z = y, until the relative L2 increment drops below fp_tol.

    Returns (z, iterations, final_relative_increment, gamma_estimate, converged).
    """
    n = (y.size - 1) // 2
    j = np.arange(-n, n + 1, dtype=np.float64)
    deriv = 1j * j
    half = 0.5 * bk
    denom = 1.0 - half * lam
    inv_flux_scale = 1.0 / float(q + 1)

    z = y.copy()
    gamma = 0.0
    prev_d = -1.0
    d = 0.0
    znorm = float(np.linalg.norm(y))
    converged = False
    iters = 0
    for iters in range(1, max_iter + 1):
        if linearized:
            znew = y / denom
        else:
            flux = power_truncated(z, q + 1, n) * inv_flux_scale
            znew = (y - half * deriv * flux) / denom
        d = float(np.linalg.norm(znew - z))
        znorm = float(np.linalg.norm(znew))
        floor = 100.0 * _EPS * max(znorm, 1e-300)
        if prev_d > floor and d > floor:
            gamma = max(gamma, d / prev_d)
        prev_d = d
        z = znew
        if d <= fp_tol * znorm:
            converged = True
            break
    final_rel = d / znorm if znorm > 0.0 else (0.0 if d == 0.0 else float("inf"))
    return z, iters, final_rel, gamma, converged
