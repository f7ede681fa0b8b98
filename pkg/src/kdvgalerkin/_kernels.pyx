# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: truncated-convolution products and the stage fixed point.

Same contract as ``_fallback``.  Products are computed as direct convolution
sums restricted to the retained modes, which is the same exact quantity the
fallback obtains by zero-padded FFT (both are alias-free).  Only modes j >= 0
are accumulated; the negative side is mirrored, so conjugate symmetry holds
exactly by construction.
"""

from libc.math cimport sqrt

import numpy as np

BACKEND_NAME = "compiled"

cdef double _EPS = 2.220446049250313e-16


cdef void _conv_into(const double complex[::1] a, int na,
                     const double complex[::1] b, int nb,
                     double complex[::1] out, int n_out) noexcept:
    """out[-n_out..n_out] = truncated convolution of a (degree na) and b (degree nb)."""
    cdef int j, p, plo, phi
    cdef double complex s
    for j in range(n_out + 1):
        plo = j - nb
        if plo < -na:
            plo = -na
        phi = j + nb
        if phi > na:
            phi = na
        s = 0
        for p in range(plo, phi + 1):
            s = s + a[p + na] * b[j - p + nb]
        out[j + n_out] = s
    out[n_out] = out[n_out].real
    for j in range(1, n_out + 1):
        out[n_out - j] = out[n_out + j].conjugate()


def product_truncated(a, b, int n_out):
    """Exact coefficients -n_out..n_out of the product of two fields."""
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef const double complex[::1] bv = np.ascontiguousarray(b, dtype=np.complex128)
    cdef int na = (av.shape[0] - 1) // 2
    cdef int nb = (bv.shape[0] - 1) // 2
    out = np.empty(2 * n_out + 1, dtype=np.complex128)
    cdef double complex[::1] ov = out
    _conv_into(av, na, bv, nb, ov, n_out)
    return out


cdef void _power_into(const double complex[::1] a, int na, int p,
                      double complex[::1] work1, double complex[::1] work2,
                      double complex[::1] out, int n_out) noexcept:
    """out = coefficients -n_out..n_out of a**p; work buffers hold intermediates.

    Intermediate powers keep their full degree (na*step) so the final
    truncation is the only one applied; that is what makes the result exact.
    """
    cdef int step, deg, newdeg, i
    if p == 1:
        for i in range(2 * n_out + 1):
            out[i] = 0
        deg = na if na < n_out else n_out
        for i in range(-deg, deg + 1):
            out[i + n_out] = a[i + na]
        return
    cdef double complex[::1] cur = work1
    cdef double complex[::1] nxt = work2
    cdef double complex[::1] tmp
    for i in range(2 * na + 1):
        cur[i] = a[i]
    deg = na
    for step in range(2, p + 1):
        if step < p:
            newdeg = na * step
            _conv_into(cur[: 2 * deg + 1], deg, a, na, nxt[: 2 * newdeg + 1], newdeg)
            tmp = cur
            cur = nxt
            nxt = tmp
            deg = newdeg
        else:
            _conv_into(cur[: 2 * deg + 1], deg, a, na, out, n_out)


def power_truncated(a, int p, int n_out):
    """Exact coefficients -n_out..n_out of the p-th power of a field."""
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef int na = (av.shape[0] - 1) // 2
    cdef int work_deg = na * (p - 1) if p > 1 else na
    w1 = np.empty(2 * work_deg + 1, dtype=np.complex128)
    w2 = np.empty(2 * work_deg + 1, dtype=np.complex128)
    out = np.empty(2 * n_out + 1, dtype=np.complex128)
    _power_into(av, na, p, w1, w2, out, n_out)
    return out


def stage_solve(y, lam, double bk, int q, double fp_tol, int max_iter, bint linearized):
    """Fixed-point solve for the stage midpoint; same contract as the fallback.

    Returns (z, iterations, final_relative_increment, gamma_estimate, converged).
    """
    cdef const double complex[::1] yv = np.ascontiguousarray(y, dtype=np.complex128)
    cdef const double complex[::1] lv = np.ascontiguousarray(lam, dtype=np.complex128)
    if yv.shape[0] != lv.shape[0]:
        raise ValueError("state and multiplier arrays must have equal length")
    cdef int n = (yv.shape[0] - 1) // 2
    cdef int size = 2 * n + 1
    cdef int p = q + 1
    cdef double half = 0.5 * bk
    cdef double inv_flux_scale = 1.0 / (q + 1.0)

    z_arr = np.array(y, dtype=np.complex128, copy=True)
    cdef double complex[::1] z = z_arr
    znew_arr = np.empty(size, dtype=np.complex128)
    cdef double complex[::1] znew = znew_arr
    flux = np.empty(size, dtype=np.complex128)
    cdef double complex[::1] fv = flux
    denom = np.empty(size, dtype=np.complex128)
    cdef double complex[::1] dv = denom
    cdef int work_deg = n * (p - 1) if p > 1 else n
    w1 = np.empty(2 * work_deg + 1, dtype=np.complex128)
    w2 = np.empty(2 * work_deg + 1, dtype=np.complex128)
    cdef double complex[::1] w1v = w1
    cdef double complex[::1] w2v = w2

    cdef int i, j, iters
    cdef double complex upd, dz
    cdef double d, znorm, floor, gamma, prev_d, final_rel
    cdef bint converged = False

    for i in range(size):
        dv[i] = 1.0 - half * lv[i]

    gamma = 0.0
    prev_d = -1.0
    d = 0.0
    znorm = 0.0
    iters = 0
    while iters < max_iter:
        iters += 1
        if not linearized:
            _power_into(z, n, p, w1v, w2v, fv, n)
        d = 0.0
        znorm = 0.0
        for j in range(n + 1):
            i = j + n
            if linearized:
                upd = yv[i] / dv[i]
            else:
                upd = (yv[i] - half * inv_flux_scale * (1j * j) * fv[i]) / dv[i]
            znew[i] = upd
            dz = upd - z[i]
            if j == 0:
                d += dz.real * dz.real + dz.imag * dz.imag
                znorm += upd.real * upd.real + upd.imag * upd.imag
            else:
                d += 2.0 * (dz.real * dz.real + dz.imag * dz.imag)
                znorm += 2.0 * (upd.real * upd.real + upd.imag * upd.imag)
        for j in range(1, n + 1):
            znew[n - j] = znew[n + j].conjugate()
        d = sqrt(d)
        znorm = sqrt(znorm)
        floor = 100.0 * _EPS * (znorm if znorm > 1e-300 else 1e-300)
        if prev_d > floor and d > floor:
            if d / prev_d > gamma:
                gamma = d / prev_d
        prev_d = d
        for i in range(size):
            z[i] = znew[i]
        if d <= fp_tol * znorm:
            converged = True
            break

    if znorm > 0.0:
        final_rel = d / znorm
    else:
        final_rel = 0.0 if d == 0.0 else float("inf")
    return z_arr, iters, final_rel, gamma, converged
