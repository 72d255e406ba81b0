# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: minimal-output-entropy scans for qubit and qutrit
channels.  Mirrors :mod:`davieskit.kernels.reference` (grid scan + local
refinement, base-2 entropy, ties toward smaller parameters)."""
import numpy as np

from libc.math cimport acos, cos, fabs, log2, sqrt

cdef double INVPHI = (sqrt(5.0) - 1.0) / 2.0
cdef double TWO_PI_3 = 2.0943951023931953  # 2*pi/3


cdef inline double _h(double x) noexcept nogil:
    if x <= 0.0:
        return 0.0
    if x > 1.0:
        x = 1.0
    return -x * log2(x)


cdef double _qubit_entropy(double complex[:, :] phi, double mu) noexcept nogil:
    cdef double t = mu * (1.0 - mu)
    cdef double nu = sqrt(t) if t > 0.0 else 0.0
    cdef double complex v0 = mu, v1 = nu, v2 = nu, v3 = 1.0 - mu
    cdef double complex o0, o1, o2, o3, off
    o0 = phi[0, 0] * v0 + phi[0, 1] * v1 + phi[0, 2] * v2 + phi[0, 3] * v3
    o1 = phi[1, 0] * v0 + phi[1, 1] * v1 + phi[1, 2] * v2 + phi[1, 3] * v3
    o2 = phi[2, 0] * v0 + phi[2, 1] * v1 + phi[2, 2] * v2 + phi[2, 3] * v3
    o3 = phi[3, 0] * v0 + phi[3, 1] * v1 + phi[3, 2] * v2 + phi[3, 3] * v3
    cdef double d1 = o0.real
    cdef double d2 = o3.real
    off = (o1 + o2.conjugate()) / 2.0
    cdef double disc = sqrt(
        (d1 - d2) * (d1 - d2) + 4.0 * (off.real * off.real + off.imag * off.imag)
    )
    cdef double tr = d1 + d2
    return _h((tr + disc) / 2.0) + _h((tr - disc) / 2.0)


cdef void _eig3_herm(
    double a, double b, double c,
    double complex f, double complex g, double complex h,
    double* e0, double* e1, double* e2,
) noexcept nogil:
    # Hermitian [[a, f, g], [f*, b, h], [g*, h*, c]]: trigonometric closed form.
    cdef double p1 = (
        f.real * f.real + f.imag * f.imag
        + g.real * g.real + g.imag * g.imag
        + h.real * h.real + h.imag * h.imag
    )
    cdef double q = (a + b + c) / 3.0
    cdef double p2 = (a - q) * (a - q) + (b - q) * (b - q) + (c - q) * (c - q) + 2.0 * p1
    if p2 <= 1e-300:
        e0[0] = q; e1[0] = q; e2[0] = q
        return
    cdef double p = sqrt(p2 / 6.0)
    cdef double ba = (a - q) / p
    cdef double bb = (b - q) / p
    cdef double bc = (c - q) / p
    cdef double complex bf = f / p
    cdef double complex bg = g / p
    cdef double complex bh = h / p
    cdef double complex det = (
        ba * (bb * bc - bh * bh.conjugate())
        - bf * (bf.conjugate() * bc - bh * bg.conjugate())
        + bg * (bf.conjugate() * bh.conjugate() - bb * bg.conjugate())
    )
    cdef double r = det.real / 2.0
    if r < -1.0:
        r = -1.0
    if r > 1.0:
        r = 1.0
    cdef double ang = acos(r) / 3.0
    cdef double x0 = q + 2.0 * p * cos(ang)
    cdef double x2 = q + 2.0 * p * cos(ang + TWO_PI_3)
    e0[0] = x0
    e1[0] = 3.0 * q - x0 - x2
    e2[0] = x2


cdef double _qutrit_entropy(double complex[:, :] phi, double q1, double q2) noexcept nogil:
    cdef double q3 = 1.0 - q1 - q2
    if q3 < 0.0:
        q3 = 0.0
    cdef double s0 = sqrt(q1) if q1 > 0.0 else 0.0
    cdef double s1 = sqrt(q2) if q2 > 0.0 else 0.0
    cdef double s2 = sqrt(q3)
    cdef double v[9]
    v[0] = s0 * s0; v[1] = s0 * s1; v[2] = s0 * s2
    v[3] = s1 * s0; v[4] = s1 * s1; v[5] = s1 * s2
    v[6] = s2 * s0; v[7] = s2 * s1; v[8] = s2 * s2
    cdef double complex out[9]
    cdef int k, l
    for k in range(9):
        out[k] = 0.0
        for l in range(9):
            out[k] = out[k] + phi[k, l] * v[l]
    cdef double complex h01 = (out[1] + out[3].conjugate()) / 2.0
    cdef double complex h02 = (out[2] + out[6].conjugate()) / 2.0
    cdef double complex h12 = (out[5] + out[7].conjugate()) / 2.0
    cdef double e0 = 0.0, e1 = 0.0, e2 = 0.0
    _eig3_herm(out[0].real, out[4].real, out[8].real, h01, h02, h12, &e0, &e1, &e2)
    return _h(e0) + _h(e1) + _h(e2)


def qubit_min_entropy(phi, int n_grid=2048, double refine_tol=1e-10):
    """Grid + golden-section scan; see the reference backend for the contract."""
    cdef double complex[:, :] m = np.ascontiguousarray(phi, dtype=complex)
    cdef int k
    cdef double step = 1.0 / (n_grid - 1)
    cdef double mu, val, prev = 0.0, lipschitz = 0.0
    cdef double best_mu = 0.0, best_val = 1e308
    cdef long evals = 0
    for k in range(n_grid):
        mu = k * step
        val = _qubit_entropy(m, mu)
        evals += 1
        if val < best_val:
            best_val = val
            best_mu = mu
        if k > 0 and fabs(val - prev) > lipschitz:
            lipschitz = fabs(val - prev)
        prev = val
    lipschitz *= (n_grid - 1)

    cdef double lo = best_mu - step
    cdef double hi = best_mu + step
    if lo < 0.0:
        lo = 0.0
    if hi > 1.0:
        hi = 1.0
    cdef double x1 = hi - INVPHI * (hi - lo)
    cdef double x2 = lo + INVPHI * (hi - lo)
    cdef double f1 = _qubit_entropy(m, x1)
    cdef double f2 = _qubit_entropy(m, x2)
    evals += 2
    if f1 < best_val:
        best_val = f1; best_mu = x1
    if f2 < best_val:
        best_val = f2; best_mu = x2
    while hi - lo > refine_tol:
        if f1 <= f2:
            hi = x2; x2 = x1; f2 = f1
            x1 = hi - INVPHI * (hi - lo)
            f1 = _qubit_entropy(m, x1)
            evals += 1
            if f1 < best_val:
                best_val = f1; best_mu = x1
        else:
            lo = x1; x1 = x2; f1 = f2
            x2 = lo + INVPHI * (hi - lo)
            f2 = _qubit_entropy(m, x2)
            evals += 1
            if f2 < best_val:
                best_val = f2; best_mu = x2
    return best_mu, best_val, evals, lipschitz, hi - lo


def qutrit_min_entropy(phi, int n_grid=200, double refine_tol=1e-9):
    """Triangular grid + shrinking pattern search; see the reference backend."""
    cdef double complex[:, :] m = np.ascontiguousarray(phi, dtype=complex)
    cdef int i, j
    cdef double step = 1.0 / (n_grid - 1)
    cdef double q1, q2, val, prev = 0.0, lipschitz = 0.0
    cdef double best_q1 = 0.0, best_q2 = 0.0, best_val = 1e308
    cdef long evals = 0
    for i in range(n_grid):
        q1 = i * step
        for j in range(n_grid - i):
            q2 = j * step
            val = _qutrit_entropy(m, q1, q2)
            evals += 1
            if val < best_val:
                best_val = val
                best_q1 = q1
                best_q2 = q2
            if j > 0 and fabs(val - prev) > lipschitz:
                lipschitz = fabs(val - prev)
            prev = val
    lipschitz /= step

    cdef double h = step
    cdef double n1, n2, f
    cdef double cx, cy, cv
    cdef int dx, dy
    cdef bint moved
    while h > refine_tol:
        cx = best_q1; cy = best_q2; cv = best_val
        moved = False
        for dx in range(-1, 2):
            for dy in range(-1, 2):
                if dx == 0 and dy == 0:
                    continue
                n1 = cx + dx * h
                n2 = cy + dy * h
                if n1 < 0.0 or n2 < 0.0 or n1 + n2 > 1.0:
                    continue
                f = _qutrit_entropy(m, n1, n2)
                evals += 1
                if f < best_val:
                    best_q1 = n1; best_q2 = n2; best_val = f
                    moved = True
        if not moved:
            h /= 2.0
    return best_q1, best_q2, best_val, evals, lipschitz, h * 2.0
