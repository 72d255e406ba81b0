"""Pure-numpy fallback for the hot minimal-output-entropy kernels.

Same contract as the compiled backend (``_native``): a deterministic coarse
scan over pure inputs followed by local refinement, minimizing the base-2
output entropy.  Ties break toward the smaller parameter (first grid hit;
refinement replaces only on strict improvement).
"""
from __future__ import annotations

import math

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _entropy_bits(eigs: np.ndarray) -> np.ndarray:
    x = np.clip(eigs, 0.0, 1.0)
    terms = np.where(x > 0.0, -x * np.log2(np.maximum(x, 1e-300)), 0.0)
    return terms.sum(axis=-1)


def _qubit_entropy(phi: np.ndarray, mu: float) -> float:
    nu = math.sqrt(max(0.0, mu * (1.0 - mu)))
    vec = np.array([mu, nu, nu, 1.0 - mu], dtype=complex)
    out = phi @ vec
    d1, d2 = out[0].real, out[3].real
    off = (out[1] + np.conj(out[2])) / 2.0
    disc = math.sqrt((d1 - d2) ** 2 + 4.0 * abs(off) ** 2)
    tr = d1 + d2
    return float(_entropy_bits(np.array([(tr + disc) / 2.0, (tr - disc) / 2.0])))


def qubit_min_entropy(phi, n_grid: int = 2048, refine_tol: float = 1e-10):
    """Minimize output entropy over pure states with nonnegative real
    entries, parametrized by the upper-level weight ``mu``.

    Returns ``(mu, value_bits, evaluations, lipschitz, bracket)`` where
    ``lipschitz`` is the largest grid-slope of the entropy and ``bracket``
    the final search-interval width (their product bounds the remaining
    error for a minimizer inside the bracket).
    """
    phi = np.asarray(phi, dtype=complex)
    mus = np.linspace(0.0, 1.0, n_grid)
    nus = np.sqrt(mus * (1.0 - mus))
    vecs = np.stack([mus, nus, nus, 1.0 - mus], axis=1).astype(complex)
    outs = vecs @ phi.T
    d1 = outs[:, 0].real
    d2 = outs[:, 3].real
    off = (outs[:, 1] + np.conj(outs[:, 2])) / 2.0
    disc = np.sqrt((d1 - d2) ** 2 + 4.0 * np.abs(off) ** 2)
    tr = d1 + d2
    values = _entropy_bits(np.stack([(tr + disc) / 2.0, (tr - disc) / 2.0], axis=1))
    k = int(np.argmin(values))
    evals = n_grid
    lipschitz = float(np.max(np.abs(np.diff(values))) * (n_grid - 1))
    best_mu, best_val = float(mus[k]), float(values[k])

    lo = float(mus[max(k - 1, 0)])
    hi = float(mus[min(k + 1, n_grid - 1)])
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = _qubit_entropy(phi, x1)
    f2 = _qubit_entropy(phi, x2)
    evals += 2
    for x, f in ((x1, f1), (x2, f2)):
        if f < best_val:
            best_mu, best_val = x, f
    while hi - lo > refine_tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = _qubit_entropy(phi, x1)
            evals += 1
            if f1 < best_val:
                best_mu, best_val = x1, f1
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = _qubit_entropy(phi, x2)
            evals += 1
            if f2 < best_val:
                best_mu, best_val = x2, f2
    return best_mu, best_val, evals, lipschitz, hi - lo


def _qutrit_entropy(phi: np.ndarray, q1: float, q2: float) -> float:
    q3 = max(0.0, 1.0 - q1 - q2)
    psi = np.sqrt(np.array([max(q1, 0.0), max(q2, 0.0), q3]))
    vec = np.outer(psi, psi).reshape(-1).astype(complex)
    out = (phi @ vec).reshape(3, 3)
    h = (out + out.conj().T) / 2.0
    return float(_entropy_bits(np.linalg.eigvalsh(h)))


def qutrit_min_entropy(phi, n_grid: int = 200, refine_tol: float = 1e-9):
    """Minimize output entropy over pure states with nonnegative real
    amplitudes ``(sqrt(q1), sqrt(q2), sqrt(q3))`` on the probability simplex.

    Coarse triangular scan at resolution ``n_grid`` per axis, then a
    shrinking 8-neighbour pattern search on ``(q1, q2)``.  Returns
    ``(q1, q2, value_bits, evaluations, lipschitz, step)``.
    """
    phi = np.asarray(phi, dtype=complex)
    step = 1.0 / (n_grid - 1)
    q1_list, q2_list = [], []
    row_starts = []
    for i in range(n_grid):
        row_starts.append(len(q1_list))
        q1 = i * step
        for j in range(n_grid - i):
            q1_list.append(q1)
            q2_list.append(j * step)
    q1s = np.array(q1_list)
    q2s = np.array(q2_list)
    q3s = np.maximum(0.0, 1.0 - q1s - q2s)
    psis = np.sqrt(np.stack([q1s, q2s, q3s], axis=1))
    vecs = np.einsum("ki,kj->kij", psis, psis).reshape(-1, 9).astype(complex)
    outs = (vecs @ phi.T).reshape(-1, 3, 3)
    herm = (outs + np.conj(np.swapaxes(outs, 1, 2))) / 2.0
    values = _entropy_bits(np.linalg.eigvalsh(herm))
    k = int(np.argmin(values))
    evals = len(values)
    diffs = []
    for i in range(n_grid):
        start = row_starts[i]
        width = n_grid - i
        if width > 1:
            seg = values[start : start + width]
            diffs.append(np.max(np.abs(np.diff(seg))))
    lipschitz = float(max(diffs) / step) if diffs else 0.0

    best = (float(q1s[k]), float(q2s[k]), float(values[k]))
    h = step
    while h > refine_tol:
        q1, q2, val = best
        moved = False
        for dx in (-h, 0.0, h):
            for dy in (-h, 0.0, h):
                if dx == 0.0 and dy == 0.0:
                    continue
                n1, n2 = q1 + dx, q2 + dy
                if n1 < 0.0 or n2 < 0.0 or n1 + n2 > 1.0:
                    continue
                f = _qutrit_entropy(phi, n1, n2)
                evals += 1
                if f < val:
                    best = (n1, n2, f)
                    val = f
                    moved = True
        if not moved:
            h /= 2.0
    return best[0], best[1], best[2], evals, lipschitz, h * 2.0
