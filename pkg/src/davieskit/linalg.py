"""Dense complex linear-algebra kernels with explicit accuracy contracts.

Everything here operates on small (2x2 ... 9x9) dense matrices, so the
implementations favour transparency over asymptotics: the matrix
exponential is plain scaling-and-squaring with a truncated series, and
functions of a 3x3 matrix use the closed-form quadratic interpolation

    g(X) = g0*I + g1*X + g2*X^2,

whose coefficients depend only on the (distinct) eigenvalues of X.

All tolerances are keyword parameters with the documented defaults, so
boundary-of-region studies can tighten or relax them per call.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    FunctionUndefined,
    InvalidProjector,
    NonHermitianInput,
)

__all__ = [
    "eig_hermitian",
    "expm",
    "func_of_3x3",
    "psd_on_subspace",
    "subspace_min_eig",
    "eigenvalues_sorted",
    "real_log",
]


def _as_square(m, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DimensionMismatch(f"{name} has non-finite entries")
    return m


def eig_hermitian(m, tol_herm: float = 1e-12):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, V)`` with eigenvalues ``w`` real and sorted in descending
    order and the columns of ``V`` the matching orthonormal eigenvectors,
    so that ``m = V @ diag(w) @ V.conj().T`` to ~1e-12 relative.

    Raises :class:`NonHermitianInput` when the Hermiticity defect exceeds
    ``tol_herm * max(1, ||m||_F)``.
    """
    m = _as_square(m)
    scale = max(1.0, float(np.linalg.norm(m)))
    defect = float(np.linalg.norm(m - m.conj().T))
    if defect > tol_herm * scale:
        raise NonHermitianInput(
            f"hermiticity defect {defect:.3e} exceeds {tol_herm:.1e} * {scale:.3e}"
        )
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    return w[::-1].copy(), v[:, ::-1].copy()


def expm(m, t: float = 1.0) -> np.ndarray:
    """Matrix exponential ``exp(t*m)`` by scaling and squaring.

    The scaled matrix ``t*m / 2**s`` is kept below norm 1/2, the series is
    summed until terms vanish at machine precision, and the result is
    squared ``s`` times.  ``expm(m, 0)`` is exactly the identity.
    """
    m = _as_square(m)
    if not np.isfinite(t):
        raise DimensionMismatch("time parameter must be finite")
    n = m.shape[0]
    b = m * t
    norm = float(np.linalg.norm(b))
    s = 0
    if norm > 0.5:
        s = int(np.ceil(np.log2(norm / 0.5)))
    c = b / (2.0**s)
    acc = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 64):
        term = term @ c / k
        tnorm = float(np.linalg.norm(term))
        if tnorm == 0.0:
            break
        acc = acc + term
        if tnorm <= 1e-18 * float(np.linalg.norm(acc)):
            break
    for _ in range(s):
        acc = acc @ acc
    if np.max(np.abs(m.imag)) == 0.0 and np.max(np.abs(acc.imag)) <= 1e-14 * max(
        1.0, float(np.linalg.norm(acc))
    ):
        return acc.real.astype(float)
    return acc


def eigenvalues_sorted(m) -> np.ndarray:
    """Eigenvalues sorted by descending real part, ties by descending imag."""
    xi = np.linalg.eigvals(_as_square(m))
    order = np.lexsort((-xi.imag, -xi.real))
    return xi[order]


def real_log(z: complex) -> complex:
    """Principal log restricted to arguments off the closed negative real axis.

    Raises :class:`FunctionUndefined` for (numerically) real ``z <= 0``; used
    when the result must stay real, e.g. logarithms of stochastic matrices.
    """
    z = complex(z)
    if abs(z.imag) <= 1e-14 * max(1.0, abs(z)) and z.real <= 0.0:
        raise FunctionUndefined(f"real log undefined at {z}")
    return complex(np.log(z))


def func_of_3x3(m, g: Callable[[complex], complex], gap_tol: float = 1e-8) -> np.ndarray:
    """Apply a scalar function to a diagonalizable 3x3 matrix in closed form.

    Requires pairwise-distinct eigenvalues: the minimum gap must be at least
    ``gap_tol * max(1, ||m||_F)``, otherwise :class:`DegenerateSpectrum` is
    raised and the caller should fall back to an eigendecomposition route.
    :class:`FunctionUndefined` propagates from ``g`` or is raised when ``g``
    returns a non-finite value at an eigenvalue.

    Imaginary parts below ``1e-10 * ||result||`` of a logically real result
    (real input, real function values) are dropped.
    """
    m = _as_square(m)
    if m.shape != (3, 3):
        raise DimensionMismatch(f"expected a 3x3 matrix, got {m.shape}")
    x1, x2, x3 = eigenvalues_sorted(m)
    scale = max(1.0, float(np.linalg.norm(m)))
    gap = min(abs(x1 - x2), abs(x2 - x3), abs(x1 - x3))
    if gap < gap_tol * scale:
        raise DegenerateSpectrum(
            f"eigenvalue gap {gap:.3e} below {gap_tol:.1e} * {scale:.3e}"
        )
    vals = []
    with np.errstate(divide="ignore", invalid="ignore"):
        for xi in (x1, x2, x3):
            v = complex(g(xi))
            if not (np.isfinite(v.real) and np.isfinite(v.imag)):
                raise FunctionUndefined(f"function returned non-finite value at {xi}")
            vals.append(v)
    g1v, g2v, g3v = vals
    # cyclic-permutation coefficients of the quadratic interpolation
    terms = [(x1, x2, x3, g1v), (x2, x3, x1, g2v), (x3, x1, x2, g3v)]
    g0 = sum(-(b * c) / ((a - b) * (c - a)) * gv for a, b, c, gv in terms)
    g1 = sum((b + c) / ((a - b) * (c - a)) * gv for a, b, c, gv in terms)
    g2 = sum(-1.0 / ((a - b) * (c - a)) * gv for a, b, c, gv in terms)
    result = g0 * np.eye(3) + g1 * m + g2 * (m @ m)
    input_real = np.max(np.abs(m.imag)) == 0.0
    vals_real = all(abs(v.imag) <= 1e-12 * max(1.0, abs(v)) for v in vals)
    if input_real and vals_real:
        rnorm = max(1.0, float(np.linalg.norm(result)))
        if np.max(np.abs(result.imag)) < 1e-10 * rnorm:
            return result.real.astype(float)
    return result


def _check_projector(projector, tol: float = 1e-12) -> np.ndarray:
    p = _as_square(projector, "projector")
    scale = max(1.0, float(np.linalg.norm(p)))
    if float(np.linalg.norm(p - p.conj().T)) > tol * scale:
        raise InvalidProjector("projector is not Hermitian")
    if float(np.linalg.norm(p @ p - p)) > tol * scale:
        raise InvalidProjector("projector is not idempotent")
    return p


def subspace_min_eig(m, projector) -> float:
    """Minimum eigenvalue of (the Hermitian part of) ``m`` restricted to
    ``range(projector)``.  Returns ``+inf`` for a rank-0 projector."""
    m = _as_square(m)
    p = _check_projector(projector)
    if m.shape != p.shape:
        raise DimensionMismatch("matrix and projector shapes differ")
    w, v = np.linalg.eigh((p + p.conj().T) / 2.0)
    basis = v[:, w > 0.5]
    if basis.shape[1] == 0:
        return float("inf")
    h = (m + m.conj().T) / 2.0
    restricted = basis.conj().T @ h @ basis
    return float(np.linalg.eigvalsh(restricted)[0])


def psd_on_subspace(m, projector, tol: float = 1e-10) -> bool:
    """Whether ``m`` is PSD on ``range(projector)``: all eigenvalues of the
    restriction at least ``-tol * max(1, ||m||_F)``."""
    m = _as_square(m)
    bound = -tol * max(1.0, float(np.linalg.norm(m)))
    return subspace_min_eig(m, projector) >= bound
