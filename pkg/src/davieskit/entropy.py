"""Entropy functionals and the numeric minimal-output-entropy oracle.

The oracle minimizes the von Neumann entropy of the channel output over
pure input states with nonnegative real entries (sufficient for the
rotationally symmetric thermal maps built by this package; the test suite
guards this restriction with full state-space random searches).  It is a
plain grid-plus-refinement search on the actual superoperator action and
shares nothing with the closed-form qubit analysis it is used to check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channels, kernels
from .errors import DimensionMismatch, NotAState, NotCP, NotDistribution, NotTP

__all__ = ["EntropyResult", "von_neumann", "shannon", "moe_numeric"]

DEFAULT_QUBIT_GRID = 2048
DEFAULT_QUTRIT_GRID = 200


def shannon(p, base: float = 2.0, tol: float = 1e-12) -> float:
    """Shannon entropy of a probability vector (0 log 0 := 0)."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise NotDistribution("expected a flat vector")
    if np.any(p < -tol):
        raise NotDistribution(f"negative entry {p.min():.3e}")
    if abs(p.sum() - 1.0) > max(tol, 1e-12):
        raise NotDistribution(f"entries sum to {p.sum():.15g}, expected 1")
    x = np.clip(p, 0.0, 1.0)
    terms = np.where(x > 0.0, -x * np.log(np.maximum(x, 1e-300)), 0.0)
    return float(terms.sum() / np.log(base))


def von_neumann(rho, base: float = 2.0, tol: float = 1e-10) -> float:
    """Von Neumann entropy, base 2 by default; input must be a state."""
    rho = np.asarray(rho, dtype=complex)
    channels.assert_density_matrix(rho, tol=tol, exc=NotAState)
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    return shannon(np.clip(w, 0.0, 1.0) / np.clip(w, 0.0, 1.0).sum(), base=base)


@dataclass(frozen=True)
class EntropyResult:
    """Outcome of the numeric minimization.

    ``gap_estimate`` is the final search-step width times the numerically
    estimated Lipschitz constant of the output-entropy map: the result lies
    within it of the true minimum under that Lipschitz bound.
    """

    value: float
    minimizer: np.ndarray
    iterations: int
    gap_estimate: float


def moe_numeric(
    phi,
    grid: int | None = None,
    refine_tol: float | None = None,
    base: float = 2.0,
    validate: bool = True,
    tol_cp: float | None = None,
    tol_tp: float = 1e-10,
) -> EntropyResult:
    """Minimal output entropy of a qubit or qutrit channel, numerically.

    Qubit inputs are parametrized by the upper-level weight ``mu`` with
    amplitude ``sqrt(mu(1-mu))`` (2048-point grid, golden-section refinement
    to 1e-10 by default); qutrit inputs by nonnegative real amplitudes on
    the probability simplex (200 points per axis, pattern-search refinement).

    Raises :class:`NotTP` / :class:`NotCP` when validation is on and the
    map fails the corresponding test.
    """
    phi = np.asarray(phi, dtype=complex)
    if phi.shape == (4, 4):
        dim = 2
    elif phi.shape == (9, 9):
        dim = 3
    else:
        raise DimensionMismatch(f"expected a 4x4 or 9x9 superoperator, got {phi.shape}")
    if validate:
        if not channels.is_trace_preserving(phi, tol=tol_tp):
            raise NotTP("map is not trace preserving")
        cp, certificate = channels.is_completely_positive(phi, tol=tol_cp)
        if not cp:
            raise NotCP(f"map is not completely positive (certificate {certificate:.3e})")
    scale = math.log(2.0) / math.log(base)
    if dim == 2:
        mu, value, evals, lipschitz, bracket = kernels.qubit_min_entropy(
            phi, grid or DEFAULT_QUBIT_GRID, refine_tol or 1e-10
        )
        nu = math.sqrt(max(0.0, mu * (1.0 - mu)))
        minimizer = np.array([[mu, nu], [nu, 1.0 - mu]], dtype=complex)
        step = bracket
    else:
        q1, q2, value, evals, lipschitz, step = kernels.qutrit_min_entropy(
            phi, grid or DEFAULT_QUTRIT_GRID, refine_tol or 1e-9
        )
        psi = np.sqrt(np.clip([q1, q2, 1.0 - q1 - q2], 0.0, 1.0))
        minimizer = np.outer(psi, psi).astype(complex)
    return EntropyResult(
        value=float(value * scale),
        minimizer=minimizer,
        iterations=int(evals),
        gap_estimate=float(lipschitz * step * scale),
    )
