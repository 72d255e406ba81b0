"""Quantum-channel algebra shared by the qubit and qutrit constructions.

Conventions
-----------
* Density matrices are plain complex ndarrays.
* Superoperators are ``N^2 x N^2`` matrices acting on **row-major** vectorized
  density matrices: ``vec(rho) = (rho_11, rho_12, ..., rho_1N, rho_21, ...)``.
* The dynamical matrix of a map ``Phi`` is
  ``(1/N) * sum_ij Phi(|i><j|) (x) |i><j|`` (output factor first); it is PSD
  exactly when ``Phi`` is completely positive.
* Gibbs weights use ``k_B = 1``, so ``beta = 1/T``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    InvalidParams,
    NonPhysicalOutput,
    NotCP,
    TraceNotKilled,
    ZeroGap,
)

__all__ = [
    "vectorize",
    "devectorize",
    "apply_channel",
    "choi_matrix",
    "is_completely_positive",
    "is_trace_preserving",
    "kraus_from_choi",
    "superoperator_from_kraus",
    "maximally_entangled_projector",
    "GibbsState",
    "gibbs_state",
    "beta_inner",
    "DetailedBalanceResult",
    "check_detailed_balance",
    "is_ccp_generator",
    "ergodic_limit_check",
    "assert_density_matrix",
]


def _system_dim(superop: np.ndarray) -> int:
    n2 = superop.shape[-1]
    n = int(round(np.sqrt(n2)))
    if n * n != n2 or superop.shape[-2] != n2:
        raise DimensionMismatch(f"superoperator shape {superop.shape} is not (N^2, N^2)")
    return n


def vectorize(rho) -> np.ndarray:
    """Row-major vectorization of a matrix."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {rho.shape}")
    return rho.reshape(-1).copy()


def devectorize(vec, dim: int | None = None) -> np.ndarray:
    """Inverse of :func:`vectorize`; ``devectorize(vectorize(m)) == m`` exactly."""
    vec = np.asarray(vec)
    if vec.ndim != 1:
        raise DimensionMismatch("expected a flat vector")
    if dim is None:
        dim = int(round(np.sqrt(vec.size)))
    if dim * dim != vec.size:
        raise DimensionMismatch(f"length {vec.size} is not a perfect square")
    return vec.reshape(dim, dim).copy()


def assert_density_matrix(rho, tol: float = 1e-12, exc=NonPhysicalOutput) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of a state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise exc(f"not a square matrix: shape {rho.shape}")
    scale = max(1.0, float(np.linalg.norm(rho)))
    if float(np.linalg.norm(rho - rho.conj().T)) > 10 * tol * scale:
        raise exc("state is not Hermitian")
    if abs(complex(np.trace(rho)).real - 1.0) > 10 * tol or abs(
        complex(np.trace(rho)).imag
    ) > 10 * tol:
        raise exc(f"trace is {complex(np.trace(rho)):.6g}, expected 1")
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    if w[0] < -10 * tol * scale:
        raise exc(f"negative eigenvalue {w[0]:.3e}")
    return rho


def apply_channel(phi, rho, validate: bool = True, tol: float = 1e-12) -> np.ndarray:
    """Apply a superoperator to a state: ``devectorize(phi @ vectorize(rho))``.

    With ``validate=True`` the output must pass density-matrix validation
    (:class:`NonPhysicalOutput` otherwise); disable for generators or other
    diagnostic maps whose output is not a state.
    """
    phi = np.asarray(phi, dtype=complex)
    n = _system_dim(phi)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (n, n):
        raise DimensionMismatch(f"state shape {rho.shape} does not match dim {n}")
    out = devectorize(phi @ vectorize(rho), n)
    if validate:
        assert_density_matrix(out, tol=tol)
    return out


def choi_matrix(phi) -> np.ndarray:
    """Dynamical (Choi) matrix of a superoperator, normalized to trace one
    for trace-preserving maps.

    Accepts stacked input ``(..., N^2, N^2)`` and returns the same leading
    shape; the transformation is the index reshuffle
    ``C[(k,i),(l,j)] = phi[(k,l),(i,j)] / N``.
    """
    phi = np.asarray(phi, dtype=complex)
    n = _system_dim(phi)
    lead = phi.shape[:-2]
    resh = phi.reshape(*lead, n, n, n, n)
    resh = np.moveaxis(resh, (-4, -3, -2, -1), (-4, -2, -3, -1))
    return resh.reshape(*lead, n * n, n * n) / n


def is_trace_preserving(phi, tol: float = 1e-10) -> bool:
    """Check ``tr(Phi(E)) = tr(E)`` on the matrix-unit basis."""
    phi = np.asarray(phi, dtype=complex)
    n = _system_dim(phi)
    diag_rows = phi[np.arange(n) * (n + 1), :].sum(axis=0)
    target = np.eye(n, dtype=complex).reshape(-1)
    return float(np.max(np.abs(diag_rows - target))) <= tol


def is_completely_positive(phi, tol: float | None = None):
    """Choi criterion for complete positivity.

    Returns ``(verdict, certificate)`` where the certificate is the minimal
    Choi eigenvalue (or minus the Hermiticity defect when the Choi matrix is
    not even Hermitian).  Default tolerance: ``1e-10 * max(1, ||Choi||_F)``
    on the minimum eigenvalue, so boundary maps sitting exactly at 0 pass.
    """
    c = choi_matrix(phi)
    scale = max(1.0, float(np.linalg.norm(c)))
    if tol is None:
        tol = 1e-10
    defect = float(np.linalg.norm(c - c.conj().T))
    if defect > tol * scale:
        return False, -defect
    min_eig = float(np.linalg.eigvalsh((c + c.conj().T) / 2.0)[0])
    return min_eig >= -tol * scale, min_eig


def maximally_entangled_projector(dim: int) -> np.ndarray:
    """Projector onto ``sum_i |ii> / sqrt(dim)``."""
    psi = np.eye(dim, dtype=complex).reshape(-1) / np.sqrt(dim)
    return np.outer(psi, psi.conj())


def kraus_from_choi(choi, tol: float = 1e-12, cp_tol: float = 1e-10) -> list[np.ndarray]:
    """Kraus operators from the spectral decomposition of a Choi matrix.

    Eigenvalues above ``tol`` are kept, so the number of operators equals the
    numerical rank.  Raises :class:`NotCP` when the Choi matrix has an
    eigenvalue below ``-cp_tol * max(1, ||choi||_F)``.
    """
    choi = np.asarray(choi, dtype=complex)
    n = _system_dim(choi)
    w, v = linalg.eig_hermitian(choi, tol_herm=1e-10)
    scale = max(1.0, float(np.linalg.norm(choi)))
    if w[-1] < -cp_tol * scale:
        raise NotCP(f"Choi matrix has eigenvalue {w[-1]:.3e}")
    ops = []
    for k in range(len(w)):
        if w[k] > tol:
            ops.append(np.sqrt(n * w[k]) * v[:, k].reshape(n, n))
    return ops


def superoperator_from_kraus(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """Superoperator of ``rho -> sum_k K rho K^dag`` in row-major convention."""
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    n = kraus[0].shape[0]
    out = np.zeros((n * n, n * n), dtype=complex)
    for k in kraus:
        out += np.kron(k, k.conj())
    return out


# ---------------------------------------------------------------------------
# Gibbs states and the weighted inner product
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GibbsState:
    """Thermal equilibrium state of a diagonal Hamiltonian (k_B = 1).

    ``energies`` must be strictly decreasing, matching the convention that
    the first level is the most energetic and hence least populated; the
    probabilities are then strictly increasing for ``beta > 0``.
    """

    energies: tuple[float, ...]
    beta: float
    probabilities: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.energies)

    def density_matrix(self) -> np.ndarray:
        return np.diag(self.probabilities).astype(complex)

    @classmethod
    def from_probabilities(cls, probabilities) -> "GibbsState":
        """Build directly from a strictly positive probability vector
        (energies reconstructed at beta = 1)."""
        p = np.asarray(probabilities, dtype=float)
        if p.ndim != 1 or np.any(p <= 0) or abs(p.sum() - 1.0) > 1e-10:
            raise InvalidParams("probabilities must be positive and sum to 1")
        p = p / p.sum()
        energies = tuple(-np.log(p))
        return cls(energies=energies, beta=1.0, probabilities=p)

    @classmethod
    def from_temperature(cls, energies, temperature: float) -> "GibbsState":
        if temperature < 0:
            raise InvalidParams("temperature must be nonnegative")
        if temperature == 0:
            raise InvalidParams(
                "T = 0 gives infinite beta and a singular Gibbs weight; "
                "use a large finite beta instead"
            )
        return gibbs_state(energies, 1.0 / temperature)


def gibbs_state(energies, beta: float) -> GibbsState:
    """Gibbs state ``exp(-beta*H)/Z`` for a diagonal Hamiltonian.

    ``beta = 0`` yields the uniform vector; otherwise strictly decreasing
    energies give strictly increasing probabilities.
    """
    e = np.asarray(energies, dtype=float)
    if e.ndim != 1 or e.size < 2 or not np.all(np.isfinite(e)):
        raise InvalidParams("energies must be a finite vector of length >= 2")
    if np.any(np.diff(e) >= 0):
        raise InvalidParams("energies must be strictly decreasing (e1 > e2 > ...)")
    if not np.isfinite(beta) or beta < 0:
        raise InvalidParams("beta must be finite and nonnegative")
    w = np.exp(-beta * (e - e.min()))
    p = w / w.sum()
    return GibbsState(energies=tuple(float(x) for x in e), beta=float(beta), probabilities=p)


def beta_inner(x, y, gibbs: GibbsState) -> complex:
    """Weighted inner product ``tr(rho_beta^{-1} x^dag y)``.

    Sesquilinear and positive definite since the Gibbs weights are strictly
    positive; under it detailed-balance generators are self-adjoint.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    n = gibbs.dim
    if x.shape != (n, n) or y.shape != (n, n):
        raise DimensionMismatch("operands must match the Gibbs dimension")
    weights = 1.0 / gibbs.probabilities
    return complex(np.einsum("i,ij,ij->", weights, x.conj(), y))


@dataclass(frozen=True)
class DetailedBalanceResult:
    holds: bool
    max_violation: float
    spectrum_real: bool
    max_imag_eig: float


def check_detailed_balance(op, gibbs: GibbsState, tol: float = 1e-10) -> DetailedBalanceResult:
    """Self-adjointness of a map or generator under the weighted inner product.

    Checks ``<E_ab, op(E_cd)> = <op(E_ab), E_cd>`` over all matrix-unit pairs
    (exact by linearity) and reports the worst absolute violation, plus
    whether the spectrum of ``op`` is real within ``tol`` (a consequence of
    self-adjointness).  The violation is compared to ``tol`` as an absolute
    number; at extreme temperatures the ``1/p`` weights inflate it, so scale
    ``tol`` accordingly.
    """
    op = np.asarray(op, dtype=complex)
    n = _system_dim(op)
    if n != gibbs.dim:
        raise DimensionMismatch("superoperator and Gibbs state dimensions differ")
    # On matrix units, <E_ab, op(E_cd)> = (W op)[(ab),(cd)] with W the diagonal
    # of inverse Gibbs weights indexed by the row label of the unit, and
    # <op(E_ab), E_cd> = (W op)^dag[(ab),(cd)]; the full basis scan is the
    # entrywise comparison of those two matrices.
    weights = np.repeat(1.0 / gibbs.probabilities, n)
    weighted = weights[:, None] * op
    violation = weighted - weighted.conj().T
    worst = float(np.max(np.abs(violation)))
    eigs = np.linalg.eigvals(op)
    max_imag = float(np.max(np.abs(eigs.imag)))
    spectrum_real = max_imag <= tol * max(1.0, float(np.max(np.abs(eigs))))
    return DetailedBalanceResult(
        holds=worst <= tol,
        max_violation=float(worst),
        spectrum_real=spectrum_real,
        max_imag_eig=max_imag,
    )


def is_ccp_generator(gen, tol: float = 1e-10):
    """Conditional complete positivity of a trace-killing generator.

    Verdict is positivity of ``N * Choi(gen)`` on the orthocomplement of the
    maximally entangled vector; returns ``(verdict, certificate)`` with the
    certificate the minimal restricted eigenvalue.  When the verdict is true,
    ``expm(gen, t)`` is completely positive for every ``t >= 0``.

    Raises :class:`TraceNotKilled` when ``tr(gen(E)) != 0`` on the
    matrix-unit basis.
    """
    gen = np.asarray(gen, dtype=complex)
    n = _system_dim(gen)
    diag_rows = gen[np.arange(n) * (n + 1), :].sum(axis=0)
    if float(np.max(np.abs(diag_rows))) > tol * max(1.0, float(np.linalg.norm(gen))):
        raise TraceNotKilled("generator does not annihilate the trace")
    c = choi_matrix(gen) * n
    projector = np.eye(n * n, dtype=complex) - maximally_entangled_projector(n)
    min_eig = linalg.subspace_min_eig(c, projector)
    scale = max(1.0, float(np.linalg.norm(c)))
    return min_eig >= -tol * scale, min_eig


def _state_basis(n: int) -> list[np.ndarray]:
    """Pure states spanning the Hermitian matrices (N^2 of them)."""
    states = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1.0
        states.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            for amp in (1.0, 1.0j):
                v = np.zeros(n, dtype=complex)
                v[i] = 1.0
                v[j] = amp
                v = v / np.linalg.norm(v)
                states.append(np.outer(v, v.conj()))
    return states


def ergodic_limit_check(
    gen, gibbs: GibbsState, horizon: float = 50.0, tol: float = 1e-8
) -> bool:
    """Propagate a spanning set of states for ``horizon`` spectral-gap times
    and check convergence to the Gibbs state.

    Raises :class:`ZeroGap` when the generator has no unique invariant mode
    (multiple vanishing eigenvalues, or a non-decaying one).
    """
    gen = np.asarray(gen, dtype=complex)
    n = _system_dim(gen)
    if n != gibbs.dim:
        raise DimensionMismatch("generator and Gibbs state dimensions differ")
    eigs = np.linalg.eigvals(gen)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    zero_mask = np.abs(eigs) <= 1e-12 * scale
    if int(zero_mask.sum()) != 1:
        raise ZeroGap(f"{int(zero_mask.sum())} vanishing eigenvalues, expected exactly 1")
    decay = -eigs[~zero_mask].real
    gap = float(decay.min())
    if gap <= 0:
        raise ZeroGap("a nonzero eigenvalue fails to decay")
    prop = linalg.expm(gen, horizon / gap)
    target = gibbs.density_matrix()
    for rho in _state_basis(n):
        out = apply_channel(prop, rho, validate=False)
        if float(np.linalg.norm(out - target)) > tol:
            return False
    return True
