"""Three-level thermal maps: the detailed-balance stochastic population
block, its embedding into a semigroup (closed-form matrix logarithm and
the explicit embeddability inequalities), conditional complete positivity
of the full generator, and assembly of the 9x9 superoperator.

Conventions
-----------
* ``F`` is column-stochastic: entry ``F[i, j]`` (i != j) is the population
  transfer rate from level ``j+1`` to level ``i+1``; columns sum to one.
* Detailed balance w.r.t. the stationary vector ``p``: ``F[i,j] p[j] =
  F[j,i] p[i]``; levels are ordered ``p1 < p2 < p3`` (level 1 most
  energetic).
* The full map damps the coherence between the two levels *other than*
  ``k+1`` by ``lambdas[k]``; in vectorized (row-major) coordinates the
  coherence slot ``(i, j)`` carries ``lambdas[3 - i - j]`` (0-based).
"""
from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field
from typing import Any

import numpy as np

from . import channels, linalg
from .errors import (
    CcpInconsistency,
    DegenerateSpectrum,
    DomainError,
    InvalidParams,
    LogDoesNotExist,
    NonPositiveRates,
    NotOnSemigroup,
)

__all__ = [
    "QutritDaviesParams",
    "DbReport",
    "SecondarySpectrum",
    "LogExistence",
    "SemigroupResult",
    "EmbeddabilityInequality",
    "CcpReport",
    "ConditionReport",
    "DaviesReport",
    "normalize_stochastic",
    "db_validate",
    "stationary_vector",
    "secondary_spectrum",
    "log_exists",
    "log_stochastic",
    "semigroup_member",
    "embeddability_inequalities",
    "ccp_matrix",
    "ccp_margins",
    "ccp_check",
    "build_generator",
    "assemble",
    "is_davies_qutrit",
    "gibbs_of",
    "generator_from_rates",
    "random_stationary",
    "random_db_generator",
    "random_davies_params",
    "random_db_stochastic",
]

_OFFDIAG = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]


def normalize_stochastic(F, tol: float = 1e-12) -> np.ndarray:
    """Column-renormalize a matrix that is stochastic within ``tol``."""
    F = np.asarray(F, dtype=float)
    if F.shape != (3, 3):
        raise InvalidParams(f"expected a 3x3 matrix, got {F.shape}")
    sums = F.sum(axis=0)
    if np.max(np.abs(sums - 1.0)) > tol:
        raise InvalidParams(f"columns sum to {sums}, not 1")
    if F.min() < -tol:
        raise InvalidParams(f"negative entry {F.min():.3e}")
    return np.clip(F, 0.0, None) / sums


@dataclass(frozen=True)
class QutritDaviesParams:
    """Population block, coherence damping factors and stationary vector.

    Strict construction enforces the domain: ``F`` stochastic within 1e-12,
    ``lambdas`` in ``(0, 1]``, ``p`` a strictly increasing probability
    vector with non-degenerate transition frequencies (``p2^2 != p1*p3``,
    i.e. no two energy gaps coincide).  ``strict=False`` defers those checks
    to :func:`is_davies_qutrit` (used by the CLI to classify rather than
    crash on bad files).
    """

    transfer: np.ndarray
    lambdas: np.ndarray
    stationary: np.ndarray
    strict: InitVar[bool] = True

    def __post_init__(self, strict: bool):
        object.__setattr__(self, "transfer", np.array(self.transfer, dtype=float))
        object.__setattr__(self, "lambdas", np.array(self.lambdas, dtype=float))
        object.__setattr__(self, "stationary", np.array(self.stationary, dtype=float))
        if self.transfer.shape != (3, 3):
            raise InvalidParams(f"transfer block must be 3x3, got {self.transfer.shape}")
        if self.lambdas.shape != (3,):
            raise InvalidParams("expected three coherence damping factors")
        if self.stationary.shape != (3,):
            raise InvalidParams("expected a stationary vector of length 3")
        if not strict:
            return
        object.__setattr__(self, "transfer", normalize_stochastic(self.transfer))
        if np.any(self.lambdas <= 0.0) or np.any(self.lambdas > 1.0 + 1e-12):
            raise InvalidParams(f"damping factors must lie in (0, 1], got {self.lambdas}")
        p = self.stationary
        if np.any(p <= 0) or abs(p.sum() - 1.0) > 1e-10:
            raise InvalidParams("stationary vector must be positive and sum to 1")
        if not (p[0] < p[1] < p[2]):
            raise InvalidParams(
                "stationary vector must be strictly increasing (p1 < p2 < p3; "
                "level 1 is the most energetic)"
            )
        if abs(p[1] ** 2 - p[0] * p[2]) <= 1e-12 * p[1] ** 2:
            raise InvalidParams(
                "degenerate transition frequencies (p2^2 = p1*p3, equally "
                "spaced levels): the coherence sector would develop off-"
                "diagonal blocks, which this construction does not model"
            )


def gibbs_of(params_or_p) -> channels.GibbsState:
    p = (
        params_or_p.stationary
        if isinstance(params_or_p, QutritDaviesParams)
        else np.asarray(params_or_p, dtype=float)
    )
    return channels.GibbsState.from_probabilities(p)


# ---------------------------------------------------------------------------
# Detailed balance and the stationary vector
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DbReport:
    holds: bool
    stochastic: bool
    pair_residual: float
    ordering_holds: bool | None
    cycle_residual: float | None


def db_validate(F, p, tol: float = 1e-10) -> DbReport:
    """Detailed-balance check of a stochastic block against ``p``.

    Verifies ``F[i,j] p[j] = F[j,i] p[i]`` for all pairs (relative residual
    <= ``tol``); when ``p`` is strictly increasing and all off-diagonal
    entries are positive, additionally reports the directional orderings
    ``F12 < F21``, ``F13 < F31``, ``F23 < F32`` and the cycle identity
    ``F12 F23 F31 = F13 F32 F21``.
    """
    F = np.asarray(F, dtype=float)
    p = np.asarray(p, dtype=float)
    sums = F.sum(axis=0)
    stochastic = bool(np.max(np.abs(sums - 1.0)) <= max(tol, 1e-12) and F.min() >= -tol)
    worst = 0.0
    for i, j in [(0, 1), (0, 2), (1, 2)]:
        lhs = F[i, j] * p[j]
        rhs = F[j, i] * p[i]
        scale = max(abs(lhs), abs(rhs), 1e-30)
        worst = max(worst, abs(lhs - rhs) / scale)
    pairs_ok = worst <= tol
    ordering = None
    cycle_residual = None
    offdiag = np.array([F[i, j] for i, j in _OFFDIAG])
    if p[0] < p[1] < p[2] and np.all(offdiag > 0):
        ordering = bool(F[0, 1] < F[1, 0] and F[0, 2] < F[2, 0] and F[1, 2] < F[2, 1])
        fwd = F[0, 1] * F[1, 2] * F[2, 0]
        bwd = F[0, 2] * F[2, 1] * F[1, 0]
        cycle_residual = abs(fwd - bwd) / max(abs(fwd), abs(bwd), 1e-30)
    holds = stochastic and pairs_ok and (ordering is not False) and (
        cycle_residual is None or cycle_residual <= tol
    )
    return DbReport(
        holds=holds,
        stochastic=stochastic,
        pair_residual=float(worst),
        ordering_holds=ordering,
        cycle_residual=cycle_residual,
    )


def stationary_vector(F) -> np.ndarray:
    """Closed-form stationary vector of a detailed-balance block.

    ``p1 = F12 F13 / (F12 F13 + F12 F31 + F13 F21)`` and cyclic analogues;
    requires strictly positive off-diagonal entries
    (:class:`NonPositiveRates` otherwise).
    """
    F = np.asarray(F, dtype=float)
    for i, j in _OFFDIAG:
        if F[i, j] <= 0.0:
            raise NonPositiveRates(f"entry F[{i + 1}{j + 1}] = {F[i, j]} must be positive")
    f12, f13, f21, f23, f31, f32 = (
        F[0, 1], F[0, 2], F[1, 0], F[1, 2], F[2, 0], F[2, 1],
    )
    p1 = f12 * f13 / (f12 * f13 + f12 * f31 + f13 * f21)
    p2 = f23 * f21 / (f23 * f21 + f23 * f12 + f21 * f32)
    p3 = f31 * f32 / (f31 * f32 + f31 * f23 + f32 * f13)
    p = np.array([p1, p2, p3])
    return p / p.sum()


# ---------------------------------------------------------------------------
# Spectrum, logarithm existence, logarithm
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SecondarySpectrum:
    """Non-unit eigenvalues of a stochastic 3x3 block: ``center +- half_gap``
    with ``center = (tr F - 1)/2``.  ``real_pair`` is False when the
    radicand ``2 tr F^2 - (tr F)^2 + 2 tr F - 3`` is negative (complex
    pair, hence no real logarithm on a detailed-balance semigroup)."""

    center: float
    half_gap: float
    radicand: float
    real_pair: bool

    def eigenvalues(self) -> tuple[float, float, float]:
        return (1.0, self.center + self.half_gap, self.center - self.half_gap)


def secondary_spectrum(F) -> SecondarySpectrum:
    F = np.asarray(F, dtype=float)
    t1 = float(np.trace(F))
    t2 = float(np.trace(F @ F))
    radicand = 2.0 * t2 - t1 * t1 + 2.0 * t1 - 3.0
    real = radicand >= -1e-12
    return SecondarySpectrum(
        center=(t1 - 1.0) / 2.0,
        half_gap=math.sqrt(max(radicand, 0.0)) / 2.0,
        radicand=radicand,
        real_pair=real,
    )


@dataclass(frozen=True)
class LogExistence:
    """Two equivalent forms of the real-log existence conditions plus the
    strict positivity of the smallest eigenvalue.

    ``ab_form`` is ``center >= 0 and (radicand/4) <= center^2`` — evaluated
    on the raw radicand so that it coincides *identically* with
    ``trace_form`` (``tr F >= 1 and tr F^2 + 2 tr F <= 2 + (tr F)^2``) on
    every stochastic matrix, complex spectra included.  An actual real
    logarithm additionally needs a real pair and ``min_eigenvalue > 0``.
    """

    exists: bool
    ab_form: bool
    trace_form: bool
    real_pair: bool
    min_eigenvalue: float
    which: str | None


def log_exists(F) -> LogExistence:
    F = np.asarray(F, dtype=float)
    spec = secondary_spectrum(F)
    t1 = float(np.trace(F))
    t2 = float(np.trace(F @ F))
    ab_form = spec.center >= 0.0 and spec.radicand / 4.0 <= spec.center**2
    trace_form = t1 >= 1.0 and t2 + 2.0 * t1 <= 2.0 + t1 * t1
    min_eig = spec.center - spec.half_gap
    exists = ab_form and spec.real_pair and min_eig > 0.0
    which = None
    if not exists:
        if not spec.real_pair:
            which = "complex eigenvalue pair"
        elif spec.center < 0.0:
            which = "center (tr F - 1)/2 negative"
        elif not ab_form:
            which = "half-gap exceeds center"
        else:
            which = "smallest eigenvalue not positive"
    return LogExistence(
        exists=exists,
        ab_form=ab_form,
        trace_form=trace_form,
        real_pair=spec.real_pair,
        min_eigenvalue=min_eig,
        which=which,
    )


def log_stochastic(F, gap_tol: float = 1e-8) -> np.ndarray:
    """Real logarithm candidate of a stochastic block.

    Uses the closed-form quadratic interpolation when the spectrum is
    non-degenerate; on a degenerate spectrum falls back to diagonalizing
    the detailed-balance symmetrization.  The result is returned even when
    it has negative off-diagonal entries — whether it is a valid generator
    is decided by :func:`semigroup_member`.
    """
    F = np.asarray(F, dtype=float)
    existence = log_exists(F)
    if not existence.exists:
        raise LogDoesNotExist(existence.which or "no real logarithm")
    try:
        G = linalg.func_of_3x3(F, linalg.real_log, gap_tol=gap_tol)
    except DegenerateSpectrum:
        G = _log_via_symmetrization(F)
    return np.real_if_close(G, tol=1000).astype(float)


def _log_via_symmetrization(F: np.ndarray) -> np.ndarray:
    try:
        p = stationary_vector(F)
    except NonPositiveRates:
        if np.allclose(F, F.T, atol=1e-12):
            p = np.full(3, 1.0 / 3.0)
        else:
            raise DegenerateSpectrum(
                "degenerate spectrum and no strictly positive stationary vector "
                "for the symmetrized route"
            )
    d = np.sqrt(p)
    sym = (F * d[None, :]) / d[:, None]
    sym = (sym + sym.T) / 2.0
    w, v = np.linalg.eigh(sym)
    if np.any(w <= 0.0):
        raise LogDoesNotExist(f"symmetrized block has eigenvalue {w.min():.3e}")
    logm = (v * np.log(w)) @ v.T
    return (logm * (1.0 / d)[None, :]) * d[:, None]


@dataclass(frozen=True)
class SemigroupResult:
    member: bool
    generator: np.ndarray | None
    log_existence: LogExistence
    violation_entry: tuple[int, int] | None
    violation_value: float | None


def semigroup_member(F, tol: float = 1e-10) -> SemigroupResult:
    """Whether the stochastic block embeds into a one-parameter semigroup:
    a real log exists and all its off-diagonal entries are >= ``-tol``."""
    F = np.asarray(F, dtype=float)
    existence = log_exists(F)
    if not existence.exists:
        return SemigroupResult(
            member=False,
            generator=None,
            log_existence=existence,
            violation_entry=None,
            violation_value=None,
        )
    G = log_stochastic(F)
    entries = [(G[i, j], (i, j)) for i, j in _OFFDIAG]
    worst_val, worst_entry = min(entries, key=lambda t: t[0])
    if worst_val >= -tol:
        return SemigroupResult(True, G, existence, None, None)
    return SemigroupResult(False, G, existence, worst_entry, float(worst_val))


# ---------------------------------------------------------------------------
# Explicit embeddability inequalities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddabilityInequality:
    """One of the three closed-form sign conditions on the log's entries.

    ``holds`` (margin = rhs - lhs >= 0) is equivalent to ``G[entry] >= 0``
    (and, through detailed balance, to ``G[dual_entry] >= 0``); the mapping
    was calibrated against the direct logarithm route and is exact on the
    validity domain.
    """

    variant: int
    entry: tuple[int, int]
    dual_entry: tuple[int, int]
    lhs: float
    rhs: float
    margin: float
    holds: bool


_PERMS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def embeddability_inequalities(F, domain_tol: float = 1e-12) -> tuple[
    EmbeddabilityInequality, EmbeddabilityInequality, EmbeddabilityInequality
]:
    """Evaluate the three cyclic closed-form inequalities.

    Validity domain: a strictly positive spectral gap (``half_gap > 0``),
    both non-unit eigenvalues in ``(0, 1)``, and a nonvanishing pivot entry
    in each cyclic frame (the formulas divide by it).  Outside the domain a
    :class:`DomainError` is raised and callers should use the direct
    logarithm route instead.
    """
    F = np.asarray(F, dtype=float)
    spec = secondary_spectrum(F)
    if spec.radicand <= domain_tol:
        raise DomainError("spectral gap vanishes (degenerate or complex pair)")
    big = spec.center + spec.half_gap
    small = spec.center - spec.half_gap
    if small <= domain_tol:
        raise DomainError(f"smallest eigenvalue {small:.3e} not positive")
    if big >= 1.0 - domain_tol:
        raise DomainError(f"eigenvalue {big:.6f} reaches 1; log factor vanishes")
    results = []
    for variant, perm in enumerate(_PERMS):

        def f(r: int, c: int) -> float:
            return F[perm[r], perm[c]]

        pivot = f(1, 0)
        if pivot < 1e-12:
            raise DomainError(
                f"pivot entry F[{perm[1] + 1}{perm[0] + 1}] below 1e-12; "
                "use the direct logarithm route"
            )
        tail = (
            -f(0, 1) - f(1, 0) + f(0, 2) - f(2, 0) + f(1, 2) - f(2, 1)
            + 2.0 * f(1, 2) * f(2, 0) / pivot
        )
        y1 = 2.0 * spec.half_gap + tail
        y2 = -2.0 * spec.half_gap + tail
        lhs = y1 * (1.0 - small) * math.log(big)
        rhs = y2 * (1.0 - big) * math.log(small)
        margin = rhs - lhs
        results.append(
            EmbeddabilityInequality(
                variant=variant,
                entry=(perm[1], perm[0]),
                dual_entry=(perm[0], perm[1]),
                lhs=lhs,
                rhs=rhs,
                margin=margin,
                holds=margin >= 0.0,
            )
        )
    return tuple(results)


# ---------------------------------------------------------------------------
# Conditional complete positivity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CcpReport:
    """Margins of the three independent conditional-complete-positivity
    routes; ``holds`` is the subspace-PSD verdict of the 3x3 matrix test."""

    holds: bool
    scalar_trace_margin: float
    scalar_det_margin: float
    matrix_margin: float
    choi_margin: float


def ccp_matrix(G, r) -> np.ndarray:
    """Symmetric 3x3 matrix whose negative must be PSD orthogonal to
    ``(1,1,1)``: diagonal from the generator's column decay rates,
    off-diagonal from the coherence rates."""
    G = np.asarray(G, dtype=float)
    r = np.asarray(r, dtype=float)
    return np.array(
        [
            [-G[0, 0], r[2], r[1]],
            [r[2], -G[1, 1], r[0]],
            [r[1], r[0], -G[2, 2]],
        ]
    )


def build_generator(G, r) -> np.ndarray:
    """9x9 generator: population block ``G`` on the diagonal slots,
    coherence slot ``(i, j)`` decaying at rate ``r[3 - i - j]``."""
    G = np.asarray(G, dtype=float)
    r = np.asarray(r, dtype=float)
    out = np.zeros((9, 9))
    pop = [0, 4, 8]
    out[np.ix_(pop, pop)] = G
    for i in range(3):
        for j in range(3):
            if i != j:
                out[3 * i + j, 3 * i + j] = -r[3 - i - j]
    return out


def ccp_margins(G: np.ndarray, r: np.ndarray, tol: float = 1e-10) -> CcpReport:
    """Margins of the three conditional-complete-positivity routes for a
    population generator ``G`` and coherence rates ``r``: the scalar trace
    inequality ``sum r >= sum offdiag G``, the scalar determinant inequality
    (rank-2 restriction), the 3x3 subspace-PSD eigenvalue, and the restricted
    Choi eigenvalue of the assembled 9x9 generator."""
    # d[i] = total decay rate out of level i+1 (= -G[i, i])
    d = -np.array([G[0, 0], G[1, 1], G[2, 2]])
    r = np.asarray(r, dtype=float)
    off_sum = sum(G[i, j] for i, j in _OFFDIAG)
    m1 = float(r.sum() - off_sum)
    m2 = float(
        2.0 * (r[0] * r[1] + r[1] * r[2] + r[2] * r[0])
        + (d[0] * d[1] + d[1] * d[2] + d[2] * d[0])
        - (r**2).sum()
        - 2.0 * (r[0] * d[0] + r[1] * d[1] + r[2] * d[2])
    )
    projector = np.eye(3) - np.full((3, 3), 1.0 / 3.0)
    matrix_margin = linalg.subspace_min_eig(-ccp_matrix(G, r), projector)
    _, choi_margin = channels.is_ccp_generator(build_generator(G, r), tol=tol)
    scale = max(1.0, float(np.linalg.norm(ccp_matrix(G, r))))
    return CcpReport(
        holds=matrix_margin >= -tol * scale,
        scalar_trace_margin=m1,
        scalar_det_margin=m2,
        matrix_margin=float(matrix_margin),
        choi_margin=float(choi_margin),
    )


def ccp_check(
    params: QutritDaviesParams, tol: float = 1e-10, band: float = 1e-8
) -> CcpReport:
    """Conditional complete positivity of the full generator.

    Evaluates three routes: the two scalar inequalities (trace and
    determinant of the restricted matrix), the 3x3 subspace-PSD test, and
    the Choi test on the assembled 9x9 generator.  If their verdicts
    disagree while every margin lies outside the ``band``,
    :class:`CcpInconsistency` is raised; within the band the matrix test
    decides.  Raises :class:`NotOnSemigroup` when the population block does
    not embed.
    """
    sm = semigroup_member(params.transfer)
    if not sm.member:
        raise NotOnSemigroup(
            f"population block is not embeddable: "
            f"{sm.log_existence.which or sm.violation_entry}"
        )
    if np.any(params.lambdas <= 0):
        raise InvalidParams("damping factors must be positive")
    r = -np.log(params.lambdas)
    report = ccp_margins(sm.generator, r, tol)
    verdicts = {
        "scalar": min(report.scalar_trace_margin, report.scalar_det_margin) >= 0.0,
        "matrix": report.matrix_margin >= 0.0,
        "choi": report.choi_margin >= 0.0,
    }
    margins = (
        min(abs(report.scalar_trace_margin), abs(report.scalar_det_margin)),
        abs(report.matrix_margin),
        abs(report.choi_margin),
    )
    if len(set(verdicts.values())) > 1 and min(margins) >= band:
        raise CcpInconsistency(
            f"conditional-complete-positivity routes disagree beyond the "
            f"tolerance band: {verdicts}, margins {margins}"
        )
    return report


# ---------------------------------------------------------------------------
# Assembly and the full membership report
# ---------------------------------------------------------------------------


def assemble(params: QutritDaviesParams, validate: bool = True) -> np.ndarray:
    """9x9 superoperator: population block on the diagonal slots, coherence
    slot ``(i, j)`` scaled by ``lambdas[3 - i - j]``."""
    if validate:
        report = is_davies_qutrit(params)
        if not report.is_davies:
            failed = [c.name for c in report.conditions if not c.holds]
            raise InvalidParams(f"not a valid thermal map; failed: {', '.join(failed)}")
    F = np.asarray(params.transfer, dtype=float)
    lam = np.asarray(params.lambdas, dtype=float)
    out = np.zeros((9, 9))
    pop = [0, 4, 8]
    out[np.ix_(pop, pop)] = F
    for i in range(3):
        for j in range(3):
            if i != j:
                out[3 * i + j, 3 * i + j] = lam[3 - i - j]
    return out


@dataclass(frozen=True)
class ConditionReport:
    name: str
    holds: bool
    margin: float | None
    certificate: Any = None


@dataclass(frozen=True)
class DaviesReport:
    is_davies: bool
    conditions: tuple[ConditionReport, ...]

    def condition(self, name: str) -> ConditionReport:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)


def is_davies_qutrit(params: QutritDaviesParams, tol: float = 1e-10) -> DaviesReport:
    """Full membership report: stochasticity, stationary-vector convention,
    non-degenerate transition frequencies, detailed balance, damping-factor
    range, log existence, semigroup membership, conditional complete
    positivity.  Never raises on a well-formed parameter object; each
    condition carries ``{holds, margin, certificate}``."""
    F = np.asarray(params.transfer, dtype=float)
    lam = np.asarray(params.lambdas, dtype=float)
    p = np.asarray(params.stationary, dtype=float)
    conditions: list[ConditionReport] = []

    col_dev = float(np.max(np.abs(F.sum(axis=0) - 1.0)))
    neg = float(max(0.0, -F.min()))
    dev = max(col_dev, neg)
    conditions.append(
        ConditionReport("stochastic", dev <= 1e-10, -dev, f"column deviation {col_dev:.2e}")
    )

    order_margin = float(min(p[1] - p[0], p[2] - p[1])) if p.size == 3 else -1.0
    psum_ok = abs(p.sum() - 1.0) <= 1e-10 and np.all(p > 0)
    conditions.append(
        ConditionReport(
            "stationary_ordered",
            bool(psum_ok and order_margin > 0.0),
            order_margin,
            [float(x) for x in p],
        )
    )

    bohr = float(abs(p[1] ** 2 - p[0] * p[2]) / max(p[1] ** 2, 1e-30))
    conditions.append(
        ConditionReport("bohr_nondegenerate", bohr > 1e-12, bohr, None)
    )

    db = db_validate(F, p, tol=tol)
    conditions.append(
        ConditionReport(
            "detailed_balance",
            db.holds,
            -db.pair_residual,
            {
                "pair_residual": db.pair_residual,
                "ordering_holds": db.ordering_holds,
                "cycle_residual": db.cycle_residual,
            },
        )
    )

    lam_margin = float(min(lam.min(), 1.0 - lam.max()))
    lam_ok = bool(lam.min() > 0.0 and lam.max() <= 1.0 + 1e-12)
    conditions.append(
        ConditionReport("damping_factors", lam_ok, lam_margin, [float(x) for x in lam])
    )

    existence = log_exists(F)
    conditions.append(
        ConditionReport(
            "log_exists",
            existence.exists,
            existence.min_eigenvalue if existence.real_pair else None,
            existence.which,
        )
    )

    sm = semigroup_member(F, tol=tol)
    if sm.generator is not None:
        gmargin = float(min(sm.generator[i, j] for i, j in _OFFDIAG))
        cert = {"generator": sm.generator.tolist()}
        if sm.violation_entry is not None:
            cert["violated_entry"] = [sm.violation_entry[0] + 1, sm.violation_entry[1] + 1]
    else:
        gmargin = None
        cert = existence.which
    conditions.append(ConditionReport("semigroup_member", sm.member, gmargin, cert))

    if sm.member and lam_ok:
        ccp = ccp_margins(sm.generator, -np.log(lam), tol)
        scalar_ok = min(ccp.scalar_trace_margin, ccp.scalar_det_margin) >= -tol
        conditions.append(
            ConditionReport(
                "ccp",
                bool(ccp.holds),
                ccp.matrix_margin,
                {
                    "scalar_trace_margin": ccp.scalar_trace_margin,
                    "scalar_det_margin": ccp.scalar_det_margin,
                    "scalar_holds": bool(scalar_ok),
                    "choi_margin": ccp.choi_margin,
                },
            )
        )
    else:
        conditions.append(
            ConditionReport("ccp", False, None, "not evaluated: prerequisites failed")
        )

    return DaviesReport(
        is_davies=all(c.holds for c in conditions), conditions=tuple(conditions)
    )


# ---------------------------------------------------------------------------
# Random constructions (forward oracles)
# ---------------------------------------------------------------------------


def generator_from_rates(up_rates, p) -> np.ndarray:
    """Detailed-balance generator from the three excitation rates
    ``(G12, G13, G23)`` and a stationary vector; decay rates follow from
    ``G[j,i] = G[i,j] p[j] / p[i]``."""
    g12, g13, g23 = (float(x) for x in up_rates)
    p = np.asarray(p, dtype=float)
    G = np.zeros((3, 3))
    G[0, 1], G[0, 2], G[1, 2] = g12, g13, g23
    G[1, 0] = g12 * p[1] / p[0]
    G[2, 0] = g13 * p[2] / p[0]
    G[2, 1] = g23 * p[2] / p[1]
    np.fill_diagonal(G, 0.0)
    np.fill_diagonal(G, -G.sum(axis=0))
    return G


def random_stationary(rng: np.random.Generator) -> np.ndarray:
    """Strictly increasing probability vector with comfortably
    non-degenerate transition frequencies."""
    while True:
        p = np.sort(rng.uniform(0.05, 1.0, 3))
        p = p / p.sum()
        if p[1] - p[0] < 0.02 or p[2] - p[1] < 0.02:
            continue
        if abs(p[1] ** 2 - p[0] * p[2]) < 1e-3 * p[1] ** 2:
            continue
        return p


def random_db_generator(
    rng: np.random.Generator,
    rate_range: tuple[float, float] = (0.05, 2.0),
    p=None,
) -> tuple[np.ndarray, np.ndarray]:
    """Random detailed-balance generator (and its stationary vector)."""
    if p is None:
        p = random_stationary(rng)
    up = rng.uniform(rate_range[0], rate_range[1], 3)
    return generator_from_rates(up, p), np.asarray(p, dtype=float)


def random_davies_params(
    rng: np.random.Generator,
    rate_range: tuple[float, float] = (0.05, 2.0),
    p=None,
) -> QutritDaviesParams:
    """Random valid parameter set: forward-constructed population block and
    damping strong enough to guarantee conditional complete positivity
    (each coherence rate at least the total population rate)."""
    G, p = random_db_generator(rng, rate_range, p)
    F = linalg.expm(G)
    total = sum(G[i, j] for i, j in _OFFDIAG)
    r = rng.uniform(total, total + 1.0, 3)
    return QutritDaviesParams(transfer=F, lambdas=np.exp(-r), stationary=p)


def random_db_stochastic(
    rng: np.random.Generator,
    p=None,
    max_rate: float = 0.45,
) -> tuple[np.ndarray, np.ndarray]:
    """Random detailed-balance *stochastic* block built directly in map
    space (not via a generator), so it may or may not be embeddable; used
    for boundary studies."""
    if p is None:
        p = random_stationary(rng)
    for _ in range(200):
        f12, f13, f23 = rng.uniform(0.01, max_rate, 3)
        F = np.array(
            [
                [0.0, f12, f13],
                [f12 * p[1] / p[0], 0.0, f23],
                [f13 * p[2] / p[0], f23 * p[2] / p[1], 0.0],
            ]
        )
        np.fill_diagonal(F, 1.0 - F.sum(axis=0))
        if np.all(np.diag(F) >= 0.0):
            return F, np.asarray(p, dtype=float)
    raise RuntimeError("failed to sample a detailed-balance stochastic block")
