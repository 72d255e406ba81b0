"""One-qubit thermal (Davies) maps: construction, validation, time
evolution, Bloch-ellipsoid geometry and the closed-form minimal output
entropy.

Parametrizations
----------------
* ``(a, c, p)``: population-transfer amount ``a``, coherence damping ``c``,
  excited-level Gibbs weight ``p in (0, 1/2]``; derived ``b = a*p/(1-p)``.
  The superoperator is::

      [[1-a, 0, 0, b  ],
       [0,   c, 0, 0  ],
       [0,   0, c, 0  ],
       [a,   0, 0, 1-b]]

  and the admissible region is ``0 <= a <= 1``, ``a + p <= 1``,
  ``0 <= c <= sqrt(1 - a/(1-p))``.
* rates: ``a = (1-p)(1 - exp(-A t))``, ``c = exp(-Gamma t)`` with
  ``Gamma >= A/2 >= 0`` (relaxation vs dephasing).
* relaxation times: ``tau1`` (transverse, = tau2), ``tau3`` (longitudinal),
  equilibrium inversion ``w_eq = 2p - 1``; the semigroup constraint reads
  ``tau1 <= 2*tau3``.
* Bloch affine form: axes ``(c, c, 1 - a/(1-p))``, vertical shift
  ``a(2p-1)/(1-p)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channels, entropy
from .errors import (
    InvalidParams,
    LogDoesNotExist,
    RateOrderViolated,
    SemigroupConstraintViolated,
)

__all__ = [
    "QubitDaviesParams",
    "QubitRates",
    "RelaxationTimes",
    "BlochAffineMap",
    "ValidationResult",
    "MinOutputEntropy",
    "RegionSample",
    "SectionPoint",
    "build",
    "build_batch",
    "validate",
    "from_rates",
    "generator_bloch",
    "generator_super",
    "evolved_bloch",
    "evolved_super",
    "evolve",
    "to_bloch",
    "bloch_to_super",
    "candidate_generator",
    "region_sample",
    "bistochastic_section",
    "min_output_entropy_analytic",
    "moe_case_boundary",
    "random_valid_params",
    "gibbs_of",
]

def _check_p(p: float) -> None:
    if not (0.0 < p <= 0.5):
        raise InvalidParams(
            f"p = {p} is outside (0, 1/2]: the excited level must carry at most "
            "half the weight (level ordering e1 > e2; p = 1/2 is the infinite-"
            "temperature limit)"
        )


@dataclass(frozen=True)
class QubitDaviesParams:
    """Map parameters ``(a, c, p)``; ``a`` and ``c`` may be out of range
    (validation is separate), ``p`` must lie in ``(0, 1/2]``."""

    a: float
    c: float
    p: float

    def __post_init__(self):
        _check_p(self.p)

    @property
    def b(self) -> float:
        return self.a * self.p / (1.0 - self.p)


@dataclass(frozen=True)
class QubitRates:
    """Semigroup data: relaxation rate, dephasing rate, Gibbs weight, time."""

    relax_rate: float
    dephase_rate: float
    p: float
    t: float

    def __post_init__(self):
        _check_p(self.p)
        if self.relax_rate < 0:
            raise InvalidParams("relaxation rate must be nonnegative")
        if self.t < 0:
            raise InvalidParams("time must be nonnegative")


@dataclass(frozen=True)
class RelaxationTimes:
    """Transverse/longitudinal relaxation times and equilibrium inversion."""

    tau1: float
    tau3: float
    w_eq: float
    t: float

    def __post_init__(self):
        if self.tau1 <= 0 or self.tau3 <= 0:
            raise InvalidParams("relaxation times must be positive")
        if not (-1.0 < self.w_eq <= 0.0):
            raise InvalidParams("equilibrium inversion must lie in (-1, 0]")
        if self.t < 0:
            raise InvalidParams("time must be nonnegative")

    @property
    def p(self) -> float:
        return (1.0 + self.w_eq) / 2.0

    def to_rates(self) -> QubitRates:
        return QubitRates(
            relax_rate=1.0 / self.tau3,
            dephase_rate=1.0 / self.tau1,
            p=self.p,
            t=self.t,
        )


@dataclass(frozen=True)
class BlochAffineMap:
    """Affine action on Bloch vectors: diagonal axes plus a vertical shift."""

    eta1: float
    eta2: float
    eta3: float
    kappa3: float
    kappa1: float = 0.0
    kappa2: float = 0.0

    def to_matrix(self) -> np.ndarray:
        """4x4 matrix acting on ``(1, u, v, w)``."""
        return np.array(
            [
                [1.0, 0.0, 0.0, 0.0],
                [self.kappa1, self.eta1, 0.0, 0.0],
                [self.kappa2, 0.0, self.eta2, 0.0],
                [self.kappa3, 0.0, 0.0, self.eta3],
            ]
        )


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    violations: tuple[tuple[str, float], ...]
    margins: tuple[tuple[str, float], ...]


def _margins(params: QubitDaviesParams) -> list[tuple[str, float]]:
    a, c, p = params.a, params.c, params.p
    return [
        ("a >= 0", a),
        ("a <= 1", 1.0 - a),
        ("a + p <= 1", 1.0 - a - p),
        ("c >= 0", c),
        ("c^2 <= 1 - a/(1-p)", (1.0 - a / (1.0 - p)) - c * c),
    ]


def validate(params: QubitDaviesParams, tol: float = 0.0) -> ValidationResult:
    """Check the admissibility constraints; margins are >= 0 when satisfied."""
    margins = _margins(params)
    violations = tuple((name, m) for name, m in margins if m < -tol)
    return ValidationResult(
        valid=not violations, violations=violations, margins=tuple(margins)
    )


def build(params: QubitDaviesParams, validate_params: bool = True) -> np.ndarray:
    """Superoperator of the map; raises :class:`InvalidParams` naming the
    first violated constraint unless validation is disabled."""
    if validate_params:
        res = validate(params)
        if not res.valid:
            name, margin = res.violations[0]
            raise InvalidParams(f"constraint '{name}' violated by {-margin:.3e}")
    a, c, b = params.a, params.c, params.b
    return np.array(
        [
            [1.0 - a, 0.0, 0.0, b],
            [0.0, c, 0.0, 0.0],
            [0.0, 0.0, c, 0.0],
            [a, 0.0, 0.0, 1.0 - b],
        ]
    )


def build_batch(a, c, p: float) -> np.ndarray:
    """Stacked superoperators for arrays of ``(a, c)`` at fixed ``p``."""
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    _check_p(p)
    b = a * p / (1.0 - p)
    out = np.zeros(a.shape + (4, 4))
    out[..., 0, 0] = 1.0 - a
    out[..., 0, 3] = b
    out[..., 1, 1] = c
    out[..., 2, 2] = c
    out[..., 3, 0] = a
    out[..., 3, 3] = 1.0 - b
    return out


def gibbs_of(params_or_p) -> channels.GibbsState:
    """Gibbs state ``diag(p, 1-p)`` attached to a parameter set or weight."""
    p = params_or_p.p if hasattr(params_or_p, "p") else float(params_or_p)
    _check_p(p)
    return channels.GibbsState.from_probabilities([p, 1.0 - p])


def from_rates(rates: QubitRates) -> QubitDaviesParams:
    """Time map ``a = (1-p)(1 - e^{-A t})``, ``c = e^{-Gamma t}``.

    Raises :class:`RateOrderViolated` when the dephasing rate drops below
    half the relaxation rate (the map would leave the admissible region).
    """
    if rates.dephase_rate < rates.relax_rate / 2.0:
        raise RateOrderViolated(
            f"dephasing rate {rates.dephase_rate} < relaxation rate / 2 = "
            f"{rates.relax_rate / 2.0}"
        )
    a = (1.0 - rates.p) * (1.0 - math.exp(-rates.relax_rate * rates.t))
    c = math.exp(-rates.dephase_rate * rates.t)
    return QubitDaviesParams(a=a, c=c, p=rates.p)


def generator_bloch(rt: RelaxationTimes) -> np.ndarray:
    """Generator acting on ``(1, u, v, w)``."""
    return np.array(
        [
            [0.0, 0.0, 0.0, 0.0],
            [0.0, -1.0 / rt.tau1, 0.0, 0.0],
            [0.0, 0.0, -1.0 / rt.tau1, 0.0],
            [rt.w_eq / rt.tau3, 0.0, 0.0, -1.0 / rt.tau3],
        ]
    )


def generator_super(rt: RelaxationTimes) -> np.ndarray:
    """Generator in the matrix-unit (vectorized) basis; its outer population
    block is a classical detailed-balance generator for ``(p, 1-p)``."""
    p = rt.p
    return np.array(
        [
            [-(1.0 - p) / rt.tau3, 0.0, 0.0, p / rt.tau3],
            [0.0, -1.0 / rt.tau1, 0.0, 0.0],
            [0.0, 0.0, -1.0 / rt.tau1, 0.0],
            [(1.0 - p) / rt.tau3, 0.0, 0.0, -p / rt.tau3],
        ]
    )


def _check_semigroup(rt: RelaxationTimes) -> None:
    if rt.tau1 > 2.0 * rt.tau3:
        raise SemigroupConstraintViolated(
            f"tau1 = {rt.tau1} exceeds 2*tau3 = {2.0 * rt.tau3}"
        )


def evolved_bloch(rt: RelaxationTimes) -> np.ndarray:
    """Closed-form ``exp(t * generator)`` in the Bloch basis."""
    e1 = math.exp(-rt.t / rt.tau1)
    e3 = math.exp(-rt.t / rt.tau3)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, e1, 0.0, 0.0],
            [0.0, 0.0, e1, 0.0],
            [(1.0 - e3) * rt.w_eq, 0.0, 0.0, e3],
        ]
    )


def evolved_super(rt: RelaxationTimes) -> np.ndarray:
    """Closed-form ``exp(t * generator)`` in the matrix-unit basis."""
    p = rt.p
    e1 = math.exp(-rt.t / rt.tau1)
    e3 = math.exp(-rt.t / rt.tau3)
    return np.array(
        [
            [1.0 - (1.0 - e3) * (1.0 - p), 0.0, 0.0, (1.0 - e3) * p],
            [0.0, e1, 0.0, 0.0],
            [0.0, 0.0, e1, 0.0],
            [(1.0 - e3) * (1.0 - p), 0.0, 0.0, 1.0 - (1.0 - e3) * p],
        ]
    )


def evolve(rt: RelaxationTimes) -> BlochAffineMap:
    """Bloch affine map at time ``t``; raises
    :class:`SemigroupConstraintViolated` when ``tau1 > 2*tau3``."""
    _check_semigroup(rt)
    e1 = math.exp(-rt.t / rt.tau1)
    e3 = math.exp(-rt.t / rt.tau3)
    return BlochAffineMap(eta1=e1, eta2=e1, eta3=e3, kappa3=(1.0 - e3) * rt.w_eq)


def to_bloch(params: QubitDaviesParams) -> BlochAffineMap:
    """Bloch-ellipsoid data: axes ``(c, c, 1-a/(1-p))``, shift
    ``a(2p-1)/(1-p)``."""
    eta3 = 1.0 - params.a / (1.0 - params.p)
    kappa3 = params.a * (2.0 * params.p - 1.0) / (1.0 - params.p)
    return BlochAffineMap(eta1=params.c, eta2=params.c, eta3=eta3, kappa3=kappa3)


# change of basis between (1, u, v, w) Bloch coordinates and row-major vec:
# vec(rho) = _BLOCH_TO_VEC @ (1, u, v, w)
_BLOCH_TO_VEC = 0.5 * np.array(
    [
        [1.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, -1.0j, 0.0],
        [0.0, 1.0, 1.0j, 0.0],
        [1.0, 0.0, 0.0, -1.0],
    ]
)
_VEC_TO_BLOCH = np.array(
    [
        [1.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0j, -1.0j, 0.0],
        [1.0, 0.0, 0.0, -1.0],
    ]
)


def bloch_to_super(bloch: BlochAffineMap) -> np.ndarray:
    """Matrix-unit-basis superoperator of a Bloch affine map.

    Exact inverse of :func:`to_bloch` composed with :func:`build`:
    ``bloch_to_super(to_bloch(params)) == build(params)`` to rounding.
    """
    m = _BLOCH_TO_VEC @ bloch.to_matrix().astype(complex) @ _VEC_TO_BLOCH
    if np.max(np.abs(m.imag)) <= 1e-14 * max(1.0, float(np.linalg.norm(m))):
        return m.real.astype(float)
    return m


def candidate_generator(params: QubitDaviesParams) -> np.ndarray:
    """Logarithm of the map under the semigroup ansatz (unit time).

    Rates are read off as ``A = -log(1 - a/(1-p))`` and ``Gamma = -log c``;
    raises :class:`LogDoesNotExist` when either factor is nonpositive.
    The returned generator is conditionally completely positive exactly when
    the parameters satisfy the admissibility constraints.
    """
    eta3 = 1.0 - params.a / (1.0 - params.p)
    if params.c <= 0.0 or eta3 <= 0.0:
        raise LogDoesNotExist("map has a vanishing damping factor; no generator")
    relax = -math.log(eta3)
    dephase = -math.log(params.c)
    p = params.p
    return np.array(
        [
            [-relax * (1.0 - p), 0.0, 0.0, relax * p],
            [0.0, -dephase, 0.0, 0.0],
            [0.0, 0.0, -dephase, 0.0],
            [relax * (1.0 - p), 0.0, 0.0, -relax * p],
        ]
    )


# ---------------------------------------------------------------------------
# Parameter-region geometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegionSample:
    """Grid classification of the ``(a, c)`` parameter square at fixed ``p``
    plus the closed-form boundary curve ``c = sqrt(1 - a/(1-p))``."""

    p: float
    a_values: np.ndarray
    c_values: np.ndarray
    valid: np.ndarray  # shape (len(a_values), len(c_values))
    boundary_a: np.ndarray
    boundary_c: np.ndarray

    def points(self) -> list[tuple[float, float]]:
        """Valid ``(a, c)`` pairs, ordered by (a-index, c-index)."""
        out = []
        for i, a in enumerate(self.a_values):
            for j, c in enumerate(self.c_values):
                if self.valid[i, j]:
                    out.append((float(a), float(c)))
        return out


def region_sample(p: float, grid: int) -> RegionSample:
    """Classify a ``grid x grid`` lattice over ``[0,1]^2`` in the ``(a, c)``
    plane; every emitted valid point satisfies the admissibility constraints
    exactly (same arithmetic as :func:`validate`)."""
    _check_p(p)
    if grid < 2:
        raise InvalidParams("grid must be at least 2")
    a_values = np.linspace(0.0, 1.0, grid)
    c_values = np.linspace(0.0, 1.0, grid)
    aa = a_values[:, None]
    cc = c_values[None, :]
    valid = (
        (aa >= 0.0)
        & (aa <= 1.0)
        & (aa + p <= 1.0)
        & (cc >= 0.0)
        & (cc * cc <= 1.0 - aa / (1.0 - p))
    )
    boundary_a = np.linspace(0.0, 1.0 - p, grid)
    boundary_c = np.sqrt(np.maximum(0.0, 1.0 - boundary_a / (1.0 - p)))
    return RegionSample(
        p=p,
        a_values=a_values,
        c_values=c_values,
        valid=valid,
        boundary_a=boundary_a,
        boundary_c=boundary_c,
    )


@dataclass(frozen=True)
class SectionPoint:
    eta1: float
    eta3: float
    params: QubitDaviesParams
    superoperator: np.ndarray


def bistochastic_section(grid: int) -> list[SectionPoint]:
    """Unital maps at ``p = 1/2`` with Bloch axes ``(eta1, eta1, eta3)``.

    For each ``eta3`` on a ``grid``-point lattice of ``[0, 1]``, ``eta1``
    ranges over ``grid`` points of ``[0, sqrt(eta3)]`` (the admissible
    stretch), so every emitted map lies in the plane spanned by the identity,
    the phase-flip channel and the completely depolarizing channel.
    """
    if grid < 2:
        raise InvalidParams("grid must be at least 2")
    points = []
    for eta3 in np.linspace(0.0, 1.0, grid):
        cmax = math.sqrt(eta3)
        for eta1 in np.linspace(0.0, cmax, grid):
            params = QubitDaviesParams(a=(1.0 - eta3) / 2.0, c=float(eta1), p=0.5)
            points.append(
                SectionPoint(
                    eta1=float(eta1),
                    eta3=float(eta3),
                    params=params,
                    superoperator=build(params, validate_params=False),
                )
            )
    return points


# ---------------------------------------------------------------------------
# Minimal output entropy, closed form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinOutputEntropy:
    value: float
    minimizer_mu: float
    case: int
    output_eigenvalues: tuple[float, float]


def _radicand(params: QubitDaviesParams, mu: float) -> float:
    """Discriminant f(mu) = (d1 - d2)^2 + 4 c^2 mu (1 - mu) of the output of
    the pure state with upper-level weight mu."""
    u = 1.0 - params.a - params.b
    v = 1.0 - 2.0 * params.b
    return (2.0 * u * mu - v) ** 2 + 4.0 * params.c**2 * mu * (1.0 - mu)


def min_output_entropy_analytic(
    params: QubitDaviesParams, base: float = 2.0
) -> MinOutputEntropy:
    """Closed-form minimal output entropy over pure inputs.

    Three regimes, decided by ``u = 1-a-b`` and ``v = 1-2b`` (ties go to the
    lower-numbered case):

    1. ``c^2 <= u^2``: eigenstate minimizer ``mu = 0``;
    2. ``u^2 < c^2 <= u*v``: the interior stationary point of the output
       eigenvalue gap falls outside ``[0, 1]``, minimizer again ``mu = 0``;
    3. ``c^2 > u*v``: true superposition minimizer
       ``mu0 = (uv - c^2) / (2(u^2 - c^2))``.

    The entropy is computed from the exact 2x2 eigenvalue split
    ``(1 +- sqrt(f(mu)))/2``; logarithm base 2 by default.
    """
    res = validate(params, tol=1e-12)
    if not res.valid:
        name, margin = res.violations[0]
        raise InvalidParams(f"constraint '{name}' violated by {-margin:.3e}")
    u = 1.0 - params.a - params.b
    v = 1.0 - 2.0 * params.b
    c2 = params.c**2
    if c2 <= u * u:
        case, mu = 1, 0.0
    elif c2 <= u * v:
        case, mu = 2, 0.0
    else:
        case = 3
        mu = (u * v - c2) / (2.0 * (u * u - c2))
    root = math.sqrt(min(1.0, max(0.0, _radicand(params, mu))))
    hi, lo = (1.0 + root) / 2.0, (1.0 - root) / 2.0
    value = float(entropy.shannon(np.array([hi, lo]), base=base))
    return MinOutputEntropy(
        value=value, minimizer_mu=mu, case=case, output_eigenvalues=(hi, lo)
    )


def moe_case_boundary(rt: RelaxationTimes) -> bool:
    """Whether the evolved map at time ``t`` sits in the eigenstate-minimizer
    regime (case 1); for ``t > 0`` this is equivalent to ``tau1 <= tau3``."""
    _check_semigroup(rt)
    params = from_rates(rt.to_rates())
    u = 1.0 - params.a - params.b
    return params.c**2 <= u * u


def random_valid_params(rng: np.random.Generator, p: float | None = None) -> QubitDaviesParams:
    """Uniform draw from the admissible box at (given or random) ``p``."""
    if p is None:
        p = float(rng.uniform(0.02, 0.5))
    _check_p(p)
    a = float(rng.uniform(0.0, 1.0 - p))
    cmax = math.sqrt(max(0.0, 1.0 - a / (1.0 - p)))
    c = float(rng.uniform(0.0, cmax))
    return QubitDaviesParams(a=a, c=c, p=p)
