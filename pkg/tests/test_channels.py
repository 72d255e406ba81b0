import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from davieskit import channels, linalg, qubit, qutrit
from davieskit.errors import (
    DimensionMismatch,
    InvalidParams,
    NonPhysicalOutput,
    NotCP,
    TraceNotKilled,
    ZeroGap,
)

from conftest import random_density_matrix

TRANSPOSE_QUBIT = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)


def depolarizing_superop(n):
    """rho -> tr(rho) * I/n."""
    out = np.zeros((n * n, n * n), dtype=complex)
    target = channels.vectorize(np.eye(n, dtype=complex) / n)
    for i in range(n):
        out[:, i * n + i] = target
    return out


# ---------------------------------------------------------------------------
# vectorization
# ---------------------------------------------------------------------------


def test_vectorize_diagonal():
    p = 0.3
    assert np.array_equal(
        channels.vectorize(np.diag([p, 1 - p])), np.array([p, 0.0, 0.0, 1 - p])
    )


def test_vectorize_plus_state():
    plus = np.full((2, 2), 0.5)
    assert np.array_equal(channels.vectorize(plus), np.full(4, 0.5))


def test_vectorize_qutrit_matrix_unit():
    e = np.zeros((3, 3))
    e[0, 1] = 1.0
    v = channels.vectorize(e)
    assert v[1] == 1.0 and v.sum() == 1.0


@settings(max_examples=30)
@given(st.integers(2, 3), st.integers(0, 10**9))
def test_devectorize_inverts_vectorize(n, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    assert np.array_equal(channels.devectorize(channels.vectorize(m)), m)


def test_devectorize_length_mismatch():
    with pytest.raises(DimensionMismatch):
        channels.devectorize(np.zeros(5))


# ---------------------------------------------------------------------------
# apply
# ---------------------------------------------------------------------------


def test_apply_identity(rng):
    rho = random_density_matrix(rng, 2)
    out = channels.apply_channel(np.eye(4), rho)
    assert np.allclose(out, rho)


def test_apply_total_relaxation(rng):
    p = 0.3
    phi = qubit.build(qubit.QubitDaviesParams(a=1 - p, c=0.0, p=p))
    rho = random_density_matrix(rng, 2)
    assert np.allclose(channels.apply_channel(phi, rho), np.diag([p, 1 - p]), atol=1e-12)


def test_apply_davies_on_plus_state():
    phi = qubit.build(qubit.QubitDaviesParams(a=0.3, c=0.5, p=0.25))
    plus = np.full((2, 2), 0.5, dtype=complex)
    out = channels.apply_channel(phi, plus)
    # direct matrix-vector arithmetic: diag = (0.7+0.1)/2, (0.3+0.9)/2
    assert np.allclose(out, np.array([[0.4, 0.25], [0.25, 0.6]]), atol=1e-15)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        channels.apply_channel(np.eye(4), np.eye(3))


def test_apply_flags_nonphysical_output():
    bad = qubit.build(qubit.QubitDaviesParams(a=0.0, c=1.5, p=0.3), validate_params=False)
    plus = np.full((2, 2), 0.5, dtype=complex)
    with pytest.raises(NonPhysicalOutput):
        channels.apply_channel(bad, plus)
    channels.apply_channel(bad, plus, validate=False)  # diagnostics path


# ---------------------------------------------------------------------------
# Choi matrix and complete positivity
# ---------------------------------------------------------------------------


def test_choi_identity_is_max_entangled():
    c = channels.choi_matrix(np.eye(4))
    assert np.allclose(c, channels.maximally_entangled_projector(2))
    w = np.linalg.eigvalsh(c)
    assert np.sum(w > 1e-12) == 1 and abs(w[-1] - 1.0) < 1e-12


def test_choi_depolarizing_is_maximally_mixed():
    c = channels.choi_matrix(depolarizing_superop(2))
    assert np.allclose(c, np.eye(4) / 4.0)


def test_choi_reshuffle_matches_explicit_sum(rng):
    for n in (2, 3):
        phi = rng.normal(size=(n * n, n * n)) + 1j * rng.normal(size=(n * n, n * n))
        explicit = np.zeros((n * n, n * n), dtype=complex)
        for i in range(n):
            for j in range(n):
                e = np.zeros((n, n), dtype=complex)
                e[i, j] = 1.0
                out = channels.devectorize(phi @ channels.vectorize(e))
                explicit += np.kron(out, e)
        explicit /= n
        assert np.allclose(channels.choi_matrix(phi), explicit, atol=1e-13)


def test_choi_batched_matches_single(rng):
    phis = rng.normal(size=(5, 4, 4))
    batched = channels.choi_matrix(phis.astype(complex))
    for k in range(5):
        assert np.allclose(batched[k], channels.choi_matrix(phis[k].astype(complex)))


def test_cp_identity():
    ok, cert = channels.is_completely_positive(np.eye(4))
    assert ok and abs(cert) < 1e-12


def test_cp_transposition_map():
    ok, cert = channels.is_completely_positive(TRANSPOSE_QUBIT)
    assert not ok and abs(cert - (-0.5)) < 1e-12


def test_cp_weaker_than_admissibility():
    # c above the admissible bound at (a, p) = (0.6, 0.25) can still be CP
    params = qubit.QubitDaviesParams(a=0.6, c=0.5, p=0.25)
    assert not qubit.validate(params).valid
    ok, cert = channels.is_completely_positive(qubit.build(params, validate_params=False))
    assert ok and cert > 0
    params2 = qubit.QubitDaviesParams(a=0.6, c=0.6, p=0.25)
    ok2, cert2 = channels.is_completely_positive(
        qubit.build(params2, validate_params=False)
    )
    assert not ok2 and cert2 < 0


def test_cp_davies_example():
    phi = qubit.build(qubit.QubitDaviesParams(a=0.3, c=0.5, p=0.25))
    ok, cert = channels.is_completely_positive(phi)
    assert ok and cert >= -1e-12


# ---------------------------------------------------------------------------
# Kraus decomposition
# ---------------------------------------------------------------------------


def test_kraus_identity_channel():
    ops = channels.kraus_from_choi(channels.choi_matrix(np.eye(4)))
    assert len(ops) == 1
    k = ops[0]
    assert np.allclose(k @ k.conj().T, np.eye(2), atol=1e-12)
    assert np.allclose(k / k[0, 0], np.eye(2), atol=1e-10)


def test_kraus_depolarizing():
    phi = depolarizing_superop(2)
    ops = channels.kraus_from_choi(channels.choi_matrix(phi))
    assert len(ops) == 4
    assert np.allclose(channels.superoperator_from_kraus(ops), phi, atol=1e-10)
    total = sum(k.conj().T @ k for k in ops)
    assert np.allclose(total, np.eye(2), atol=1e-10)


def test_kraus_davies_reconstruction():
    phi = qubit.build(qubit.QubitDaviesParams(a=0.3, c=0.5, p=0.25))
    ops = channels.kraus_from_choi(channels.choi_matrix(phi))
    assert np.max(np.abs(channels.superoperator_from_kraus(ops) - phi)) < 1e-10


def test_kraus_reconstruction_over_sampled_region(rng):
    for _ in range(50):
        params = qubit.random_valid_params(rng)
        phi = qubit.build(params)
        ops = channels.kraus_from_choi(channels.choi_matrix(phi))
        assert np.max(np.abs(channels.superoperator_from_kraus(ops) - phi)) < 1e-10
        total = sum(k.conj().T @ k for k in ops)
        assert np.max(np.abs(total - np.eye(2))) < 1e-10


def test_kraus_rejects_non_cp():
    with pytest.raises(NotCP):
        channels.kraus_from_choi(channels.choi_matrix(TRANSPOSE_QUBIT))


# ---------------------------------------------------------------------------
# Gibbs states and the weighted inner product
# ---------------------------------------------------------------------------


def test_gibbs_infinite_temperature_uniform():
    g = channels.gibbs_state([1.0, 0.0], beta=0.0)
    assert np.allclose(g.probabilities, [0.5, 0.5])


def test_gibbs_ground_state_limit():
    g = channels.gibbs_state([1.0, 0.0], beta=700.0)
    assert np.allclose(g.probabilities, [0.0, 1.0], atol=1e-12)


def test_gibbs_direct_value():
    g = channels.gibbs_state([1.0, 0.0], beta=1.0)
    expected = np.exp(-1.0) / (1.0 + np.exp(-1.0))
    assert abs(g.probabilities[0] - expected) < 1e-15
    assert g.probabilities[0] < g.probabilities[1]


def test_gibbs_rejects_bad_input():
    with pytest.raises(InvalidParams):
        channels.gibbs_state([0.0, 1.0], beta=1.0)  # not decreasing
    with pytest.raises(InvalidParams):
        channels.GibbsState.from_temperature([1.0, 0.0], -1.0)
    with pytest.raises(InvalidParams):
        channels.GibbsState.from_temperature([1.0, 0.0], 0.0)


def test_beta_inner_gibbs_itself():
    g = channels.gibbs_state([1.0, 0.0], beta=1.0)
    rho = g.density_matrix()
    assert abs(channels.beta_inner(rho, rho, g) - 1.0) < 1e-14


def test_beta_inner_identity_weights():
    g = channels.GibbsState.from_probabilities([0.25, 0.75])
    val = channels.beta_inner(np.eye(2), np.eye(2), g)
    assert abs(val - (1 / 0.25 + 1 / 0.75)) < 1e-12


def test_beta_inner_conjugate_symmetry(rng):
    g = channels.GibbsState.from_probabilities([0.3, 0.7])
    for _ in range(10):
        x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        y = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        assert abs(
            channels.beta_inner(x, y, g) - np.conj(channels.beta_inner(y, x, g))
        ) < 1e-12
        assert channels.beta_inner(x, x, g).real > 0


# ---------------------------------------------------------------------------
# detailed balance
# ---------------------------------------------------------------------------


def test_db_identity_map():
    g = channels.GibbsState.from_probabilities([0.3, 0.7])
    res = channels.check_detailed_balance(np.eye(4), g)
    assert res.holds and res.max_violation == 0.0 and res.spectrum_real


def test_db_davies_map(rng):
    for _ in range(20):
        params = qubit.random_valid_params(rng)
        res = channels.check_detailed_balance(
            qubit.build(params), qubit.gibbs_of(params)
        )
        assert res.holds and res.spectrum_real


def test_db_fails_for_unitary_conjugation():
    u = np.diag([1.0, np.exp(1j * 0.7)])
    phi = np.kron(u, u.conj())
    g = channels.GibbsState.from_probabilities([0.3, 0.7])
    # fixes the Gibbs state but has a complex spectrum
    assert np.allclose(channels.apply_channel(phi, g.density_matrix()), g.density_matrix())
    res = channels.check_detailed_balance(phi, g)
    assert not res.holds and not res.spectrum_real


def test_db_implies_real_spectrum(rng):
    for _ in range(50):
        params = qubit.random_valid_params(rng)
        phi = qubit.build(params)
        res = channels.check_detailed_balance(phi, qubit.gibbs_of(params))
        if res.holds:
            assert res.max_imag_eig <= 1e-10


# ---------------------------------------------------------------------------
# conditional complete positivity of generators
# ---------------------------------------------------------------------------


def test_ccp_zero_generator():
    ok, cert = channels.is_ccp_generator(np.zeros((4, 4)))
    assert ok and abs(cert) < 1e-14


def test_ccp_valid_qubit_generator():
    rt = qubit.RelaxationTimes(tau1=1.0, tau3=1.0, w_eq=2 * 0.3 - 1.0, t=1.0)
    ok, cert = channels.is_ccp_generator(qubit.generator_super(rt))
    assert ok and cert >= -1e-12


def test_ccp_invalid_qubit_generator():
    rt = qubit.RelaxationTimes(tau1=3.0, tau3=1.0, w_eq=2 * 0.3 - 1.0, t=1.0)
    ok, cert = channels.is_ccp_generator(qubit.generator_super(rt))
    assert not ok and cert < 0
    # margin equals Gamma - A/2 = 1/tau1 - 1/(2 tau3)
    assert abs(cert - (1.0 / 3.0 - 0.5)) < 1e-12


def test_ccp_consistency_with_region(rng):
    # spot-check: admissible interior points have CCP log-generators
    for _ in range(20):
        params = qubit.random_valid_params(rng)
        if params.c < 1e-3 or 1.0 - params.a / (1.0 - params.p) < 1e-3:
            continue
        gen = qubit.candidate_generator(params)
        ok, _ = channels.is_ccp_generator(gen)
        assert ok


def test_ccp_rejects_trace_producing_map():
    with pytest.raises(TraceNotKilled):
        channels.is_ccp_generator(np.eye(4))


def test_ccp_exponentials_stay_cp(rng):
    rt = qubit.RelaxationTimes(tau1=0.8, tau3=1.0, w_eq=-0.4, t=1.0)
    gen = qubit.generator_super(rt)
    ok, _ = channels.is_ccp_generator(gen)
    assert ok
    for t in (0.1, 0.7, 2.5, 10.0):
        cp, _ = channels.is_completely_positive(linalg.expm(gen, t))
        assert cp


# ---------------------------------------------------------------------------
# ergodicity
# ---------------------------------------------------------------------------


def test_ergodic_total_relaxation():
    rt = qubit.RelaxationTimes(tau1=1.0, tau3=1.0, w_eq=-0.4, t=1.0)
    gibbs = qubit.gibbs_of(rt.p)
    assert channels.ergodic_limit_check(qubit.generator_super(rt), gibbs, horizon=10.0)


def test_ergodic_zero_generator():
    g = channels.GibbsState.from_probabilities([0.3, 0.7])
    with pytest.raises(ZeroGap):
        channels.ergodic_limit_check(np.zeros((4, 4)), g)


def test_ergodic_random_qutrit_generator(rng):
    params = qutrit.random_davies_params(rng)
    sm = qutrit.semigroup_member(params.transfer)
    gen = qutrit.build_generator(sm.generator, -np.log(params.lambdas))
    gibbs = qutrit.gibbs_of(params)
    assert channels.ergodic_limit_check(gen, gibbs, horizon=50.0, tol=1e-8)


# ---------------------------------------------------------------------------
# channel invariants
# ---------------------------------------------------------------------------


def test_trace_and_hermiticity_preserved_on_random_states(rng):
    params = qubit.QubitDaviesParams(a=0.3, c=0.5, p=0.25)
    phi = qubit.build(params)
    states = [random_density_matrix(rng, 2) for _ in range(1000)]
    for rho in states:
        out = channels.apply_channel(phi, rho, validate=False)
        assert abs(np.trace(out).real - 1.0) < 1e-12
        assert np.max(np.abs(out - out.conj().T)) < 1e-12


def test_davies_fixes_its_gibbs_state(rng):
    for _ in range(50):
        params = qubit.random_valid_params(rng)
        phi = qubit.build(params)
        target = qubit.gibbs_of(params).density_matrix()
        assert np.max(np.abs(channels.apply_channel(phi, target) - target)) < 1e-12


def test_trace_preserving_check():
    assert channels.is_trace_preserving(np.eye(4))
    assert channels.is_trace_preserving(qubit.build(qubit.QubitDaviesParams(0.3, 0.5, 0.25)))
    assert not channels.is_trace_preserving(0.9 * np.eye(4))
