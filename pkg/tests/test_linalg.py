import numpy as np
import pytest

from davieskit import linalg
from davieskit.errors import (
    DegenerateSpectrum,
    FunctionUndefined,
    InvalidProjector,
    NonHermitianInput,
)

from conftest import random_hermitian


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def charpoly_roots(m):
    """Eigenvalues as roots of det(m - x*I), coefficients via the
    Faddeev-LeVerrier trace recursion (independent of any eigensolver on m)."""
    n = m.shape[0]
    coeffs = [1.0 + 0j]
    aux = np.zeros_like(m)
    eye = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        aux = m @ aux + coeffs[-1] * eye
        coeffs.append(-np.trace(m @ aux) / k)
    return np.roots(np.array(coeffs))


def expm_taylor(m, k_max=60):
    """Truncated exponential series with compensated (Kahan) summation."""
    n = m.shape[0]
    acc = np.eye(n, dtype=complex)
    comp = np.zeros_like(acc)
    term = np.eye(n, dtype=complex)
    for k in range(1, k_max + 1):
        term = term @ m / k
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


# ---------------------------------------------------------------------------
# eig_hermitian
# ---------------------------------------------------------------------------


def test_eig_hermitian_identity():
    w, v = linalg.eig_hermitian(np.eye(2))
    assert np.allclose(w, [1.0, 1.0])
    assert np.allclose(v @ v.conj().T, np.eye(2))


def test_eig_hermitian_diagonal_descending():
    w, _ = linalg.eig_hermitian(np.diag([0.3, 0.7]))
    assert np.allclose(w, [0.7, 0.3])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_eig_hermitian_vs_charpoly_oracle(rng, n):
    for _ in range(20):
        h = random_hermitian(rng, n)
        w, v = linalg.eig_hermitian(h)
        roots = np.sort(charpoly_roots(h).real)[::-1]
        assert np.max(np.abs(w - roots)) < 1e-10
        # reconstruction and orthonormality contracts
        assert np.linalg.norm(h - (v * w) @ v.conj().T) <= 1e-12 * max(
            1.0, np.linalg.norm(h)
        )
        assert np.linalg.norm(v.conj().T @ v - np.eye(n)) < 1e-12


def test_eig_hermitian_trace_identity(rng):
    for n in (2, 3, 4, 9):
        h = random_hermitian(rng, n)
        w, _ = linalg.eig_hermitian(h)
        assert abs(w.sum() - np.trace(h).real) < 1e-12 * max(1.0, abs(np.trace(h)))


def test_eig_hermitian_rejects_nonhermitian():
    with pytest.raises(NonHermitianInput):
        linalg.eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


# ---------------------------------------------------------------------------
# expm
# ---------------------------------------------------------------------------


def test_expm_zero_time_exact():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(linalg.expm(m, 0.0), np.eye(2))


def test_expm_diagonal():
    out = linalg.expm(np.diag([-1.0, -2.0]), 1.0)
    assert np.allclose(out, np.diag([np.exp(-1.0), np.exp(-2.0)]), atol=1e-14)


def test_expm_vs_taylor_oracle(rng):
    for _ in range(25):
        g = rng.normal(size=(3, 3))
        assert np.max(np.abs(linalg.expm(g, 1.0) - expm_taylor(g))) < 1e-11


@pytest.mark.parametrize("n", [3, 9])
def test_expm_semigroup_property(rng, n):
    for _ in range(10):
        g = rng.normal(size=(n, n)) * 0.4
        s, t = rng.uniform(0.0, 5.0, 2)
        lhs = linalg.expm(g, s) @ linalg.expm(g, t)
        rhs = linalg.expm(g, s + t)
        assert np.max(np.abs(lhs - rhs)) < 1e-10 * max(1.0, np.max(np.abs(rhs)))


# ---------------------------------------------------------------------------
# func_of_3x3
# ---------------------------------------------------------------------------


def _random_db_stochastic_positive(rng):
    # small-rate detailed-balance block with positive distinct eigenvalues
    p = np.sort(rng.uniform(0.1, 1.0, 3))
    p = p / p.sum()
    f12, f13, f23 = rng.uniform(0.02, 0.3, 3)
    F = np.array(
        [
            [0.0, f12, f13],
            [f12 * p[1] / p[0], 0.0, f23],
            [f13 * p[2] / p[0], f23 * p[2] / p[1], 0.0],
        ]
    )
    np.fill_diagonal(F, 1.0 - F.sum(axis=0))
    return F if np.all(np.diag(F) > 0) else None


def test_func_identity_function_reproduces_input(rng):
    m = rng.normal(size=(3, 3))
    out = linalg.func_of_3x3(m, lambda x: x)
    assert np.max(np.abs(out - m)) < 1e-12 * max(1.0, np.max(np.abs(m)))


def test_func_log_diagonal():
    out = linalg.func_of_3x3(np.diag([1.0, 0.5, 0.2]), linalg.real_log)
    assert np.allclose(out, np.diag([0.0, np.log(0.5), np.log(0.2)]), atol=1e-13)


def test_func_log_exp_round_trip(rng):
    done = 0
    while done < 15:
        F = _random_db_stochastic_positive(rng)
        if F is None:
            continue
        eigs = np.sort(np.linalg.eigvals(F).real)
        if eigs[0] <= 1e-3 or eigs[2] - eigs[1] < 1e-3 or eigs[1] - eigs[0] < 1e-3:
            continue
        g = linalg.func_of_3x3(F, linalg.real_log)
        assert np.max(np.abs(linalg.expm(g, 1.0) - F)) < 1e-9
        done += 1


def test_func_exp_agrees_with_expm(rng):
    for _ in range(15):
        m = rng.normal(size=(3, 3))
        if min(
            abs(a - b)
            for i, a in enumerate(np.linalg.eigvals(m))
            for b in np.linalg.eigvals(m)[i + 1 :]
        ) < 1e-4 * np.linalg.norm(m):
            continue
        out = linalg.func_of_3x3(m, np.exp)
        assert np.max(np.abs(out - linalg.expm(m))) < 1e-10 * max(
            1.0, np.max(np.abs(linalg.expm(m)))
        )


def test_func_real_output_for_real_spectrum(rng):
    for _ in range(10):
        F = _random_db_stochastic_positive(rng)
        if F is None:
            continue
        eigs = np.sort(np.linalg.eigvals(F).real)
        if eigs[0] <= 1e-3 or np.min(np.diff(eigs)) < 1e-3:
            continue
        out = linalg.func_of_3x3(F, linalg.real_log)
        assert np.isrealobj(out)


def test_func_degenerate_spectrum_raises():
    with pytest.raises(DegenerateSpectrum):
        linalg.func_of_3x3(np.eye(3), np.exp)


def test_func_undefined_function_raises():
    with pytest.raises(FunctionUndefined):
        linalg.func_of_3x3(np.diag([1.0, 0.5, -0.2]), linalg.real_log)
    with pytest.raises(FunctionUndefined):
        linalg.func_of_3x3(np.diag([1.0, 0.5, 0.0]), np.log)  # log 0 -> -inf


# ---------------------------------------------------------------------------
# psd_on_subspace
# ---------------------------------------------------------------------------


def test_psd_identity_any_projector():
    p = np.diag([1.0, 0.0])
    assert linalg.psd_on_subspace(np.eye(2), p)
    assert linalg.psd_on_subspace(np.eye(2), np.eye(2))


def test_psd_sign_case():
    m = np.diag([1.0, -1.0])
    assert linalg.psd_on_subspace(m, np.diag([1.0, 0.0]))
    assert not linalg.psd_on_subspace(m, np.eye(2))


def test_psd_invalid_projector():
    with pytest.raises(InvalidProjector):
        linalg.psd_on_subspace(np.eye(2), np.array([[0.5, 0.0], [0.0, 0.0]]))
    with pytest.raises(InvalidProjector):
        linalg.psd_on_subspace(np.eye(2), np.array([[1.0, 0.3], [0.0, 0.0]]))


def test_subspace_min_eig_rank_zero():
    assert linalg.subspace_min_eig(np.eye(2), np.zeros((2, 2))) == np.inf
