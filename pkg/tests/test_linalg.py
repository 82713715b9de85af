import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from measproc import linalg as la
from measproc.catalog import CNOT, SIGMA_X, SIGMA_Y, SIGMA_Z
from measproc.errors import DimensionError, NotHermitianError, NotNormalizedError, SpectrumError

from randmodels import random_density, random_hermitian

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def partial_trace_by_index_sum(m, ds, da):
    out = np.zeros((ds, ds), dtype=complex)
    for i in range(ds):
        for j in range(ds):
            out[i, j] = sum(m[i * da + k, j * da + k] for k in range(da))
    return out


def test_tensor_identity():
    np.testing.assert_array_equal(la.tensor(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_sigmaz_with_projector():
    out = la.tensor(SIGMA_Z, np.diag([1, 0]))
    np.testing.assert_array_equal(out, np.diag([1, 0, -1, 0]))


def test_tensor_block_structure(rng):
    m1 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m2 = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    out = la.tensor(m1, m2)
    assert out.shape == (6, 6)
    for i in range(2):
        for j in range(2):
            np.testing.assert_allclose(out[3 * i:3 * i + 3, 3 * j:3 * j + 3], m1[i, j] * m2)


def test_tensor_acts_factorwise_on_products(rng):
    m1, m2 = random_hermitian(rng, 2), random_hermitian(rng, 3)
    u, v = rng.normal(size=2), rng.normal(size=3)
    np.testing.assert_allclose(la.tensor(m1, m2) @ np.kron(u, v), np.kron(m1 @ u, m2 @ v))


def test_object_major_index_convention():
    # |s=1, a=0> sits at row 1 * dim_a + 0
    ds, da = 2, 3
    op = la.tensor(np.diag([0, 1]), np.diag([1, 0, 0]))
    assert op[1 * da + 0, 1 * da + 0] == 1
    assert np.count_nonzero(op) == 1


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_tensor_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)) for d in (2, 3, 2))
    left = la.tensor(la.tensor(a, b), c)
    right = la.tensor(a, la.tensor(b, c))
    assert np.max(np.abs(left - right)) <= 1e-12


def test_partial_trace_product_state(rng):
    rs, ra = random_density(rng, 2), random_density(rng, 3)
    out = la.partial_trace_apparatus(la.tensor(rs, 2.5 * ra), 2, 3)
    np.testing.assert_allclose(out, rs * 2.5, atol=1e-12)


def test_partial_trace_bell_state():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    out = la.partial_trace_apparatus(np.outer(phi, phi), 2, 2)
    np.testing.assert_allclose(out, np.eye(2) / 2, atol=1e-15)


def test_partial_trace_matches_index_sum(rng):
    ms = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    ma = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m = la.tensor(ms, ma)
    out = la.partial_trace_apparatus(m, 3, 2)
    np.testing.assert_allclose(out, partial_trace_by_index_sum(m, 3, 2), atol=1e-12)
    np.testing.assert_allclose(out, ms * np.trace(ma), atol=1e-12)


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionError):
        la.partial_trace_apparatus(np.eye(6), 2, 2)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_partial_trace_properties(seed, ds, da):
    rng = np.random.default_rng(seed)
    n = ds * da
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    out = la.partial_trace_apparatus(m, ds, da)
    assert abs(np.trace(out) - np.trace(m)) <= 1e-10
    np.testing.assert_allclose(out, partial_trace_by_index_sum(m, ds, da), atol=1e-12)
    rs, ra = random_density(rng, ds), random_density(rng, da)
    prod = la.partial_trace_apparatus(la.tensor(rs, ra), ds, da)
    assert np.max(np.abs(prod - rs * np.trace(ra))) <= 1e-10


def test_spectral_decompose_sigmaz():
    obs = la.spectral_decompose(SIGMA_Z)
    assert obs.eigenvalues == (1.0, -1.0)
    np.testing.assert_allclose(obs.projector(1), np.diag([1, 0]), atol=1e-15)
    np.testing.assert_allclose(obs.projector(-1), np.diag([0, 1]), atol=1e-15)


def test_spectral_decompose_degenerate_identity():
    obs = la.spectral_decompose(np.eye(3))
    assert len(obs) == 1
    assert obs.eigenvalues[0] == pytest.approx(1.0)
    np.testing.assert_allclose(obs.projector(1.0), np.eye(3), atol=1e-12)


def test_spectral_decompose_sigmax():
    obs = la.spectral_decompose(SIGMA_X)
    np.testing.assert_allclose(obs.projector(1), (np.eye(2) + SIGMA_X) / 2, atol=1e-12)
    np.testing.assert_allclose(obs.projector(-1), (np.eye(2) - SIGMA_X) / 2, atol=1e-12)


def test_spectral_decompose_descending_and_clustered():
    h = np.diag([0.0, 2.0, 2.0 + 1e-12, -1.0])
    obs = la.spectral_decompose(h)
    assert len(obs) == 3
    assert list(obs.eigenvalues) == sorted(obs.eigenvalues, reverse=True)
    np.testing.assert_allclose(obs.projector(2.0), np.diag([0, 1, 1, 0]), atol=1e-12)


def test_spectral_decompose_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        la.spectral_decompose(np.array([[0, 1], [0, 0]]))


def test_observable_lookup_outside_spectrum():
    with pytest.raises(SpectrumError):
        la.spectral_decompose(SIGMA_Z).projector(0.5)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 8), st.booleans())
def test_spectral_decompose_invariants(seed, d, degenerate):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, d)
    if degenerate:
        w, v = np.linalg.eigh(h)
        w[: d // 2] = w[0]
        h = (v * w) @ v.conj().T
    obs = la.spectral_decompose(h)
    projs = obs.projectors
    assert np.max(np.abs(sum(projs) - np.eye(d))) <= 1e-8
    for i, p in enumerate(projs):
        for j, q in enumerate(projs):
            expected = p if i == j else np.zeros_like(p)
            assert np.max(np.abs(p @ q - expected)) <= 1e-8
    recon = sum(a * p for a, p in obs)
    assert np.max(np.abs(recon - h)) <= 1e-8
    vals = obs.eigenvalues
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_commutator_pauli():
    np.testing.assert_allclose(la.commutator(SIGMA_X, SIGMA_Y), 2j * SIGMA_Z)


def test_commutator_self(rng):
    m = rng.normal(size=(3, 3))
    np.testing.assert_array_equal(la.commutator(m, m), np.zeros((3, 3)))


def test_commutator_against_explicit_products():
    d = np.diag([1.0, 2.0])
    x = np.array([[0, 3.0], [5.0, 0]])
    out = la.commutator(d, x)
    brute = np.array([[sum(d[i, k] * x[k, j] - x[i, k] * d[k, j] for k in range(2))
                       for j in range(2)] for i in range(2)])
    np.testing.assert_allclose(out, brute)
    assert out[0, 0] == out[1, 1] == 0
    assert out[0, 1] == -3.0 and out[1, 0] == 5.0


def test_commutator_dimension_mismatch():
    with pytest.raises(DimensionError):
        la.commutator(np.eye(2), np.eye(3))


def test_predicates():
    assert la.is_unitary(CNOT)
    assert not la.is_unitary(2 * np.eye(2))
    assert not la.is_psd(-np.eye(2))
    assert la.is_psd(np.diag([1.0, 0.0]))
    assert la.operator_distance(SIGMA_X, SIGMA_X) == 0
    assert la.operator_distance(np.eye(2), np.zeros((2, 2))) == pytest.approx(np.sqrt(2))
    with pytest.raises(DimensionError):
        la.operator_distance(np.eye(2), np.eye(3))


def test_unitary_exp_matches_scipy(rng):
    from scipy.linalg import expm
    h = random_hermitian(rng, 4)
    np.testing.assert_allclose(la.unitary_exp(h, 0.7, 1.3), expm(-1j * h * 0.7 / 1.3),
                               atol=1e-12)


def test_as_ket_checks_norm():
    with pytest.raises(NotNormalizedError):
        la.as_ket([1, 1])
    np.testing.assert_array_equal(la.as_ket([0, 1]), [0, 1])
