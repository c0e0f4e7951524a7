import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ewitness import linalg, states
from ewitness.errors import DimMismatch, MissingDims, NotHermitian

import oracles


def test_is_hermitian_identity():
    assert linalg.is_hermitian(np.eye(4), 1e-12)


def test_is_hermitian_rejects_asymmetric():
    assert not linalg.is_hermitian(np.array([[0, 1], [0, 0]], dtype=complex), 1e-12)


def test_is_hermitian_rho_q():
    assert linalg.is_hermitian(states.rho_q_family(-1 / 3).mat, 1e-12)


def test_eig_diagonal():
    s = linalg.eig_hermitian(np.diag([1.0, 2.0, 3.0]).astype(complex))
    np.testing.assert_allclose(s.eigenvalues, [1, 2, 3], atol=1e-14)
    np.testing.assert_allclose(np.abs(s.eigenvectors), np.eye(3), atol=1e-14)


def test_eig_rho_q_spectrum():
    s = linalg.eig_hermitian(states.rho_q_family(-1 / 3).mat)
    np.testing.assert_allclose(s.eigenvalues, [0, 1 / 3, 1 / 3, 1 / 3], atol=1e-14)


def test_eig_random_6x6_reconstruction():
    rng = np.random.default_rng(6)
    h = oracles.random_hermitian(6, rng)
    s = linalg.eig_hermitian(h)
    assert np.linalg.norm(s.reconstruct() - h) <= 1e-10 * np.linalg.norm(h)
    np.testing.assert_allclose(s.eigenvalues, np.linalg.eigvalsh(h), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 9, 16, 36])
def test_eig_invariants(n):
    rng = np.random.default_rng(100 + n)
    h = oracles.random_hermitian(n, rng)
    s = linalg.eig_hermitian(h)
    v = s.eigenvectors
    assert np.all(np.diff(s.eigenvalues) >= 0)
    assert np.linalg.norm(s.reconstruct() - h) <= 1e-10 * np.linalg.norm(h)
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-10


def test_eig_deterministic_and_phase_canonical():
    rng = np.random.default_rng(1)
    h = oracles.random_hermitian(5, rng)
    a, b = linalg.eig_hermitian(h), linalg.eig_hermitian(h.copy())
    np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
    np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)
    for col in a.eigenvectors.T:
        k = np.argmax(np.abs(col))
        assert abs(col[k].imag) < 1e-14 and col[k].real > 0


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        linalg.eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_kron_identity():
    m, dims = linalg.kron(np.eye(2), np.eye(2))
    np.testing.assert_array_equal(m, np.eye(4))
    assert dims == (2, 2)


def test_kron_basis_projector():
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    m, _ = linalg.kron(p0, p1)
    expected = np.zeros((4, 4))
    expected[1, 1] = 1
    np.testing.assert_array_equal(m, expected)


def test_kron_bell_support():
    # |beta><beta| = (I + XX - YY + ZZ)/4 for two qubits
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    z = np.diag([1.0, -1.0]).astype(complex)
    terms = [linalg.kron(a, a)[0] for a in (x, y, z)]
    built = (np.eye(4) + terms[0] - terms[1] + terms[2]) / 4
    np.testing.assert_allclose(built, states.max_entangled(2).mat, atol=1e-15)
    xx = terms[0]
    assert xx[0, 3] == 1 and xx[3, 0] == 1


def test_partial_transpose_identity():
    np.testing.assert_array_equal(linalg.partial_transpose(np.eye(4), "A", (2, 2)), np.eye(4))


def test_partial_transpose_bell_min_eigenvalue():
    pt = linalg.partial_transpose(states.max_entangled(2))
    assert linalg.eig_hermitian(pt).min == pytest.approx(-0.5, abs=1e-14)


def test_partial_transpose_matches_loops_and_qutip_layout():
    m = np.arange(16).reshape(4, 4).astype(complex)
    np.testing.assert_array_equal(
        linalg.partial_transpose(m, "A", (2, 2)),
        [[0, 1, 8, 9], [4, 5, 12, 13], [2, 3, 10, 11], [6, 7, 14, 15]])
    np.testing.assert_array_equal(
        linalg.partial_transpose(m, "B", (2, 2)),
        [[0, 4, 2, 6], [1, 5, 3, 7], [8, 12, 10, 14], [9, 13, 11, 15]])
    rng = np.random.default_rng(0)
    r = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    np.testing.assert_array_equal(linalg.partial_transpose(r, "B", (2, 3)),
                                  oracles.transpose_b_loops(r, 2, 3))
    np.testing.assert_array_equal(linalg.partial_transpose(r, "A", (2, 3)),
                                  oracles.transpose_a_loops(r, 2, 3))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)]),
       st.sampled_from(["A", "B"]))
def test_partial_transpose_involution_and_hermiticity(seed, dims, side):
    rng = np.random.default_rng(seed)
    n = dims[0] * dims[1]
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    twice = linalg.partial_transpose(linalg.partial_transpose(m, side, dims), side, dims)
    np.testing.assert_array_equal(twice, m)
    h = oracles.random_hermitian(n, rng)
    assert linalg.is_hermitian(linalg.partial_transpose(h, side, dims), 1e-14)


def test_partial_transpose_missing_dims():
    with pytest.raises(MissingDims):
        linalg.partial_transpose(np.eye(4))


def test_partial_trace_examples():
    p = states.max_entangled(2)
    np.testing.assert_allclose(linalg.partial_trace(p, "A"), np.eye(2) / 2, atol=1e-15)
    rng = np.random.default_rng(2)
    ra = oracles.random_state_matrix(2, rng)
    rb = 2.5 * oracles.random_state_matrix(3, rng)
    m, dims = linalg.kron(ra, rb)
    np.testing.assert_allclose(linalg.partial_trace(m, "A", dims), np.trace(rb) * ra, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (3, 3)]))
def test_partial_trace_against_loops(seed, dims):
    rng = np.random.default_rng(seed)
    m = oracles.random_state_matrix(dims[0] * dims[1], rng)
    red = linalg.partial_trace(m, "A", dims)
    np.testing.assert_allclose(red, oracles.trace_out_b_loops(m, *dims), atol=1e-14)
    assert abs(np.trace(red) - 1) <= 1e-12
    assert abs(np.trace(linalg.partial_trace(m, "B", dims)) - 1) <= 1e-12
    assert linalg.is_hermitian(red, 1e-14)


def test_partial_trace_missing_dims():
    with pytest.raises(MissingDims):
        linalg.partial_trace(np.eye(4))


def test_trace_inner_examples():
    rho = states.random_density_matrix((2, 2), seed=4)
    assert linalg.trace_inner(np.eye(4), rho.mat) == pytest.approx(1.0, abs=1e-14)
    a, b = 0.1, 0.3
    bell = states.bell_example_state(a, b)
    assert linalg.trace_inner(bell, states.max_entangled(2)) == pytest.approx(a, abs=1e-14)


def test_trace_inner_errors():
    with pytest.raises(DimMismatch):
        linalg.trace_inner(np.eye(2), np.eye(3))
    with pytest.raises(NotHermitian):
        linalg.trace_inner(np.array([[0, 1], [0, 0]], dtype=complex), np.eye(2))


def test_trace_bounds_aligned_diagonal():
    h = np.diag([1.0, 2.0]).astype(complex)
    lo, hi = linalg.trace_bounds(h, h)
    assert (lo, hi) == pytest.approx((4.0, 5.0))
    assert linalg.trace_inner(h, h) == pytest.approx(hi)


def test_trace_bounds_saturated_by_rho_q_and_werner():
    rho, pi = states.rho_q_family(-0.2), states.werner_family(0.6)
    direct = float(np.trace(rho.mat @ pi.mat).real)
    lo, _ = linalg.trace_bounds(rho, pi)
    assert direct == pytest.approx(lo, abs=1e-14)


def test_trace_bounds_random_sandwich():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 10))
        h, k = oracles.random_hermitian(n, rng), oracles.random_hermitian(n, rng)
        lo, hi = linalg.trace_bounds(h, k)
        t = linalg.trace_inner(h, k)
        assert lo - 1e-10 <= t <= hi + 1e-10
