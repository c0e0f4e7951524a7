import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ewitness import kernels, states
from ewitness.kernels import numba_impl, numpy_impl
from ewitness.witness import _profile_coefficients, _start_vectors

import oracles

BACKENDS = [numba_impl, numpy_impl]


@pytest.mark.parametrize("impl", BACKENDS, ids=["numba", "numpy"])
@pytest.mark.parametrize("n", [1, 2, 4, 9])
def test_jacobi_diagonalizes(impl, n):
    h = oracles.random_hermitian(n, np.random.default_rng(n))
    w, v, sweeps = impl.jacobi_eigh(h, 1e-14, 100)
    np.testing.assert_allclose(np.sort(w), np.linalg.eigvalsh(h), atol=1e-12)
    np.testing.assert_allclose((v * w) @ v.conj().T, h, atol=1e-12)
    assert sweeps <= 100


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 9))
def test_jacobi_backends_agree(seed, n):
    h = oracles.random_hermitian(n, np.random.default_rng(seed))
    wa, _, _ = numba_impl.jacobi_eigh(h, 1e-14, 100)
    wb, _, _ = numpy_impl.jacobi_eigh(h, 1e-14, 100)
    np.testing.assert_allclose(np.sort(wa), np.sort(wb), atol=1e-12)


def test_jacobi_batch_matches_single():
    rng = np.random.default_rng(3)
    mats = np.stack([oracles.random_hermitian(4, rng) for _ in range(5)])
    w, v, _ = numpy_impl.jacobi_eigh_batch(mats, 1e-14, 100)
    for k in range(5):
        np.testing.assert_allclose(np.sort(w[k]), np.linalg.eigvalsh(mats[k]), atol=1e-12)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
def test_seesaw_backends_agree(dims):
    rho = states.random_density_matrix(dims, seed=sum(dims))
    mus, nus = _start_vectors(dims, 6, seed=1)
    mus[-1], nus[-1] = np.eye(dims[0])[0], np.eye(dims[1])[0]
    r4 = np.ascontiguousarray(rho.tensor())
    a = numba_impl.seesaw_restarts(r4, mus, nus, 1e-12, 500, 1e-14, 100)
    b = numpy_impl.seesaw_restarts(r4, mus, nus, 1e-12, 500, 1e-14, 100)
    np.testing.assert_allclose(a[2], b[2], atol=1e-10)
    np.testing.assert_array_equal(a[4], b[4])
    assert np.max(a[5]) <= 1e-14 and np.max(b[5]) <= 1e-14
    assert min(a[2]) == pytest.approx(min(b[2]), abs=1e-12)


@pytest.mark.parametrize("impl", BACKENDS, ids=["numba", "numpy"])
def test_project_simplex(impl):
    for v in ([0.2, 0.8], [2.0, 0.0, -1.0], [-1.0, -1.0, -1.0]):
        p = impl.project_simplex(np.array(v))
        assert p.sum() == pytest.approx(1.0)
        assert p.min() >= 0
    np.testing.assert_allclose(impl.project_simplex(np.array([0.2, 0.8])), [0.2, 0.8])
    np.testing.assert_allclose(impl.project_simplex(np.array([2.0, 0.0, -1.0])), [1, 0, 0])


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
def test_simplex_pgd_backends_agree(dims):
    rho = states.random_density_matrix(dims, seed=11)
    D, P, Q = _profile_coefficients(rho, "real")
    rng = np.random.default_rng(0)
    xs = rng.dirichlet(np.ones(dims[0]), size=8)
    ys = rng.dirichlet(np.ones(dims[1]), size=8)
    a = numba_impl.simplex_pgd(D, P, Q, xs, ys, 0.1, 200)
    b = numpy_impl.simplex_pgd(D, P, Q, xs, ys, 0.1, 200)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, atol=1e-12)


def test_active_backend_default():
    expected = "numpy" if os.environ.get("EWITNESS_DISABLE_NUMBA", "").strip().lower() not in (
        "", "0", "false", "no", "off") else "numba"
    assert kernels.BACKEND == expected


def test_disable_flag_selects_numpy_and_keeps_results():
    code = (
        "from ewitness import kernels, states; from ewitness.witness import c_max_exact;"
        "print(kernels.BACKEND, repr(c_max_exact(states.rho_q_family(-0.2)).value))"
    )
    env = dict(os.environ, EWITNESS_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env=env, check=True).stdout.split()
    assert out[0] == "numpy"
    assert float(out[1]) == pytest.approx(0.2, abs=1e-10)
