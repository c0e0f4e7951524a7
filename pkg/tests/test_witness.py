import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ewitness import states
from ewitness.errors import InvalidC, NoWitnessExists
from ewitness.witness import (
    SeeSawConfig,
    c_bound_closed_form,
    c_max_exact,
    closed_form_value,
    evaluate,
    make_witness,
    min_eigenvalue_check,
    sampled_product_minimum,
    scale_witness,
)

import oracles

# closed_form_grid_2x2(rho_q(-1/3)) at step 1e-3
RHO_Q_THIRD_CLOSED_FORM = 0.08333333333333334
# bloch_grid_cmax(P_+) with polish
BELL_CMAX = 0.0


def test_closed_form_maximally_mixed():
    assert c_bound_closed_form(states.maximally_mixed(2, 2)) == pytest.approx(0.25, abs=1e-12)


def test_closed_form_rho_q_third():
    val = c_bound_closed_form(states.rho_q_family(-1 / 3))
    assert val == pytest.approx(RHO_Q_THIRD_CLOSED_FORM, abs=1e-9)


def test_closed_form_diagonal_state_is_min_diagonal():
    d = np.array([0.4, 0.1, 0.2, 0.05, 0.25, 0.0])
    d = d / d.sum()
    rho = states.DensityMatrix(np.diag(d), (2, 3))
    assert c_bound_closed_form(rho) == pytest.approx(d.min(), abs=1e-12)


def test_closed_form_value_at_uniform_profile():
    rho = states.rho_q_family(-0.2)
    assert closed_form_value(rho, [0.5, 0.5], [0.5, 0.5]) == pytest.approx(0.25 - 0.1)


@pytest.mark.parametrize("seed", range(5))
def test_closed_form_matches_grid_on_real_two_qubit_states(seed):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(4, 4))
    m = g @ g.T
    m /= np.trace(m)
    rho = states.DensityMatrix(m, (2, 2))
    grid = oracles.closed_form_grid_2x2(rho.mat)
    val = c_bound_closed_form(rho)
    assert val == pytest.approx(grid, abs=2e-5)


def test_real_part_bound_fails_for_imaginary_coherences():
    sy = np.array([[0, -1j], [1j, 0]])
    rho = states.DensityMatrix(np.eye(4) / 4 + 0.05 * np.kron(sy, np.eye(2)), (2, 2))
    exact = c_max_exact(rho).value
    assert exact == pytest.approx(0.2, abs=1e-10)
    assert c_bound_closed_form(rho, part="real") == pytest.approx(0.25, abs=1e-10)
    assert c_bound_closed_form(rho, part="modulus") <= exact + 1e-12


@pytest.mark.parametrize("q", [-1 / 3, -0.25, -0.1, -0.01])
def test_c_max_rho_q(q):
    assert c_max_exact(states.rho_q_family(q)).value == pytest.approx((1 + q) / 4, abs=1e-8)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
def test_c_max_maximally_mixed(dims):
    n = dims[0] * dims[1]
    assert c_max_exact(states.maximally_mixed(*dims)).value == pytest.approx(1 / n, abs=1e-14)


def test_c_max_bell_against_grid():
    res = c_max_exact(states.max_entangled(2))
    assert res.value == pytest.approx(BELL_CMAX, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)]))
def test_c_max_result_invariants(seed, dims):
    rho = states.random_density_matrix(dims, seed=seed)
    res = c_max_exact(rho, SeeSawConfig(restarts=10, seed=seed % 1000))
    assert res.value == pytest.approx(res.minimizer.expectation(rho), abs=1e-10)
    assert res.value <= rho.min_diagonal + 1e-10
    assert res.value >= rho.lambda_min - 1e-12
    assert res.max_rise <= 1e-14
    assert res.restarts_used == 11


def test_c_max_deterministic_per_seed():
    rho = states.random_density_matrix((3, 3), seed=8)
    a = c_max_exact(rho, SeeSawConfig(seed=3))
    b = c_max_exact(rho, SeeSawConfig(seed=3))
    assert a.value == b.value
    np.testing.assert_array_equal(a.history, b.history)
    np.testing.assert_array_equal(a.minimizer.joint, b.minimizer.joint)


def test_make_witness_rho_q_default_c():
    q = -0.2
    w = make_witness(states.rho_q_family(q))
    assert w.c == pytest.approx((1 + q) / 4, abs=1e-10)
    assert w.certificate.method == "see_saw"


def test_make_witness_maximally_mixed_has_no_witness():
    with pytest.raises(NoWitnessExists):
        make_witness(states.maximally_mixed(2, 2))


def test_make_witness_accepts_weaker_c():
    q = -0.2
    w = make_witness(states.rho_q_family(q), (1 + 2 * q) / 4)
    assert w.c == pytest.approx((1 + 2 * q) / 4)


@pytest.mark.parametrize("c", [0.0, 0.05, 0.3])
def test_make_witness_rejects_c_outside_interval(c):
    # rho_q(-0.2): lambda_min = 0.1, c_max = 0.2
    with pytest.raises(InvalidC):
        make_witness(states.rho_q_family(-0.2), c)


def test_make_witness_closed_form_method():
    w = make_witness(states.rho_q_family(-1 / 3), method="closed_form")
    assert w.c == pytest.approx(RHO_Q_THIRD_CLOSED_FORM, abs=1e-9)
    assert w.certificate.method == "closed_form"


@pytest.mark.parametrize("p", [0.2, 0.4, 0.6, 0.8])
@pytest.mark.parametrize("q", [-1 / 3, -0.1])
def test_evaluate_werner_trace_identity(p, q):
    w = make_witness(states.rho_q_family(q))
    assert evaluate(w, states.werner_family(p)) == pytest.approx((3 * p - 1) * q / 4, abs=1e-10)


def test_evaluate_maximally_mixed_nonnegative():
    for q in (-1 / 3, -0.2, -0.05):
        w = make_witness(states.rho_q_family(q))
        assert evaluate(w, states.maximally_mixed(2, 2)) >= -1e-12


def test_evaluate_bell_example():
    a, b = 0.1, 0.3
    w = make_witness(states.bell_example_state(a, b))
    assert w.c == pytest.approx((a + b) / 2, abs=1e-12)
    assert evaluate(w, states.max_entangled(2)) == pytest.approx((a - b) / 2, abs=1e-10)


def test_min_eigenvalue_check_values():
    assert min_eigenvalue_check(make_witness(states.rho_q_family(-1 / 3))) == pytest.approx(
        -1 / 6, abs=1e-10)
    assert min_eigenvalue_check(make_witness(states.rho_q_family(-0.1))) == pytest.approx(
        -0.05, abs=1e-10)


def _fixture_witnesses():
    out = [make_witness(states.rho_q_family(q)) for q in (-1 / 3, -0.25, -0.1, -0.01)]
    out.append(make_witness(states.rho_q_family(-0.2), 0.15))
    out.append(make_witness(states.bell_example_state(0.1, 0.3)))
    return out


def test_product_positivity_sampled():
    for i, w in enumerate(_fixture_witnesses()):
        assert min_eigenvalue_check(w) < 0
        assert sampled_product_minimum(w, 10_000, seed=i) >= -1e-9


@pytest.mark.parametrize("gamma", [0.01, 0.5, 3.0])
def test_scaling_preserves_sign(gamma):
    for w in _fixture_witnesses():
        for pi in (states.werner_family(0.2), states.werner_family(0.8),
                   states.max_entangled(2), states.maximally_mixed(2, 2)):
            base = evaluate(w, pi)
            scaled = evaluate(scale_witness(w, gamma), pi)
            assert scaled == pytest.approx(gamma * base, abs=1e-12)
            if abs(base) > 1e-12:
                assert np.sign(scaled) == np.sign(base)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (3, 3)]))
def test_closed_form_below_exact(seed, dims):
    rho = states.random_density_matrix(dims, seed=seed)
    exact = c_max_exact(rho).value
    assert c_bound_closed_form(rho, part="modulus") <= exact + 1e-8
    real = states.DensityMatrix(rho.mat.real, dims)
    assert c_bound_closed_form(real) <= c_max_exact(real).value + 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(3))
def test_c_max_matches_bloch_grid(seed):
    rho = states.random_density_matrix((2, 2), seed=1000 + seed)
    assert c_max_exact(rho).value == pytest.approx(oracles.bloch_grid_cmax(rho.mat), abs=1e-4)
