import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gbvlab.errors import ParameterError, SingularityError, StepDomainError
from gbvlab.pool import SerialMap
from gbvlab.pruefer import (
    ModelTag,
    PruferState,
    alpha_eta,
    free_jacobi,
    free_verblunsky,
    modulus_ratio,
    phase_ratio,
    prufer_trajectory,
    trajectory_grid,
    unified_prufer_step,
    unified_ratio,
)
from gbvlab.pruefer.step import record_indices, step_terms
from gbvlab.typing import Coefficients

from .helpers import random_jacobi, random_verblunsky

small_alphas = st.builds(
    cmath.rect,
    st.floats(min_value=0, max_value=0.45),
    st.floats(min_value=-math.pi, max_value=math.pi),
)
angles = st.floats(min_value=0.1, max_value=2 * math.pi - 0.1)


@pytest.mark.parametrize(
    "coeffs",
    [
        pytest.param(free_verblunsky(), id="opuc"),
        pytest.param(free_jacobi(), id="oprl"),
    ],
)
def test_free_baseline(coeffs):
    """Zero coefficients leave r_n = 1 and theta_n = 0 for every eta."""
    assert isinstance(coeffs, Coefficients)
    trajectory = trajectory_grid(coeffs, np.linspace(0.3, 6.0, 7), 200, stride=50)
    assert np.abs(trajectory.log_r).max() < 1e-12
    assert np.abs(trajectory.theta).max() < 1e-12
    assert list(trajectory.n) == [0, 50, 100, 150, 200]


@given(small_alphas, angles, st.integers(0, 50), angles, st.sampled_from(ModelTag))
def test_ratio_forms_agree(alpha, eta, n, theta, model):
    unified = unified_ratio(alpha, eta, n, theta, model.c)
    assert abs(unified) == pytest.approx(modulus_ratio(alpha, eta, n, theta, model.c))
    unit = unified / abs(unified)
    assert unit ** 2 == pytest.approx(phase_ratio(alpha, eta, n, theta, model.c))


@given(small_alphas, angles, st.sampled_from(ModelTag))
def test_single_step_matches_ratio(alpha, eta, model):
    state = PruferState(n=3, log_r=0.25, theta=0.5)
    following = unified_prufer_step(state, alpha, eta, model)
    ratio = unified_ratio(alpha, eta, 3, 0.5, model.c)
    assert following.n == 4
    assert following.r / state.r == pytest.approx(abs(ratio))
    assert following.theta - state.theta == pytest.approx(cmath.phase(ratio))


def test_step_outside_domain():
    # 1 - 2 Re(alpha) is the OPRL radicand
    with pytest.raises(StepDomainError) as excinfo:
        unified_prufer_step(PruferState(n=7), 0.6, 1.0, ModelTag.OPRL)
    assert excinfo.value.n == 7


def test_alpha_eta_singular():
    with pytest.raises(SingularityError):
        alpha_eta(1.0, 0.5, 2 * math.pi)
    with pytest.raises(SingularityError):
        trajectory_grid(free_jacobi(), np.array([1.0, 0.0]), 10)


def test_alpha_eta_matches_weights():
    coeffs = random_jacobi(5, seed=3)
    first, second = coeffs.linear_form(5)
    u, v = coeffs.weights(np.array([1.3]))
    a = coeffs.a_values(0, 5)
    b = coeffs.b_values(1, 6)
    for n in range(5):
        expected = alpha_eta(a[n], b[n], 1.3)
        assert first[n] * u[0] + second[n] * v[0] == pytest.approx(expected)


def test_oprl_radicand_is_a_squared():
    """For Jacobi coefficients the step radicand 1 - 2 Re(alpha) equals a_n^2."""
    for a_n, b_next, eta in [(0.7, 0.3, 1.0), (1.4, -1.1, 4.0), (1.0, 2.0, 0.2)]:
        alpha = alpha_eta(a_n, b_next, eta)
        _, radicand = step_terms(alpha, eta, 0, 0.0, ModelTag.OPRL.c)
        assert radicand == pytest.approx(a_n ** 2)


@pytest.mark.parametrize(
    "steps, stride, expected",
    [
        pytest.param(10, 3, [0, 3, 6, 9, 10], id="ragged"),
        pytest.param(9, 3, [0, 3, 6, 9], id="exact"),
        pytest.param(4, 10, [0, 4], id="stride beyond steps"),
        pytest.param(0, 1, [0], id="no steps"),
    ],
)
def test_record_indices(steps, stride, expected):
    assert list(record_indices(steps, stride)) == expected


def test_record_indices_rejects_stride():
    with pytest.raises(ParameterError):
        record_indices(5, 0)


@pytest.mark.parametrize("model", list(ModelTag))
def test_negative_steps_rejected(model):
    coeffs = free_verblunsky() if model is ModelTag.OPUC else free_jacobi()
    with pytest.raises(ParameterError):
        trajectory_grid(coeffs, np.array([0.5]), -1)


def test_trajectory_matches_stepping():
    coeffs = random_verblunsky(40, seed=2)
    states = prufer_trajectory(coeffs, 0.9, 40, stride=10)
    assert [state.n for state in states] == [0, 10, 20, 30, 40]
    state = PruferState()
    for alpha in coeffs.values(40):
        state = unified_prufer_step(state, alpha, 0.9, ModelTag.OPUC)
    assert states[-1].log_r == pytest.approx(state.log_r, abs=1e-12)
    assert states[-1].theta == pytest.approx(state.theta, abs=1e-12)


def test_chunked_grid_matches_single():
    coeffs = random_verblunsky(60, seed=4)
    grid = np.linspace(0.1, 6.0, 11)
    single = trajectory_grid(coeffs, grid, 60, stride=7)
    chunked = trajectory_grid(coeffs, grid, 60, stride=7, mapper=SerialMap(), chunks=4)
    np.testing.assert_array_equal(single.log_r, chunked.log_r)
    np.testing.assert_array_equal(single.theta, chunked.theta)


def test_theta_is_unwrapped():
    """Increments stay in (-π, π], so theta is continuous in n."""
    coeffs = random_verblunsky(300, seed=5)
    trajectory = trajectory_grid(coeffs, np.array([3.0]), 300)
    assert np.abs(np.diff(trajectory.theta[0])).max() <= math.pi
