"""
Tests for the closed-form two-state solution and the linear oracle.

Test Plan:
1. Binary model construction
2. Transient solution
3. Limit
4. Exact coefficient
5. Linear oracle
"""

import math

import numpy as np
import pytest

from src.approximation import uniform_approximate
from src.errors import ContractViolationError, InapplicableError, StepTooLargeError
from src.ergodicity import AprioriDelta, coefficient_bounds, limit_approximate
from src.operators import ApproximatingOperator, IntervalRateOperator
from src.oracle import (BinaryModel, analytic_limit, analytic_transient, binary_coefficient, exact_limit,
                        exact_transient)


@pytest.fixture
def model():
    return BinaryModel.healthy_sick()


# Test 1: Construction
class TestBinaryModel:
    """Test the two-state model parameters."""

    def test_healthy_sick(self, model):
        assert model.q0_low == 1 / 52 and model.q0_high == 3 / 52
        assert model.q1_low == 0.5 and model.q1_high == 2.0
        assert model.norm == 4.0

    def test_invalid_interval(self):
        with pytest.raises(ContractViolationError):
            BinaryModel(0.5, 0.1, 0.0, 1.0)
        with pytest.raises(ContractViolationError):
            BinaryModel(-0.1, 0.1, 0.0, 1.0)

    def test_operator_round_trip(self, model):
        assert BinaryModel.from_operator(model.to_operator()) == model

    def test_from_operator_needs_two_states(self, chain):
        with pytest.raises(ContractViolationError):
            BinaryModel.from_operator(chain)


# Test 2: Transient solution
class TestAnalyticTransient:
    """Test the closed form of T_t f."""

    def test_indicator_of_sick(self, model):
        h = (52 / 105) * -math.expm1(-105 / 52)
        result = analytic_transient(model, [0.0, 1.0], 1.0)
        np.testing.assert_allclose(result, [h / 52, 1 - 2 * h], rtol=1e-14)
        assert result[0] == pytest.approx(8.259e-3, rel=1e-3)

    def test_zero_time(self, model):
        np.testing.assert_array_equal(analytic_transient(model, [0.2, 0.9], 0.0), [0.2, 0.9])

    def test_constant(self, model):
        np.testing.assert_array_equal(analytic_transient(model, [0.4, 0.4], 7.0), [0.4, 0.4])

    def test_decreasing_branch(self, model):
        """Test f(0) > f(1) uses q0_high and q1_low."""
        s = 3 / 52 + 1 / 2
        h = -math.expm1(-2.0 * s) / s
        np.testing.assert_allclose(analytic_transient(model, [1.0, 0.0], 2.0),
                                   [1 - (3 / 52) * h, 0.5 * h], rtol=1e-14)

    def test_zero_rate_sum(self):
        static = BinaryModel(0.0, 1.0, 0.0, 0.0)
        np.testing.assert_array_equal(analytic_transient(static, [0.0, 1.0], 5.0), [0.0, 1.0])

    def test_semigroup(self, rng):
        """Test T_t T_s f = T_(s+t) f."""
        for _ in range(100):
            q0 = np.sort(rng.uniform(0, 3, 2))
            q1 = np.sort(rng.uniform(0, 3, 2))
            M = BinaryModel(q0[0], q0[1], q1[0], q1[1])
            f = rng.normal(size=2)
            s, t = rng.uniform(0, 3, 2)
            np.testing.assert_allclose(analytic_transient(M, analytic_transient(M, f, s), t),
                                       analytic_transient(M, f, s + t), atol=1e-12)

    def test_uniform_grid_converges(self, model):
        """Test the uniform grid stays within its bound of the closed form."""
        Q = model.to_operator()
        exact = analytic_transient(model, [0.0, 1.0], 1.0)
        for epsilon in (1e-1, 1e-2, 1e-3):
            trace = uniform_approximate(Q, [0.0, 1.0], 1.0, epsilon)
            assert trace.true_error(exact) <= trace.epsilon_prime

    def test_invalid_time(self, model):
        with pytest.raises(ContractViolationError):
            analytic_transient(model, [0.0, 1.0], -1.0)


# Test 3: Limit
class TestAnalyticLimit:
    """Test lim T_t f."""

    def test_indicator_of_sick(self, model):
        assert analytic_limit(model, [0.0, 1.0]) == pytest.approx(1 / 105, rel=1e-14)
        assert analytic_limit(model, [0.0, 1.0]) == pytest.approx(9.5238095e-3, rel=1e-7)

    def test_constant(self, model):
        assert analytic_limit(model, [0.3, 0.3]) == 0.3

    def test_no_upward_rate(self):
        assert analytic_limit(BinaryModel(0.0, 1.0, 0.5, 2.0), [0.0, 1.0]) == 0.0

    def test_zero_rate_sum(self):
        with pytest.raises(InapplicableError):
            analytic_limit(BinaryModel(0.0, 1.0, 0.0, 0.0), [0.0, 1.0])

    def test_matches_long_horizon(self, rng):
        for _ in range(50):
            q0 = np.sort(rng.uniform(0.1, 3, 2))
            q1 = np.sort(rng.uniform(0.1, 3, 2))
            M = BinaryModel(q0[0], q0[1], q1[0], q1[1])
            f = rng.normal(size=2)
            rate_sum = M.q0_low + M.q1_high if f[0] <= f[1] else M.q0_high + M.q1_low
            np.testing.assert_allclose(analytic_transient(M, f, 200 / rate_sum), analytic_limit(M, f), atol=1e-12)


# Test 4: Exact coefficient
class TestBinaryCoefficient:
    """Test the exact coefficient of ergodicity of I + delta Q."""

    def test_identity(self, model):
        assert binary_coefficient(model, 0.0) == 1.0

    def test_healthy_sick(self, model):
        assert binary_coefficient(model, 1 / 8000) == pytest.approx(0.9999303, abs=1e-7)

    def test_never_above_one(self, rng):
        for _ in range(200):
            q0 = np.sort(rng.uniform(0, 3, 2))
            q1 = np.sort(rng.uniform(0, 3, 2))
            M = BinaryModel(q0[0], q0[1], q1[0], q1[1])
            assert binary_coefficient(M, rng.uniform(0, 2 / M.norm)) <= 1.0 + 1e-12

    def test_matches_coefficient_bounds(self, rng):
        for _ in range(50):
            q0 = np.sort(rng.uniform(0, 3, 2))
            q1 = np.sort(rng.uniform(0, 3, 2))
            M = BinaryModel(q0[0], q0[1], q1[0], q1[1])
            delta = rng.uniform(0, 2 / M.norm)
            bounds = coefficient_bounds(ApproximatingOperator.power(M.to_operator(), delta))
            assert bounds.exact == binary_coefficient(M, delta)
            assert bounds.lower - 1e-12 <= bounds.exact <= bounds.upper + 1e-12

    def test_step_too_large(self, model):
        with pytest.raises(StepTooLargeError):
            binary_coefficient(model, 0.6)


# Test 5: Linear oracle
class TestLinearOracle:
    """Test the matrix exponential and stationary limit of precise operators."""

    @pytest.fixture
    def precise(self):
        return IntervalRateOperator.from_rate_matrix([[-1.0, 0.6, 0.4], [0.3, -0.5, 0.2], [1.0, 1.0, -2.0]])

    def test_transient_against_uniform_grid(self, precise):
        f = np.array([0.0, 1.0, 0.5])
        trace = uniform_approximate(precise, f, 1.5, 1e-2)
        assert trace.true_error(exact_transient(precise, f, 1.5)) <= trace.epsilon_prime

    def test_transient_matches_binary_closed_form(self):
        M = BinaryModel(0.3, 0.3, 1.2, 1.2)
        f = np.array([0.0, 1.0])
        np.testing.assert_allclose(exact_transient(M.to_operator(), f, 0.8), analytic_transient(M, f, 0.8),
                                   atol=1e-14)

    def test_limit(self, precise):
        f = np.array([0.0, 1.0, 0.5])
        exact = exact_limit(precise, f)
        result = limit_approximate(precise, f, 1e-2, AprioriDelta())
        assert abs(result.value - exact) <= result.guaranteed_error

    def test_limit_without_unique_distribution(self, disconnected):
        with pytest.raises(InapplicableError):
            exact_limit(disconnected, [0.0, 1.0])
