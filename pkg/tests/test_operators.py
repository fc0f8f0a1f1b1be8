"""
Tests for gambles and lower transition rate operators.

Test Plan:
1. Gambles and seminorms
2. Construction and validation
3. Application on the healthy/sick model
4. Rate operator properties on random operators
5. Euler steps
6. Dominating matrices and the corner brute force
7. Approximating operators
"""

import numpy as np
import pytest

from src.errors import ContractViolationError, SizeLimitError, StepTooLargeError
from src.operators import (ApproximatingOperator, IntervalRateOperator, RateMatrix, StateSpace,
                           as_gamble, centred_norm, gamble_norms, indicator, midpoint)


# Test 1: Gambles
class TestGambles:
    """Test gamble validation and seminorms."""

    def test_norms(self):
        """Test the maximum norm, variation and centred seminorm."""
        assert gamble_norms([1.0, -3.0, 2.0]) == (3.0, 5.0, 2.5)
        assert gamble_norms([0.0, 1.0]) == (1.0, 1.0, 0.5)

    def test_constant_gamble_has_zero_seminorm(self):
        assert gamble_norms([4.0, 4.0, 4.0]) == (4.0, 0.0, 0.0)

    def test_midpoint(self):
        assert midpoint(np.array([0.0, 1.0, 0.25])) == 0.5

    def test_rejects_non_finite(self):
        """Test NaN and infinity are rejected."""
        with pytest.raises(ContractViolationError):
            as_gamble([0.0, np.nan])
        with pytest.raises(ContractViolationError):
            as_gamble([np.inf, 0.0])

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ContractViolationError, match="Dimension mismatch"):
            as_gamble([0.0, 1.0, 2.0], size=2)

    def test_indicator(self):
        assert indicator(3, [0, 2]).tolist() == [1.0, 0.0, 1.0]

    def test_state_space_labels(self):
        """Test label lookup with index fallback."""
        space = StateSpace.from_labels(['healthy', 'sick'])
        assert space.index('sick') == 1
        assert space.index('0') == 0
        assert space.label(1) == 'sick'
        assert StateSpace(3).all_labels() == ('0', '1', '2')
        with pytest.raises(ContractViolationError):
            space.index('dead')

    def test_state_space_rejects_duplicate_labels(self):
        with pytest.raises(ContractViolationError):
            StateSpace.from_labels(['a', 'a'])


# Test 2: Construction
class TestConstruction:
    """Test operator construction and validation."""

    def test_inverted_interval(self):
        """Test an interval with low > high is rejected."""
        with pytest.raises(ContractViolationError, match="Inverted"):
            IntervalRateOperator.from_intervals(2, {(0, 1): (2.0, 1.0)})

    def test_negative_rate(self):
        with pytest.raises(ContractViolationError):
            IntervalRateOperator.from_intervals(2, {(0, 1): (-1.0, 1.0)})

    def test_non_finite_rate(self):
        with pytest.raises(ContractViolationError):
            IntervalRateOperator.from_intervals(2, {(0, 1): (0.0, np.inf)})

    def test_self_transition(self):
        with pytest.raises(ContractViolationError):
            IntervalRateOperator.from_intervals(2, {(0, 0): (0.0, 1.0)})

    def test_missing_pairs_are_zero(self):
        Q = IntervalRateOperator.from_intervals(3, {(0, 1): (0.5, 1.0)})
        assert Q.lower[1, 2] == 0.0 and Q.upper[2, 0] == 0.0
        assert Q.intervals() == {(0, 1): (0.5, 1.0)}

    def test_diagonal_ignored(self):
        """Test diagonal entries of the bound matrices are zeroed."""
        Q = IntervalRateOperator(2, [[-5.0, 1.0], [1.0, -5.0]], [[9.0, 2.0], [2.0, 9.0]])
        assert Q.lower[0, 0] == 0.0 and Q.upper[1, 1] == 0.0
        assert Q.norm == 4.0

    def test_rate_matrix_validation(self):
        """Test rows of a rate matrix must sum to zero."""
        with pytest.raises(ContractViolationError):
            RateMatrix([[-1.0, 0.5], [1.0, -1.0]])
        with pytest.raises(ContractViolationError):
            RateMatrix([[1.0, -1.0], [1.0, -1.0]])

    def test_degenerate_round_trip(self):
        """Test a precise rate matrix survives the interval representation."""
        M = RateMatrix([[-1.0, 0.25, 0.75], [0.5, -0.5, 0.0], [0.0, 2.0, -2.0]])
        Q = IntervalRateOperator.from_rate_matrix(M)
        assert Q.is_degenerate
        np.testing.assert_array_equal(Q.rate_matrix().matrix, M.matrix)

    def test_rate_matrix_of_interval_operator(self, healthy_sick):
        assert not healthy_sick.is_degenerate
        with pytest.raises(ContractViolationError):
            healthy_sick.rate_matrix()


# Test 3: Healthy/sick model
class TestHealthySick:
    """Test application on the two-state example."""

    def test_norm(self, healthy_sick):
        """Test ||Q|| = 2 max(3/52, 2) = 4."""
        assert healthy_sick.norm == 4.0
        assert healthy_sick.operator_norm() == 4.0

    def test_lower_of_indicator(self, healthy_sick, indicator_sick):
        """Test Q I_sick picks q0_low upwards and q1_high downwards."""
        result = healthy_sick.apply_lower(indicator_sick)
        np.testing.assert_allclose(result, [1 / 52, -2.0], rtol=1e-15)

    def test_upper_of_indicator(self, healthy_sick, indicator_sick):
        result = healthy_sick.apply_upper(indicator_sick)
        np.testing.assert_allclose(result, [3 / 52, -0.5], rtol=1e-15)

    def test_upper_is_conjugate(self, healthy_sick, rng):
        """Test the upper operator is -Q(-f) exactly."""
        for _ in range(20):
            f = rng.normal(size=2)
            np.testing.assert_array_equal(healthy_sick.apply_upper(f), -healthy_sick.apply_lower(-f))

    def test_constant_maps_to_zero(self, healthy_sick):
        np.testing.assert_array_equal(healthy_sick.apply_lower([3.0, 3.0]), [0.0, 0.0])

    def test_dimension_mismatch(self, healthy_sick):
        with pytest.raises(ContractViolationError):
            healthy_sick.apply_lower([0.0, 1.0, 2.0])

    def test_batch_matches_columns(self, healthy_sick, rng):
        """Test a 2-D batch is applied column by column."""
        batch = rng.normal(size=(2, 5))
        result = healthy_sick.apply_lower(batch)
        for j in range(5):
            np.testing.assert_array_equal(result[:, j], healthy_sick.apply_lower(batch[:, j]))


# Test 4: Rate operator properties
class TestRateOperatorProperties:
    """Test the defining properties on random operators and gambles."""

    TRIALS = 500

    def test_constant_additivity(self, random_operator, rng):
        for _ in range(self.TRIALS // 5):
            Q = random_operator(int(rng.integers(2, 6)))
            f = rng.normal(size=Q.size)
            mu = rng.normal()
            np.testing.assert_allclose(Q.apply_lower(f + mu), Q.apply_lower(f), atol=1e-12)

    def test_positive_homogeneity(self, random_operator, rng):
        for _ in range(self.TRIALS // 5):
            Q = random_operator(int(rng.integers(2, 6)))
            f = rng.normal(size=Q.size)
            lam = rng.uniform(0, 10)
            np.testing.assert_allclose(Q.apply_lower(lam * f), lam * Q.apply_lower(f), atol=1e-12)

    def test_superadditivity(self, random_operator, rng):
        for _ in range(self.TRIALS):
            Q = random_operator(int(rng.integers(2, 6)))
            f, g = rng.normal(size=(2, Q.size))
            assert np.all(Q.apply_lower(f + g) >= Q.apply_lower(f) + Q.apply_lower(g) - 1e-12)

    def test_off_diagonal_indicators_non_negative(self, random_operator, rng):
        for _ in range(self.TRIALS // 5):
            Q = random_operator(int(rng.integers(2, 6)), zero_probability=0.3)
            for y in range(Q.size):
                values = Q.apply_lower(indicator(Q.size, [y]))
                assert all(values[x] >= 0 for x in range(Q.size) if x != y)

    def test_lower_below_upper(self, random_operator, rng):
        for _ in range(self.TRIALS // 5):
            Q = random_operator(int(rng.integers(2, 6)))
            f = rng.normal(size=Q.size)
            assert np.all(Q.apply_lower(f) <= Q.apply_upper(f))

    def test_norm_bound(self, random_operator, rng):
        """Test ||Q f|| <= ||Q|| ||f||_c."""
        for _ in range(self.TRIALS // 5):
            Q = random_operator(int(rng.integers(2, 6)))
            f = rng.normal(size=Q.size)
            assert np.max(np.abs(Q.apply_lower(f))) <= Q.norm * centred_norm(f) * (1 + 1e-12) + 1e-15

    def test_norm_attained_by_indicator(self, random_operator, rng):
        """Test ||Q|| = 2 max_x |[Q I_x](x)|."""
        for _ in range(50):
            Q = random_operator(int(rng.integers(2, 6)))
            diagonal = [abs(Q.apply_lower(indicator(Q.size, [x]))[x]) for x in range(Q.size)]
            assert Q.norm == pytest.approx(2 * max(diagonal), rel=1e-14)


# Test 5: Euler steps
class TestEulerStep:
    """Test (I + delta Q) as a lower transition operator."""

    TRIALS = 500

    def _triples(self, random_operator, rng):
        for _ in range(self.TRIALS):
            Q = random_operator(int(rng.integers(2, 6)))
            delta = rng.uniform(0, 2 / Q.norm)
            yield Q, delta, rng.normal(size=Q.size), rng.normal(size=Q.size)

    def test_bounded_by_extremes(self, random_operator, rng):
        """Test min f <= T f <= max f."""
        for Q, delta, f, _ in self._triples(random_operator, rng):
            g = Q.euler_step(delta, f)
            assert g.min() >= f.min() - 1e-12
            assert g.max() <= f.max() + 1e-12

    def test_superadditive(self, random_operator, rng):
        for Q, delta, f, h in self._triples(random_operator, rng):
            assert np.all(Q.euler_step(delta, f + h) >= Q.euler_step(delta, f) + Q.euler_step(delta, h) - 1e-12)

    def test_homogeneous(self, random_operator, rng):
        for Q, delta, f, _ in self._triples(random_operator, rng):
            lam = rng.uniform(0, 5)
            np.testing.assert_allclose(Q.euler_step(delta, lam * f), lam * Q.euler_step(delta, f), atol=1e-12)

    def test_constant_shift(self, random_operator, rng):
        """Test T(f + mu) = T f + mu."""
        for Q, delta, f, _ in self._triples(random_operator, rng):
            mu = rng.normal()
            np.testing.assert_allclose(Q.euler_step(delta, f + mu), Q.euler_step(delta, f) + mu, atol=1e-12)

    def test_non_expansive(self, random_operator, rng):
        """Test ||T f - T h|| <= ||f - h||."""
        for Q, delta, f, h in self._triples(random_operator, rng):
            distance = np.max(np.abs(Q.euler_step(delta, f) - Q.euler_step(delta, h)))
            assert distance <= np.max(np.abs(f - h)) + 1e-12

    def test_centred_norm_contracts(self, random_operator, rng):
        for Q, delta, f, _ in self._triples(random_operator, rng):
            assert centred_norm(Q.euler_step(delta, f)) <= centred_norm(f) + 1e-12

    def test_largest_step_accepted(self, healthy_sick):
        """Test delta = 2 / ||Q|| passes the step check."""
        healthy_sick.euler_step(0.5, [0.0, 1.0])

    def test_step_too_large(self, healthy_sick):
        with pytest.raises(StepTooLargeError) as info:
            healthy_sick.euler_step(0.51, [0.0, 1.0])
        assert info.value.bound == 0.5

    def test_negative_step(self, healthy_sick):
        with pytest.raises(ContractViolationError):
            healthy_sick.euler_step(-0.1, [0.0, 1.0])

    def test_large_step_breaks_bounds(self, random_operator, rng):
        """Test delta ||Q|| > 2 pushes T I_x below min I_x = 0 at the state with the largest rates."""
        for _ in range(50):
            Q = random_operator(int(rng.integers(2, 6)))
            delta = rng.uniform(2.05, 4.0) / Q.norm
            x = int(np.argmax(Q.upper.sum(axis=1)))
            g = Q.euler_step(delta, indicator(Q.size, [x]), check=False)
            assert g[x] < 0
            with pytest.raises(StepTooLargeError):
                Q.euler_step(delta, indicator(Q.size, [x]))


# Test 6: Dominating matrices
class TestDominatingMatrix:
    """Test the greedy corner matrix and the brute-force envelope."""

    def test_dominating_matrix_reproduces_lower(self, random_operator, rng):
        """Test M f = Q f exactly for the greedy matrix."""
        for _ in range(100):
            Q = random_operator(int(rng.integers(2, 6)))
            f = rng.normal(size=Q.size)
            M = Q.dominating_matrix_for(f)
            np.testing.assert_array_equal(M.apply(f), Q.apply_lower(f))

    def test_dominating_matrix_bounds_other_gambles(self, random_operator, rng):
        """Test M h >= Q h for every other gamble h."""
        for _ in range(100):
            Q = random_operator(int(rng.integers(2, 6)))
            M = Q.dominating_matrix_for(rng.normal(size=Q.size))
            h = rng.normal(size=Q.size)
            assert np.all(M.apply(h) >= Q.apply_lower(h) - 1e-12)

    def test_greedy_matches_corners(self, random_operator, rng):
        """Test the greedy operator equals the minimum over all corner matrices."""
        for _ in range(200):
            Q = random_operator(int(rng.integers(2, 5)), zero_probability=0.2)
            f = rng.normal(size=Q.size)
            np.testing.assert_allclose(Q.corner_envelope_apply(f), Q.apply_lower(f), rtol=0, atol=1e-12)

    def test_corner_size_limit(self, random_operator):
        with pytest.raises(SizeLimitError):
            random_operator(6).corner_envelope_apply(np.zeros(6))


# Test 7: Approximating operators
class TestApproximatingOperator:
    """Test compositions of Euler steps."""

    def test_composition_order(self, healthy_sick, rng):
        """Test the first step is applied first."""
        f = rng.normal(size=2)
        phi = ApproximatingOperator(healthy_sick, [0.1, 0.3])
        expected = healthy_sick.euler_step(0.3, healthy_sick.euler_step(0.1, f))
        np.testing.assert_array_equal(phi.apply_lower(f), expected)

    def test_identity(self, healthy_sick):
        phi = ApproximatingOperator.power(healthy_sick, 0.0, 3)
        assert phi.is_identity
        np.testing.assert_array_equal(phi.apply_lower([0.2, 0.7]), [0.2, 0.7])

    def test_checks_every_step(self, healthy_sick):
        with pytest.raises(StepTooLargeError):
            ApproximatingOperator(healthy_sick, [0.1, 0.6])

    def test_linear_matrix(self):
        """Test the matrix of a precise composition matches its application."""
        Q = IntervalRateOperator.from_rate_matrix([[-1.0, 1.0, 0.0], [0.5, -1.5, 1.0], [0.0, 2.0, -2.0]])
        phi = ApproximatingOperator(Q, [0.2, 0.1, 0.3])
        f = np.array([0.3, -1.0, 2.0])
        np.testing.assert_allclose(phi.linear_matrix() @ f, phi.apply_lower(f), atol=1e-14)
        np.testing.assert_allclose(phi.linear_matrix().sum(axis=1), 1.0, atol=1e-14)

    def test_linear_matrix_of_interval_operator(self, healthy_sick):
        assert ApproximatingOperator(healthy_sick, [0.1]).linear_matrix() is None
