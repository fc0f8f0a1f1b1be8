"""
Closed-form solutions for the two-state model.

With rate intervals [q0_low, q0_high] (from state 0 to 1) and
[q1_low, q1_high] (from 1 to 0), the lower expectation T_t f has an
analytical expression, as do its limit and the coefficient of ergodicity of
a single Euler step. These serve as the reference against which the grid
methods are measured.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.typing import ArrayLike

from ..errors import ContractViolationError, InapplicableError, StepTooLargeError
from ..operators.gamble import Gamble, StateSpace, as_gamble
from ..operators.rate_operator import STEP_SLACK, IntervalRateOperator


@dataclass(frozen=True)
class BinaryModel:
    """Rate intervals of a two-state lower transition rate operator."""

    q0_low: float
    q0_high: float
    q1_low: float
    q1_high: float

    def __post_init__(self):
        for name in ('q0_low', 'q0_high', 'q1_low', 'q1_high'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ContractViolationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if not 0 <= self.q0_low <= self.q0_high:
            raise ContractViolationError(f"Invalid interval [{self.q0_low}, {self.q0_high}] for q0")
        if not 0 <= self.q1_low <= self.q1_high:
            raise ContractViolationError(f"Invalid interval [{self.q1_low}, {self.q1_high}] for q1")

    @classmethod
    def healthy_sick(cls) -> 'BinaryModel':
        """The healthy/sick example: q0 in [1/52, 3/52], q1 in [1/2, 2]."""
        return cls(
            q0_low=float(Fraction(1, 52)),
            q0_high=float(Fraction(3, 52)),
            q1_low=float(Fraction(1, 2)),
            q1_high=float(Fraction(2)),
        )

    @classmethod
    def from_operator(cls, Q: IntervalRateOperator) -> 'BinaryModel':
        if Q.size != 2:
            raise ContractViolationError(f"A binary model needs 2 states, got {Q.size}")
        return cls(Q.lower[0, 1], Q.upper[0, 1], Q.lower[1, 0], Q.upper[1, 0])

    @property
    def norm(self) -> float:
        return 2.0 * max(self.q0_high, self.q1_high)

    def to_operator(self, state_space: StateSpace = None) -> IntervalRateOperator:
        return IntervalRateOperator.from_intervals(
            state_space or StateSpace(2),
            {(0, 1): (self.q0_low, self.q0_high), (1, 0): (self.q1_low, self.q1_high)},
        )


def _binary_gamble(f: ArrayLike) -> Gamble:
    f = as_gamble(f, 2)
    if f.ndim != 1:
        raise ContractViolationError("Expected a single gamble on two states")
    return f


def analytic_transient(M: BinaryModel, f: ArrayLike, t: float) -> Gamble:
    """
    Exact T_t f for the two-state model.

    For f(0) <= f(1), with s = q0_low + q1_high and
    h(t) = ||f||_v (1 - exp(-t s)) / s:
    [T_t f](0) = f(0) + q0_low h(t) and [T_t f](1) = f(1) - q1_high h(t).
    The case f(0) > f(1) swaps the roles, using q0_high and q1_low.
    A zero rate sum leaves f unchanged.
    """
    f = _binary_gamble(f).copy()
    if not math.isfinite(t) or t < 0:
        raise ContractViolationError(f"Time must be a non-negative real, got {t!r}")
    spread = f[1] - f[0]
    if t == 0 or spread == 0:
        return f

    if spread > 0:
        up, down = M.q0_low, M.q1_high
    else:
        up, down = M.q0_high, M.q1_low
    rate_sum = up + down
    if rate_sum == 0:
        return f
    h = abs(spread) * -math.expm1(-t * rate_sum) / rate_sum
    if spread > 0:
        return np.array([f[0] + up * h, f[1] - down * h])
    return np.array([f[0] - up * h, f[1] + down * h])


def analytic_limit(M: BinaryModel, f: ArrayLike) -> float:
    """
    The constant lim_{t -> oo} T_t f.

    Raises:
        InapplicableError: when the relevant rate sum is zero (no constant limit)
    """
    f = _binary_gamble(f)
    spread = f[1] - f[0]
    if spread == 0:
        return float(f[0])
    if spread > 0:
        rate_sum = M.q0_low + M.q1_high
        if rate_sum == 0:
            raise InapplicableError("Rate sum q0_low + q1_high is zero: T_t f stays at f")
        return float(f[0] + M.q0_low * spread / rate_sum)
    rate_sum = M.q0_high + M.q1_low
    if rate_sum == 0:
        raise InapplicableError("Rate sum q0_high + q1_low is zero: T_t f stays at f")
    return float(f[1] + M.q1_low * (-spread) / rate_sum)


def binary_coefficient(M: BinaryModel, delta: float) -> float:
    """
    Exact coefficient of ergodicity of I + delta Q for the two-state model:
    max{|1 - delta (q0_high + q1_low)|, |1 - delta (q0_low + q1_high)|}.
    """
    if not math.isfinite(delta) or delta < 0:
        raise ContractViolationError(f"Step size must be a non-negative real, got {delta!r}")
    if delta * M.norm > 2.0 + STEP_SLACK:
        raise StepTooLargeError(delta, M.norm)
    return max(abs(1.0 - delta * (M.q0_high + M.q1_low)),
               abs(1.0 - delta * (M.q0_low + M.q1_high)))
