"""
Approximating lower transition operators Phi(s) = (I + d_k Q) ... (I + d_1 Q).
"""
from typing import Iterable, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .gamble import Gamble, as_gamble
from .rate_operator import IntervalRateOperator


class ApproximatingOperator:
    """
    Composition of Euler steps of a lower transition rate operator.

    Every step size is checked against delta * ||Q|| <= 2, so the composition
    is itself a lower transition operator.
    """

    def __init__(self, rate_operator: IntervalRateOperator, steps: Iterable[float]):
        self.rate_operator = rate_operator
        self.steps: Tuple[float, ...] = tuple(float(delta) for delta in steps)
        for delta in self.steps:
            rate_operator.check_step(delta)

    @classmethod
    def power(cls, rate_operator: IntervalRateOperator, delta: float, m: int = 1) -> 'ApproximatingOperator':
        """The operator (I + delta Q)^m."""
        return cls(rate_operator, [delta] * int(m))

    @property
    def size(self) -> int:
        return self.rate_operator.size

    @property
    def is_identity(self) -> bool:
        return all(delta == 0 for delta in self.steps)

    def apply_lower(self, f: ArrayLike) -> Gamble:
        """Apply the steps left to right (first step first)."""
        g = as_gamble(f, self.size)
        Q = self.rate_operator
        for delta in self.steps:
            g = g + delta * Q._apply_lower(g)
        return g

    def apply_upper(self, f: ArrayLike) -> Gamble:
        return -self.apply_lower(-as_gamble(f, self.size))

    def linear_matrix(self) -> Optional[NDArray[np.float64]]:
        """Stochastic matrix of the composition when the rate operator is precise, else None."""
        if not self.rate_operator.is_degenerate:
            return None
        generator = self.rate_operator.rate_matrix()
        matrix = np.eye(self.size)
        for delta in self.steps:
            matrix = generator.transition_matrix(delta) @ matrix
        return matrix

    def __repr__(self):
        return f"ApproximatingOperator(size={self.size}, steps={len(self.steps)})"
