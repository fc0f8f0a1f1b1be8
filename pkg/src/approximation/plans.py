"""
Result and plan types shared by the grid approximation methods.
"""
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..errors import ContractViolationError
from ..operators.gamble import Gamble

SNAP_TOLERANCE = 1e-9


def ceil_snapped(ratio: float) -> int:
    """
    Ceiling of a floating ratio that first snaps near-integers.

    A ratio within 1e-9 (relative) of an integer is treated as that integer,
    so 8000.000000000001 becomes 8000 rather than 8001.
    """
    nearest = round(ratio)
    if abs(ratio - nearest) <= SNAP_TOLERANCE * max(1.0, abs(ratio)):
        return int(nearest)
    return int(math.ceil(ratio))


def check_finite(**values: float) -> None:
    for name, value in values.items():
        if value is None or not math.isfinite(value):
            raise ContractViolationError(f"{name} must be a finite real, got {value!r}")


def check_query(t: float, epsilon: float) -> None:
    check_finite(t=t, epsilon=epsilon)
    if t < 0:
        raise ContractViolationError(f"Time horizon must be non-negative, got {t!r}")
    if epsilon <= 0:
        raise ContractViolationError(f"Maximal error must be positive, got {epsilon!r}")


@dataclass(frozen=True)
class UniformPlan:
    """Number of iterations n and step size delta = t / n of a uniform grid."""

    n: int
    delta: float
    target_epsilon: float
    # a-priori error bound of the plan when known (e.g. epsilon_e of an ergodic plan)
    guaranteed_epsilon: Optional[float] = None

    def __post_init__(self):
        if self.n < 0:
            raise ContractViolationError(f"Iteration count must be non-negative, got {self.n}")
        if self.n == 0 and self.delta != 0:
            raise ContractViolationError("A plan without iterations must have delta = 0")

    @property
    def horizon(self) -> float:
        return self.n * self.delta


@dataclass
class ApproxTrace:
    """
    Outcome of a grid approximation of T_t f.

    `steps` holds (delta_i, k_i) blocks: k_i consecutive Euler steps of size
    delta_i. `epsilon_prime` is None when the bound was not tracked.
    """

    result: Gamble
    epsilon_prime: Optional[float]
    total_iterations: int
    steps: Tuple[Tuple[float, int], ...] = field(default_factory=tuple)
    stopped_early: bool = False

    def step_sizes(self) -> Tuple[float, ...]:
        return tuple(delta for delta, _ in self.steps)

    def horizon(self) -> float:
        """Total time covered by the steps."""
        return float(sum(delta * k for delta, k in self.steps))

    def negated(self) -> 'ApproxTrace':
        """The trace of the conjugate (upper) computation."""
        return ApproxTrace(
            result=-self.result,
            epsilon_prime=self.epsilon_prime,
            total_iterations=self.total_iterations,
            steps=self.steps,
            stopped_early=self.stopped_early,
        )

    def true_error(self, exact: Gamble) -> float:
        """Maximum-norm distance to a known exact value."""
        return float(np.max(np.abs(np.asarray(exact) - self.result)))
