"""
Early termination once the remaining evolution cannot move the approximation far.
"""
from numpy.typing import ArrayLike

from ..errors import ContractViolationError
from ..operators.gamble import as_gamble, variation

# relative slack when comparing an accumulated bound with its target
BOUND_SLACK = 1e-12


def remaining_cost_stop(epsilon: float, epsilon_so_far: float, g: ArrayLike) -> bool:
    """
    Decide whether an approximation may stop before reaching the horizon.

    If epsilon_so_far bounds the error of g at the current time t' <= t and
    the variation of g is at most epsilon - epsilon_so_far, then g is within
    epsilon of T_t f for every t >= t', because T_{t - t'} keeps values
    between min g and max g.

    Args:
        epsilon: Maximal error allowed at the horizon
        epsilon_so_far: Error bound accumulated up to the current time
        g: Current approximation

    Returns:
        True when stopping keeps the total error within epsilon
    """
    if epsilon_so_far > epsilon * (1 + BOUND_SLACK):
        raise ContractViolationError(
            f"Accumulated error {epsilon_so_far!r} already exceeds the maximal error {epsilon!r}"
        )
    return variation(as_gamble(g)) <= epsilon - epsilon_so_far
