"""
Upper expectations through conjugacy: upper T_t f = -T_t(-f).
"""
from typing import Callable, TypeVar

import numpy as np

# ApproxTrace or LimitResult; anything with negated()
R = TypeVar('R')


def upper_approximate(method: Callable[..., R], Q, f, *args, **kwargs) -> R:
    """
    Run a lower approximation method on -f and negate the outcome.

    The error bound carries over unchanged because the maximum norm is
    invariant under negation.
    """
    return method(Q, -np.asarray(f, dtype=np.float64), *args, **kwargs).negated()
