"""
Exact solutions for precise (degenerate-interval) rate operators.

When every interval is a single rate, T_t is the matrix exponential of the
rate matrix and the limit follows from its stationary distribution.
"""
import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import expm, null_space

from ..errors import InapplicableError
from ..operators.gamble import Gamble, as_gamble
from ..operators.rate_operator import IntervalRateOperator


def exact_transient(Q: IntervalRateOperator, f: ArrayLike, t: float) -> Gamble:
    """T_t f = expm(t Q) f for a degenerate operator."""
    generator = Q.rate_matrix()
    f = as_gamble(f, Q.size)
    return expm(t * generator.matrix) @ f


def exact_limit(Q: IntervalRateOperator, f: ArrayLike) -> float:
    """
    lim_{t -> oo} T_t f for a degenerate operator with a unique stationary distribution.

    Raises:
        InapplicableError: when the stationary distribution is not unique
    """
    generator = Q.rate_matrix()
    f = as_gamble(f, Q.size)
    kernel = null_space(generator.matrix.T)
    if kernel.shape[1] != 1:
        raise InapplicableError(
            f"Rate matrix has {kernel.shape[1]} stationary distributions; the limit is not constant"
        )
    pi = kernel[:, 0] / kernel[:, 0].sum()
    return float(pi @ f)
