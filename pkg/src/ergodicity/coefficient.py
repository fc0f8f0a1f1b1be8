"""
Coefficient of ergodicity of lower transition operators.

The (weak) coefficient of ergodicity is the largest variation of T f over
gambles with values in [0, 1]. It is exact for linear operators (the delta
coefficient) and for a single Euler step on two states; otherwise it is
bracketed by scanning the indicators of all non-empty proper subsets:

    lower = max_A max_{x,y} [T I_A](x) - [T I_A](y)
    upper = max_A max_{x,y} [upper T I_A](x) - [T I_A](y)
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..config import get_settings
from ..errors import ContractViolationError, SizeLimitError
from ..operators.rate_operator import IntervalRateOperator
from ..operators.transition import ApproximatingOperator
from ..oracle.binary_model import BinaryModel, binary_coefficient

logger = logging.getLogger(__name__)

STOCHASTIC_TOLERANCE = 1e-12
_SUBSET_CHUNK = 1 << 12


@dataclass(frozen=True)
class CoefficientBounds:
    """Bracket on the coefficient of ergodicity, with its exact value when known."""

    lower: float
    upper: float
    exact: Optional[float] = None


def delta_coefficient(T: ArrayLike) -> float:
    """
    Exact coefficient of ergodicity of a row-stochastic matrix:
    max_{x,y} 1/2 sum_z |T(x,z) - T(y,z)|.
    """
    T = np.asarray(T, dtype=np.float64)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ContractViolationError(f"Expected a square matrix, got shape {T.shape}")
    if not np.all(np.isfinite(T)) or np.any(T < -STOCHASTIC_TOLERANCE):
        raise ContractViolationError("A stochastic matrix must have finite non-negative entries")
    row_sums = T.sum(axis=1)
    if np.any(np.abs(row_sums - 1.0) > STOCHASTIC_TOLERANCE * T.shape[1]):
        raise ContractViolationError(f"Rows of a stochastic matrix must sum to 1, got {row_sums}")
    distances = np.abs(T[:, np.newaxis, :] - T[np.newaxis, :, :]).sum(axis=2)
    return float(distances.max() / 2.0)


def subset_indicators(n: int):
    """
    Yield blocks of indicator gambles (as columns) of all non-empty proper subsets.

    Subsets follow the binary reflected Gray code order.
    """
    full = (1 << n) - 1
    bits = np.arange(n, dtype=np.int64)
    for start in range(0, 1 << n, _SUBSET_CHUNK):
        i = np.arange(start, min(1 << n, start + _SUBSET_CHUNK), dtype=np.int64)
        codes = i ^ (i >> 1)
        codes = codes[(codes != 0) & (codes != full)]
        if len(codes):
            yield ((codes[np.newaxis, :] >> bits[:, np.newaxis]) & 1).astype(np.float64)


def _scan(apply_lower, apply_upper, n: int) -> Tuple[float, float]:
    lower_bound = 0.0
    upper_bound = 0.0
    for block in subset_indicators(n):
        low = apply_lower(block)
        high = apply_upper(block)
        low_min = low.min(axis=0)
        lower_bound = max(lower_bound, float((low.max(axis=0) - low_min).max()))
        upper_bound = max(upper_bound, float((high.max(axis=0) - low_min).max()))
    return lower_bound, upper_bound


def _check_size(n: int) -> None:
    limit = get_settings().max_subset_states
    if n > limit:
        raise SizeLimitError('The subset scan of the coefficient bounds', n, limit)


def coefficient_bounds(op: Union[ApproximatingOperator, ArrayLike]) -> CoefficientBounds:
    """
    Bracket the coefficient of ergodicity of a lower transition operator.

    Args:
        op: An ApproximatingOperator (e.g. (I + delta Q)^m) or a row-stochastic matrix

    Returns:
        CoefficientBounds; `exact` is set for stochastic matrices, for
        precise rate operators and for a single step on two states
    """
    if isinstance(op, ApproximatingOperator):
        _check_size(op.size)
        lower, upper = _scan(op.apply_lower, op.apply_upper, op.size)
        exact = None
        matrix = op.linear_matrix()
        if matrix is not None:
            exact = delta_coefficient(matrix)
        elif op.size == 2 and len(op.steps) == 1:
            exact = binary_coefficient(BinaryModel.from_operator(op.rate_operator), op.steps[0])
        return CoefficientBounds(lower=lower, upper=upper, exact=exact)

    T = np.asarray(op, dtype=np.float64)
    exact = delta_coefficient(T)
    _check_size(T.shape[0])
    lower, upper = _scan(lambda block: T @ block, lambda block: T @ block, T.shape[0])
    return CoefficientBounds(lower=lower, upper=upper, exact=exact)


def ergodicity_beta(Q: IntervalRateOperator, delta: float, m: int = 1) -> Tuple[float, str]:
    """
    Best available upper bound on the coefficient of ergodicity of (I + delta Q)^m.

    Sources, tightest first: the exact two-state formula, the delta
    coefficient of a precise operator, the subset-scan upper bound. For two
    states and m > 1 the m-th power of the one-step value (submultiplicativity)
    competes with the scan.

    Returns:
        (beta, source) with source one of 'binary', 'binary-power', 'linear', 'upper-bound'
    """
    Q.check_step(delta)
    if m < 1:
        raise ContractViolationError(f"Block length must be a positive integer, got {m!r}")
    if Q.is_degenerate:
        matrix = np.linalg.matrix_power(Q.rate_matrix().transition_matrix(delta), int(m))
        return delta_coefficient(np.clip(matrix, 0.0, None)), 'linear'
    if Q.size == 2:
        one_step = binary_coefficient(BinaryModel.from_operator(Q), delta)
        if m == 1:
            return one_step, 'binary'
        power = one_step ** m
        scanned = coefficient_bounds(ApproximatingOperator.power(Q, delta, m)).upper
        return (power, 'binary-power') if power <= scanned else (scanned, 'upper-bound')
    bounds = coefficient_bounds(ApproximatingOperator.power(Q, delta, m))
    return bounds.upper, 'upper-bound'
