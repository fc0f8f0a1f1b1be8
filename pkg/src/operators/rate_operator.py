"""
Lower transition rate operators given by row-wise rate intervals.

For every pair of distinct states x, y the rate from x to y is only known to
lie in [l_xy, u_xy]. The lower transition rate operator is the row-wise
minimum over those rates,

    [Q f](x) = min sum_{y != x} q(x, y) (f(y) - f(x)),

which the greedy choice q(x, y) = l_xy when f(y) >= f(x) and u_xy otherwise
attains. Exact rate matrices are the degenerate case l = u.
"""
import logging
from typing import Dict, Mapping, Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ContractViolationError, SizeLimitError, StepTooLargeError
from .gamble import Gamble, StateSpace, as_gamble

logger = logging.getLogger(__name__)

# absolute slack on delta * ||Q|| <= 2, so that delta = 2 / ||Q|| passes
STEP_SLACK = 1e-12
ROW_SUM_TOLERANCE = 1e-12
CORNER_STATE_LIMIT = 5
_CORNER_CHUNK = 1 << 14


def _pairwise_differences(f: np.ndarray) -> np.ndarray:
    """diff[x, y] = f(y) - f(x); a trailing batch axis is kept."""
    if f.ndim == 1:
        return f[np.newaxis, :] - f[:, np.newaxis]
    return f[np.newaxis, :, :] - f[:, np.newaxis, :]


class RateMatrix:
    """A precise transition rate matrix (generator) of a continuous-time Markov chain."""

    def __init__(self, matrix: ArrayLike):
        matrix = np.array(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ContractViolationError(f"A rate matrix must be square, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise ContractViolationError("Rate matrix entries must be finite")
        off = matrix.copy()
        np.fill_diagonal(off, 0.0)
        if np.any(off < 0):
            raise ContractViolationError("Off-diagonal rates must be non-negative")
        magnitude = np.abs(off).sum(axis=1)
        row_sums = matrix.sum(axis=1)
        if np.any(np.abs(row_sums) > ROW_SUM_TOLERANCE * np.maximum(magnitude, 1.0)):
            raise ContractViolationError(f"Rate matrix rows must sum to zero, got row sums {row_sums}")
        self.matrix = matrix
        self._off_diagonal = off
        self.matrix.setflags(write=False)

    @classmethod
    def from_off_diagonal(cls, off_diagonal: ArrayLike) -> 'RateMatrix':
        """Build a rate matrix whose diagonal is minus the off-diagonal row sum."""
        off = np.array(off_diagonal, dtype=np.float64)
        np.fill_diagonal(off, 0.0)
        matrix = off.copy()
        np.fill_diagonal(matrix, -off.sum(axis=1))
        return cls(matrix)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def apply(self, f: ArrayLike) -> Gamble:
        """
        Apply the matrix to a gamble in generator form sum_{y != x} Q(x,y)(f(y) - f(x)).

        Mathematically equal to `matrix @ f`; the generator form keeps the
        evaluation order of the lower transition rate operator.
        """
        f = as_gamble(f, self.size)
        coefficients = self._off_diagonal if f.ndim == 1 else self._off_diagonal[:, :, np.newaxis]
        return (coefficients * _pairwise_differences(f)).sum(axis=1)

    def transition_matrix(self, delta: float) -> NDArray[np.float64]:
        """The matrix I + delta Q."""
        return np.eye(self.size) + delta * self.matrix

    def __repr__(self):
        return f"RateMatrix({self.matrix.tolist()!r})"


class IntervalRateOperator:
    """
    Lower transition rate operator with independent off-diagonal rate intervals.

    Diagonal entries of the bound matrices are ignored and stored as zero.
    """

    def __init__(self, state_space: Union[StateSpace, int], lower: ArrayLike, upper: ArrayLike):
        """
        Initialize the operator.

        Args:
            state_space: StateSpace (or its size)
            lower: Matrix of off-diagonal rate lower bounds l_xy
            upper: Matrix of off-diagonal rate upper bounds u_xy
        """
        if not isinstance(state_space, StateSpace):
            state_space = StateSpace(int(state_space))
        self.state_space = state_space
        n = state_space.size

        lower = np.array(lower, dtype=np.float64)
        upper = np.array(upper, dtype=np.float64)
        for name, bounds in (('lower', lower), ('upper', upper)):
            if bounds.shape != (n, n):
                raise ContractViolationError(
                    f"{name} rate matrix must have shape {(n, n)}, got {bounds.shape}"
                )
        np.fill_diagonal(lower, 0.0)
        np.fill_diagonal(upper, 0.0)
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ContractViolationError("Rate bounds must be finite")
        if np.any(lower < 0):
            raise ContractViolationError("Rate lower bounds must be non-negative")
        if np.any(lower > upper):
            x, y = np.argwhere(lower > upper)[0]
            raise ContractViolationError(
                f"Inverted rate interval from {state_space.label(x)} to {state_space.label(y)}: "
                f"[{lower[x, y]!r}, {upper[x, y]!r}]"
            )

        lower.setflags(write=False)
        upper.setflags(write=False)
        self.lower = lower
        self.upper = upper
        self._norm = 2.0 * float(np.max(upper.sum(axis=1))) if n > 0 else 0.0

    @classmethod
    def from_intervals(cls, state_space: Union[StateSpace, int],
                       intervals: Mapping[Tuple[int, int], Tuple[float, float]]) -> 'IntervalRateOperator':
        """
        Build an operator from a {(x, y): (low, high)} mapping; missing pairs are [0, 0].
        """
        size = state_space.size if isinstance(state_space, StateSpace) else int(state_space)
        lower = np.zeros((size, size))
        upper = np.zeros((size, size))
        for (x, y), (low, high) in intervals.items():
            if x == y:
                raise ContractViolationError(f"Rate interval from state {x} to itself")
            lower[x, y] = low
            upper[x, y] = high
        return cls(state_space, lower, upper)

    @classmethod
    def from_rate_matrix(cls, matrix: Union[RateMatrix, ArrayLike],
                         state_space: Optional[StateSpace] = None) -> 'IntervalRateOperator':
        """Degenerate operator l = u equal to a precise rate matrix."""
        if not isinstance(matrix, RateMatrix):
            matrix = RateMatrix(matrix)
        space = state_space or StateSpace(matrix.size)
        return cls(space, matrix._off_diagonal, matrix._off_diagonal)

    @property
    def size(self) -> int:
        return self.state_space.size

    @property
    def is_degenerate(self) -> bool:
        """True when every interval is a single rate, i.e. the operator is linear."""
        return bool(np.array_equal(self.lower, self.upper))

    def rate_matrix(self) -> RateMatrix:
        """The precise rate matrix of a degenerate operator."""
        if not self.is_degenerate:
            raise ContractViolationError("Operator is not degenerate (l != u somewhere)")
        return RateMatrix.from_off_diagonal(self.lower)

    def intervals(self) -> Dict[Tuple[int, int], Tuple[float, float]]:
        """Non-zero rate intervals as a {(x, y): (low, high)} mapping."""
        result = {}
        for x in range(self.size):
            for y in range(self.size):
                if x != y and (self.lower[x, y] != 0 or self.upper[x, y] != 0):
                    result[(x, y)] = (float(self.lower[x, y]), float(self.upper[x, y]))
        return result

    def _greedy(self, f: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        diff = _pairwise_differences(f)
        if f.ndim == 1:
            lower, upper = self.lower, self.upper
        else:
            lower, upper = self.lower[:, :, np.newaxis], self.upper[:, :, np.newaxis]
        # ties (diff == 0) take the lower rate
        return np.where(diff >= 0, lower, upper), diff

    def _apply_lower(self, f: np.ndarray) -> np.ndarray:
        coefficients, diff = self._greedy(f)
        return (coefficients * diff).sum(axis=1)

    def apply_lower(self, f: ArrayLike) -> Gamble:
        """
        Apply the lower transition rate operator.

        Args:
            f: Gamble (or 2-D array with one gamble per column)

        Returns:
            The gamble Q f
        """
        return self._apply_lower(as_gamble(f, self.size))

    def apply_upper(self, f: ArrayLike) -> Gamble:
        """Apply the conjugate upper operator, -Q(-f)."""
        return -self._apply_lower(-as_gamble(f, self.size))

    def operator_norm(self) -> float:
        """||Q|| = 2 max_x |[Q I_x](x)| = 2 max_x sum_{y != x} u_xy."""
        return self._norm

    @property
    def norm(self) -> float:
        return self._norm

    def check_step(self, delta: float) -> None:
        """Raise StepTooLargeError unless 0 <= delta and delta * ||Q|| <= 2."""
        if not np.isfinite(delta) or delta < 0:
            raise ContractViolationError(f"Step size must be a non-negative real, got {delta!r}")
        if delta * self._norm > 2.0 + STEP_SLACK:
            raise StepTooLargeError(delta, self._norm)

    def euler_step(self, delta: float, f: ArrayLike, check: bool = True) -> Gamble:
        """
        Compute (I + delta Q) f.

        Args:
            delta: Step size
            f: Gamble (or batch of gambles as columns)
            check: Verify delta * ||Q|| <= 2 first; without it the result
                need not come from a lower transition operator

        Returns:
            The gamble f + delta Q f
        """
        if check:
            self.check_step(delta)
        f = as_gamble(f, self.size)
        return f + delta * self._apply_lower(f)

    def dominating_matrix_for(self, f: ArrayLike) -> RateMatrix:
        """The greedy corner rate matrix M with M f = Q f."""
        f = as_gamble(f, self.size)
        if f.ndim != 1:
            raise ContractViolationError("dominating_matrix_for takes a single gamble")
        coefficients, _ = self._greedy(f)
        return RateMatrix.from_off_diagonal(coefficients)

    def corner_envelope_apply(self, f: ArrayLike) -> Gamble:
        """
        Componentwise minimum of M f over all corner rate matrices M.

        Enumerates all 2^(n(n-1)) matrices with every off-diagonal rate at
        one of its interval ends. Meant as a brute-force reference for
        `apply_lower` on small state spaces.
        """
        n = self.size
        if n > CORNER_STATE_LIMIT:
            raise SizeLimitError('Corner enumeration', n, CORNER_STATE_LIMIT)
        f = as_gamble(f, n)
        if f.ndim != 1:
            raise ContractViolationError("corner_envelope_apply takes a single gamble")
        diff = _pairwise_differences(f)
        rows, cols = np.nonzero(~np.eye(n, dtype=bool))
        positions = len(rows)
        low = self.lower[rows, cols]
        high = self.upper[rows, cols]
        shifts = np.arange(positions, dtype=np.int64)

        result = np.full(n, np.inf)
        total = 1 << positions
        for start in range(0, total, _CORNER_CHUNK):
            codes = np.arange(start, min(total, start + _CORNER_CHUNK), dtype=np.int64)
            use_high = ((codes[:, np.newaxis] >> shifts) & 1).astype(bool)
            coefficients = np.zeros((len(codes), n, n))
            coefficients[:, rows, cols] = np.where(use_high, high, low)
            values = (coefficients * diff).sum(axis=2)
            result = np.minimum(result, values.min(axis=0))
        return result

    def __repr__(self):
        return (f"IntervalRateOperator(size={self.size}, norm={self._norm!r}, "
                f"intervals={self.intervals()!r})")
