"""
State spaces and gambles (real-valued functions on a finite state space).

Gambles are plain 1-D float64 numpy arrays; `as_gamble` is the single place
where their validity (finite entries, matching length) is enforced.
"""
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ContractViolationError

Gamble = NDArray[np.float64]


@dataclass(frozen=True)
class StateSpace:
    """A finite state space with optional labels."""

    size: int
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 1:
            raise ContractViolationError(f"State space size must be a positive integer, got {self.size!r}")
        if self.labels is not None:
            labels = tuple(str(label) for label in self.labels)
            object.__setattr__(self, 'labels', labels)
            if len(labels) != self.size:
                raise ContractViolationError(
                    f"Expected {self.size} state labels, got {len(labels)}"
                )
            if len(set(labels)) != len(labels):
                raise ContractViolationError(f"State labels must be distinct: {list(labels)}")

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> 'StateSpace':
        return cls(size=len(labels), labels=tuple(labels))

    def label(self, index: int) -> str:
        """Label of a state, falling back to its index."""
        return self.labels[index] if self.labels is not None else str(index)

    def index(self, label: str) -> int:
        """Index of the state with the given label (or the label's integer value)."""
        if self.labels is not None and label in self.labels:
            return self.labels.index(label)
        try:
            index = int(label)
        except (TypeError, ValueError):
            raise ContractViolationError(f"Unknown state {label!r}")
        if not 0 <= index < self.size:
            raise ContractViolationError(f"State index {index} out of range for {self.size} states")
        return index

    def all_labels(self) -> Tuple[str, ...]:
        return tuple(self.label(i) for i in range(self.size))


def as_gamble(values: ArrayLike, size: Optional[int] = None) -> Gamble:
    """
    Validate and convert values to a gamble.

    Args:
        values: Array-like of reals (1-D, or 2-D with one gamble per column)
        size: Expected number of states (checked when given)

    Returns:
        A float64 numpy array (a copy when a conversion was needed)
    """
    array = np.asarray(values, dtype=np.float64)
    if array.ndim not in (1, 2):
        raise ContractViolationError(f"A gamble must be 1-D (or 2-D for a batch), got shape {array.shape}")
    if size is not None and array.shape[0] != size:
        raise ContractViolationError(
            f"Dimension mismatch: gamble has {array.shape[0]} entries, state space has {size}"
        )
    if not np.all(np.isfinite(array)):
        raise ContractViolationError("Gamble entries must be finite (no NaN or infinity)")
    return array


def indicator(size: int, states: Iterable[int]) -> Gamble:
    """Indicator gamble of a set of state indices."""
    gamble = np.zeros(size, dtype=np.float64)
    for state in states:
        gamble[state] = 1.0
    return gamble


def max_norm(f: Gamble) -> float:
    return float(np.max(np.abs(f)))


def variation(f: Gamble) -> float:
    return float(np.max(f) - np.min(f))


def centred_norm(f: Gamble) -> float:
    return variation(f) / 2.0


def gamble_norms(f: ArrayLike) -> Tuple[float, float, float]:
    """
    Compute the maximum norm, the variation seminorm and the centred seminorm.

    Args:
        f: The gamble

    Returns:
        (max_norm, variation, centred) tuple
    """
    f = as_gamble(f)
    v = variation(f)
    return max_norm(f), v, v / 2.0


def midpoint(f: Gamble) -> float:
    """(max f + min f) / 2, the constant closest to f in the maximum norm."""
    return float((np.max(f) + np.min(f)) / 2.0)
