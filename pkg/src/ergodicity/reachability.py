"""
Ergodicity of a lower transition rate operator via reachability.

The operator is ergodic iff it is regularly absorbing: some states are upper
reachable from every state (the top class) and that class is lower
reachable from every other state.
"""
import logging
from dataclasses import dataclass
from typing import FrozenSet, Tuple

import numpy as np
from numpy.typing import NDArray

from ..operators.gamble import indicator
from ..operators.rate_operator import IntervalRateOperator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ErgodicityReport:
    """Outcome of the regularly-absorbing check."""

    top_class: FrozenSet[int]
    regular: bool
    absorbing: bool
    ergodic: bool
    # states from which the top class is lower reachable
    lower_reachable: FrozenSet[int] = frozenset()

    def to_dict(self, labels: Tuple[str, ...] = None) -> dict:
        def name(x):
            return labels[x] if labels is not None else x
        return {
            'top_class': [name(x) for x in sorted(self.top_class)],
            'regular': self.regular,
            'absorbing': self.absorbing,
            'ergodic': self.ergodic,
            'lower_reachable': [name(x) for x in sorted(self.lower_reachable)],
        }


def upper_reachability(Q: IntervalRateOperator) -> NDArray[np.bool_]:
    """
    Upper reachability relation as a boolean matrix.

    Entry (y, x) is True iff x is upper reachable from y: x == y, or there is
    a path y = x_0, ..., x_n = x with [upper Q I_{x_k}](x_{k-1}) > 0 on every
    edge.
    """
    n = Q.size
    # column b holds upper Q applied to the indicator of b
    upper_images = Q.apply_upper(np.eye(n))
    reach = (upper_images > 0) | np.eye(n, dtype=bool)
    for k in range(n):
        reach |= reach[:, k:k + 1] & reach[k:k + 1, :]
    return reach


def _lower_reachable_set(Q: IntervalRateOperator, target: FrozenSet[int]) -> FrozenSet[int]:
    """Fixpoint of B_{k+1} = B_k + {y not in B_k : [Q I_{B_k}](y) > 0}, from B_0 = target."""
    reached = set(target)
    if not reached:
        return frozenset()
    while True:
        values = Q.apply_lower(indicator(Q.size, reached))
        added = {y for y in range(Q.size) if y not in reached and values[y] > 0}
        if not added:
            return frozenset(reached)
        reached |= added


def check_ergodic(Q: IntervalRateOperator) -> ErgodicityReport:
    """
    Check whether Q is regularly absorbing, hence ergodic.

    Args:
        Q: Lower transition rate operator

    Returns:
        ErgodicityReport with the top class and both conditions
    """
    reach = upper_reachability(Q)
    top_class = frozenset(int(x) for x in np.flatnonzero(reach.all(axis=0)))
    regular = bool(top_class)
    lower_reachable = _lower_reachable_set(Q, top_class)
    absorbing = regular and len(lower_reachable) == Q.size
    report = ErgodicityReport(
        top_class=top_class,
        regular=regular,
        absorbing=absorbing,
        ergodic=regular and absorbing,
        lower_reachable=lower_reachable,
    )
    logger.debug("Ergodicity check: %s", report)
    return report
