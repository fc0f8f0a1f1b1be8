"""
Error bounds that exploit ergodicity, and the uniform plan they allow.
"""
import logging
import math
from typing import Dict, Optional, Tuple

from numpy.typing import ArrayLike

from ..approximation.plans import UniformPlan, ceil_snapped, check_finite, check_query
from ..approximation.uniform import uniform_plan
from ..errors import ContractViolationError, InapplicableError, NotErgodicError
from ..operators.gamble import as_gamble, centred_norm
from ..operators.rate_operator import STEP_SLACK, IntervalRateOperator
from .coefficient import ergodicity_beta
from .reachability import check_ergodic

logger = logging.getLogger(__name__)

# downward candidates examined after the bisection
PLAN_SCAN_WIDTH = 64


def _check_block(m: int, n: int) -> None:
    if int(m) != m or m < 1:
        raise ContractViolationError(f"Block length m must be a positive integer, got {m!r}")
    if int(n) != n or n < 0:
        raise ContractViolationError(f"Iteration count n must be a non-negative integer, got {n!r}")


def ergodic_error_bound(Q: IntervalRateOperator, f: ArrayLike, delta: float, m: int, n: int,
                        beta: Optional[float] = None) -> Tuple[float, float]:
    """
    Bound the error of n uniform steps of size delta using the coefficient of
    ergodicity beta of (I + delta Q)^m.

    With c = m delta^2 ||Q||^2 ||f||_c and k = ceil(n / m):
    epsilon_e = c (1 - beta^k) / (1 - beta) <= epsilon_d = c / (1 - beta).

    Args:
        Q: Lower transition rate operator
        f: Gamble
        delta: Step size (delta * ||Q|| <= 2)
        m: Block length of the coefficient
        n: Number of steps
        beta: Coefficient to use; computed with `ergodicity_beta` when omitted

    Returns:
        (epsilon_e, epsilon_d)

    Raises:
        InapplicableError: if beta >= 1, which makes the bound vacuous
    """
    check_finite(delta=delta)
    _check_block(m, n)
    f = as_gamble(f, Q.size)
    Q.check_step(delta)
    fc = centred_norm(f)
    if fc == 0:
        return 0.0, 0.0

    if beta is None:
        beta, _ = ergodicity_beta(Q, delta, m)
    if beta >= 1:
        raise InapplicableError(
            f"Coefficient of ergodicity {beta!r} >= 1 for delta={delta!r}, m={m}: the ergodic bound is vacuous"
        )
    c = m * delta * delta * Q.norm * Q.norm * fc
    k = -(-n // m)
    epsilon_d = c / (1.0 - beta)
    epsilon_e = c * (1.0 - beta ** k) / (1.0 - beta)
    return epsilon_e, epsilon_d


def uniform_ergodic_plan(Q: IntervalRateOperator, f: ArrayLike, t: float, epsilon: float,
                         m: int = 1) -> UniformPlan:
    """
    Find a small n such that n uniform steps of size t / n approximate T_t f
    within epsilon according to the ergodic bound, i.e.

        m delta^2 ||Q||^2 ||f||_c (1 - beta^k) <= (1 - beta) epsilon.

    The search bisects between the smallest valid n and the n of `uniform_plan`,
    then scans a few candidates below the result since the left side is not
    known to be monotone in n. The returned n is the smallest one found.

    Returns:
        UniformPlan whose `guaranteed_epsilon` is epsilon_e at the chosen n

    Raises:
        NotErgodicError: if Q is not ergodic
        InapplicableError: if beta >= 1 at both ends of the search range
    """
    check_query(t, epsilon)
    _check_block(m, 0)
    f = as_gamble(f, Q.size)
    report = check_ergodic(Q)
    if not report.ergodic:
        raise NotErgodicError(report, labels=Q.state_space.all_labels())

    base = uniform_plan(Q, f, t, epsilon)
    if base.n == 0:
        return UniformPlan(0, 0.0, epsilon, guaranteed_epsilon=0.0)

    norm = Q.norm
    weight = m * norm * norm * centred_norm(f)
    n_low = max(1, ceil_snapped(t * norm / 2))
    while (t / n_low) * norm > 2.0 + STEP_SLACK:
        n_low += 1
    n_high = max(base.n, n_low)

    probes: Dict[int, Optional[float]] = {}

    def bound_at(n: int) -> Optional[float]:
        """epsilon_e for n steps, None when beta >= 1."""
        if n not in probes:
            delta = t / n
            beta, source = ergodicity_beta(Q, delta, m)
            if beta >= 1:
                probes[n] = None
            else:
                k = -(-n // m)
                probes[n] = weight * delta * delta * (1.0 - beta ** k) / (1.0 - beta)
            logger.debug("Ergodic plan probe n=%d: beta=%.12g (%s), epsilon_e=%s", n, beta, source, probes[n])
        return probes[n]

    def qualifies(n: int) -> bool:
        bound = bound_at(n)
        return bound is not None and bound <= epsilon

    if not qualifies(n_high):
        if bound_at(n_high) is None and bound_at(n_low) is None:
            raise InapplicableError(
                f"Coefficient of ergodicity >= 1 for every admissible step (m={m}): no ergodic plan"
            )
        logger.info("Ergodic bound does not improve on the uniform plan (n=%d)", base.n)
        return base

    if qualifies(n_low):
        best = n_low
    else:
        low, high = n_low, n_high
        while high - low > 1:
            middle = (low + high) // 2
            if qualifies(middle):
                high = middle
            else:
                low = middle
        best = high

    for candidate in range(best - 1, max(n_low, best - PLAN_SCAN_WIDTH) - 1, -1):
        if qualifies(candidate):
            best = candidate

    guaranteed = bound_at(best)
    logger.info("Ergodic plan: n=%d (uniform plan n=%d), epsilon_e=%.6g", best, base.n, guaranteed)
    return UniformPlan(best, t / best, epsilon, guaranteed_epsilon=guaranteed)
