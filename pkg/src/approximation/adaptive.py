"""
Adaptive m-fold grid approximation of T_t f.

The step size is re-evaluated every m iterations from the current centred
norm, so it grows as the approximation flattens out.
"""
import logging
import math

from numpy.typing import ArrayLike

from ..errors import ContractViolationError
from ..operators.gamble import as_gamble, centred_norm
from ..operators.rate_operator import STEP_SLACK, IntervalRateOperator
from .plans import ApproxTrace, check_query
from .stopping import remaining_cost_stop

logger = logging.getLogger(__name__)


def adaptive_approximate(Q: IntervalRateOperator, f: ArrayLike, t: float, epsilon: float,
                         m: int = 1, track_bound: bool = True, alternate_bound: bool = False,
                         stop_early: bool = False) -> ApproxTrace:
    """
    Approximate T_t f within epsilon with blocks of m equal steps.

    Per block, delta_i = min{Delta, 2 / ||Q||, epsilon / (t ||Q||^2 ||g||_c)}
    where Delta is the remaining time and g the block's starting gamble; a
    final block that would overshoot uses k_i = ceil(Delta / delta_i) steps of
    size Delta / k_i.

    Args:
        Q: Lower transition rate operator
        f: Gamble
        t: Time horizon (>= 0)
        epsilon: Maximal error (> 0)
        m: Block length (>= 1)
        track_bound: Accumulate epsilon' per iteration
        alternate_bound: Use the looser k_i ||g_(i-1,m)||_c per block instead
        stop_early: Stop once remaining_cost_stop allows it (implies tracking)

    Returns:
        ApproxTrace whose steps are the (delta_i, k_i) blocks
    """
    check_query(t, epsilon)
    if int(m) != m or m < 1:
        raise ContractViolationError(f"Block length m must be a positive integer, got {m!r}")
    m = int(m)
    g = as_gamble(f, Q.size).copy()
    track = track_bound or stop_early
    norm = Q.norm

    if centred_norm(g) == 0 or norm == 0 or t == 0:
        return ApproxTrace(result=g, epsilon_prime=0.0 if track else None, total_iterations=0)

    remaining = t
    epsilon_prime = 0.0
    blocks = []
    iterations = 0
    stopped = False
    max_step = 2.0 / norm
    debug = logger.isEnabledFor(logging.DEBUG)

    block_norm = centred_norm(g)
    while remaining > 0 and block_norm > 0:
        delta = min(remaining, max_step, epsilon / (t * norm * norm * block_norm))
        if m * delta > remaining:
            k = int(math.ceil(remaining / delta))
            delta = remaining / k
            if delta * norm > 2.0 + STEP_SLACK:
                k += 1
                delta = remaining / k
            remaining = 0.0
        else:
            k = m
            remaining -= k * delta

        weight = delta * delta * norm * norm
        if track and alternate_bound and not stop_early:
            epsilon_prime += k * weight * block_norm

        done = 0
        for j in range(k):
            if track and (stop_early or not alternate_bound):
                if stop_early and remaining_cost_stop(epsilon, epsilon_prime, g):
                    stopped = True
                    break
                c = block_norm if j == 0 else centred_norm(g)
                epsilon_prime += weight * c
            g = g + delta * Q._apply_lower(g)
            done += 1

        if done:
            blocks.append((delta, done))
            iterations += done
        if debug:
            logger.debug("Block %d: delta=%.6g k=%d remaining=%.6g epsilon'=%.6g",
                         len(blocks), delta, done, remaining, epsilon_prime)
        if stopped:
            break
        block_norm = centred_norm(g)

    logger.info("Adaptive run (m=%d): %d iterations in %d blocks, epsilon'=%s%s", m, iterations,
                len(blocks), epsilon_prime if track else 'untracked',
                ' (stopped early)' if stopped else '')
    return ApproxTrace(
        result=g,
        epsilon_prime=epsilon_prime if track else None,
        total_iterations=iterations,
        steps=tuple(blocks),
        stopped_early=stopped,
    )
