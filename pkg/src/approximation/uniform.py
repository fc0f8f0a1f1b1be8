"""
Uniform grid approximation of T_t f: n equal Euler steps of size t / n.
"""
import logging
from typing import Iterable

from numpy.typing import ArrayLike

from ..operators.gamble import Gamble, as_gamble, centred_norm
from ..operators.rate_operator import STEP_SLACK, IntervalRateOperator
from ..operators.transition import ApproximatingOperator
from .plans import ApproxTrace, UniformPlan, ceil_snapped, check_query
from .stopping import remaining_cost_stop

logger = logging.getLogger(__name__)


def uniform_plan(Q: IntervalRateOperator, f: ArrayLike, t: float, epsilon: float) -> UniformPlan:
    """
    Choose n = ceil(max{t ||Q|| / 2, t^2 ||Q||^2 ||f||_c / epsilon}) and delta = t / n.

    Args:
        Q: Lower transition rate operator
        f: Gamble
        t: Time horizon (>= 0)
        epsilon: Maximal error (> 0)

    Returns:
        UniformPlan; (0, 0) when ||f||_c = 0, ||Q|| = 0 or t = 0
    """
    check_query(t, epsilon)
    f = as_gamble(f, Q.size)
    norm = Q.norm
    fc = centred_norm(f)
    if fc == 0 or norm == 0 or t == 0:
        return UniformPlan(0, 0.0, epsilon)

    n = max(1, ceil_snapped(max(t * norm / 2, t * t * norm * norm * fc / epsilon)))
    while (t / n) * norm > 2.0 + STEP_SLACK:
        n += 1
    return UniformPlan(n, t / n, epsilon)


def run_uniform_plan(Q: IntervalRateOperator, f: ArrayLike, plan: UniformPlan,
                     track_bound: bool = True, stop_early: bool = False) -> ApproxTrace:
    """
    Iterate g_{i+1} = g_i + delta Q g_i for the n steps of a plan.

    Args:
        Q: Lower transition rate operator
        f: Initial gamble g_0
        plan: Uniform plan to execute
        track_bound: Accumulate epsilon' = delta^2 ||Q||^2 sum_i ||g_i||_c
        stop_early: Stop as soon as remaining_cost_stop allows it (implies tracking)

    Returns:
        ApproxTrace with the final gamble
    """
    g = as_gamble(f, Q.size).copy()
    track = track_bound or stop_early
    if plan.n == 0:
        return ApproxTrace(result=g, epsilon_prime=0.0 if track else None, total_iterations=0)

    delta = plan.delta
    Q.check_step(delta)
    weight = delta * delta * Q.norm * Q.norm
    epsilon_prime = 0.0
    iterations = plan.n
    stopped = False

    for i in range(plan.n):
        if track:
            if stop_early and remaining_cost_stop(plan.target_epsilon, epsilon_prime, g):
                iterations, stopped = i, True
                break
            epsilon_prime += weight * centred_norm(g)
        g = g + delta * Q._apply_lower(g)

    logger.info("Uniform run: %d iterations of %.6g, epsilon'=%s%s", iterations, delta,
                epsilon_prime if track else 'untracked', ' (stopped early)' if stopped else '')
    return ApproxTrace(
        result=g,
        epsilon_prime=epsilon_prime if track else None,
        total_iterations=iterations,
        steps=((delta, iterations),) if iterations > 0 else (),
        stopped_early=stopped,
    )


def uniform_approximate(Q: IntervalRateOperator, f: ArrayLike, t: float, epsilon: float,
                        track_bound: bool = True, stop_early: bool = False) -> ApproxTrace:
    """Approximate T_t f within epsilon on the uniform grid chosen by `uniform_plan`."""
    plan = uniform_plan(Q, f, t, epsilon)
    return run_uniform_plan(Q, f, plan, track_bound=track_bound, stop_early=stop_early)


def compose_steps(Q: IntervalRateOperator, f: ArrayLike, steps: Iterable[float]) -> Gamble:
    """Apply (I + d_k Q) ... (I + d_1 Q) to f, the first step first."""
    return ApproximatingOperator(Q, steps).apply_lower(f)
