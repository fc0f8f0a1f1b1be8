"""
Approximation of the limit lim_{t -> oo} T_t f of an ergodic operator.

For an ergodic lower transition rate operator T_t f converges to a constant.
Iterating Euler steps until the centred norm of the approximation is small
yields that constant (the midpoint of the approximation) with a guaranteed
error, which also holds for T_{t'} f at every later time t'.
"""
import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np
from numpy.typing import ArrayLike

from ..approximation.plans import check_finite
from ..config import get_settings
from ..errors import ContractViolationError, InapplicableError, NotErgodicError
from ..operators.gamble import Gamble, as_gamble, centred_norm, midpoint
from ..operators.rate_operator import IntervalRateOperator
from .coefficient import ergodicity_beta
from .reachability import check_ergodic

logger = logging.getLogger(__name__)

HALVING_LIMIT = 200
REFINE_STEPS = 40
INITIAL_STEP_FACTOR = 1.999

ProgressCallback = Callable[[int, Gamble, float], None]


@dataclass(frozen=True)
class AprioriDelta:
    """Pick delta up front so that the ergodic bound is at most epsilon / 2."""

    m: int = 1

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ContractViolationError(f"Block length m must be a positive integer, got {self.m!r}")


@dataclass(frozen=True)
class RunningBound:
    """
    Fixed step size; the error bound is accumulated while iterating.

    With `use_ergodic_bound` the accumulated bound is replaced by epsilon_e of
    the ergodic bound with m = 1 (requires beta < 1 for this step size).
    """

    delta: float
    use_ergodic_bound: bool = False

    def __post_init__(self):
        check_finite(delta=self.delta)
        if self.delta <= 0:
            raise ContractViolationError(f"Step size must be positive, got {self.delta!r}")


LimitStrategy = Union[AprioriDelta, RunningBound]


@dataclass(frozen=True)
class LimitResult:
    """
    Approximation of the limit with its guarantee.

    `value` is within `guaranteed_error` of lim T_t f. A run that hit the
    iteration cap has converged=False and an infinite guaranteed error.
    """

    value: float
    guaranteed_error: float
    iterations: int
    converged: bool
    delta: float = 0.0

    def to_dict(self) -> dict:
        return {
            'value': self.value,
            'guaranteed_error': self.guaranteed_error,
            'iterations': self.iterations,
            'converged': self.converged,
            'delta': self.delta,
        }

    def negated(self) -> 'LimitResult':
        """The result of the conjugate (upper) computation."""
        return replace(self, value=-self.value)


def _log_progress(iteration: int, g: Gamble, bound: float) -> None:
    logger.info("Limit iteration %d: centred norm %.6g, bound %.6g", iteration, centred_norm(g), bound)


def apriori_step(Q: IntervalRateOperator, fc: float, epsilon: float, m: int = 1) -> float:
    """
    Find delta with 2 m delta^2 ||Q||^2 ||f||_c <= (1 - beta) epsilon, where beta
    bounds the coefficient of ergodicity of (I + delta Q)^m.

    Starts at 1.999 / ||Q|| and halves until the condition holds, then bisects
    between the last two candidates to enlarge delta.

    Raises:
        InapplicableError: if no step size satisfies the condition
    """
    norm = Q.norm
    weight = 2 * m * norm * norm * fc

    def satisfied(delta: float) -> bool:
        beta, _ = ergodicity_beta(Q, delta, m)
        return beta < 1 and weight * delta * delta <= (1.0 - beta) * epsilon

    delta = INITIAL_STEP_FACTOR / norm
    for _ in range(HALVING_LIMIT):
        if satisfied(delta):
            break
        delta /= 2
    else:
        raise InapplicableError(
            f"No step size makes the ergodic bound smaller than {epsilon!r} (m={m}): "
            "the coefficient of ergodicity bound does not drop below 1"
        )

    low, high = delta, min(2 * delta, INITIAL_STEP_FACTOR / norm)
    if high > low:
        for _ in range(REFINE_STEPS):
            middle = (low + high) / 2
            if satisfied(middle):
                low = middle
            else:
                high = middle
    logger.debug("A-priori step size %.12g (m=%d)", low, m)
    return low


def limit_approximate(Q: IntervalRateOperator, f: ArrayLike, epsilon: float, strategy: LimitStrategy,
                      max_iterations: Optional[int] = None,
                      progress: Optional[ProgressCallback] = None) -> LimitResult:
    """
    Approximate lim_{t -> oo} T_t f for an ergodic operator.

    Args:
        Q: Ergodic lower transition rate operator
        f: Gamble
        epsilon: Maximal error (> 0)
        strategy: AprioriDelta(m) or RunningBound(delta)
        max_iterations: Iteration cap; defaults to ICTMC_MAX_ITERS
        progress: Called as progress(i, g_i, bound) every ICTMC_PROGRESS_EVERY iterations

    Returns:
        LimitResult; with RunningBound, converged is False when twice the
        accumulated bound exceeds epsilon

    Raises:
        NotErgodicError: if Q is not ergodic
        InapplicableError: if the coefficient bound is not below 1 where needed
    """
    check_finite(epsilon=epsilon)
    if epsilon <= 0:
        raise ContractViolationError(f"Maximal error must be positive, got {epsilon!r}")
    g = as_gamble(f, Q.size).copy()
    if g.ndim != 1:
        raise ContractViolationError("Limit approximation takes a single gamble")

    report = check_ergodic(Q)
    if not report.ergodic:
        raise NotErgodicError(report, labels=Q.state_space.all_labels())

    fc = centred_norm(g)
    if fc == 0:
        return LimitResult(value=midpoint(g), guaranteed_error=0.0, iterations=0, converged=True)

    settings = get_settings()
    cap = settings.max_iterations if max_iterations is None else int(max_iterations)
    every = settings.progress_every
    progress = progress or _log_progress

    if isinstance(strategy, AprioriDelta):
        return _run_apriori(Q, g, epsilon, strategy, cap, every, progress)
    if isinstance(strategy, RunningBound):
        return _run_running_bound(Q, g, epsilon, strategy, cap, every, progress)
    raise ContractViolationError(f"Unknown limit strategy: {strategy!r}")


def _capped(g: Gamble, iterations: int, delta: float) -> LimitResult:
    logger.warning("Limit iteration stopped at the cap of %d iterations without converging", iterations)
    return LimitResult(value=midpoint(g), guaranteed_error=float('inf'), iterations=iterations,
                       converged=False, delta=delta)


def _run_apriori(Q, g, epsilon, strategy: AprioriDelta, cap, every, progress) -> LimitResult:
    delta = apriori_step(Q, centred_norm(g), epsilon, strategy.m)
    Q.check_step(delta)
    threshold = epsilon / 2

    i = 0
    while centred_norm(g) > threshold:
        if i >= cap:
            return _capped(g, i, delta)
        g = g + delta * Q._apply_lower(g)
        i += 1
        if i % every == 0:
            progress(i, g, threshold)

    logger.info("A-priori limit run: %d iterations of %.6g", i, delta)
    return LimitResult(value=midpoint(g), guaranteed_error=epsilon, iterations=i, converged=True, delta=delta)


def _run_running_bound(Q, g, epsilon, strategy: RunningBound, cap, every, progress) -> LimitResult:
    delta = strategy.delta
    Q.check_step(delta)
    weight = delta * delta * Q.norm * Q.norm

    if strategy.use_ergodic_bound:
        beta, _ = ergodicity_beta(Q, delta, 1)
        if beta >= 1:
            raise InapplicableError(
                f"Coefficient of ergodicity {beta!r} >= 1 for delta={delta!r}: the ergodic bound is vacuous"
            )
        scale = weight * centred_norm(g) / (1.0 - beta)
        power = 1.0

    bound = 0.0
    i = 0
    gc = centred_norm(g)
    while gc > bound:
        if i >= cap:
            return _capped(g, i, delta)
        if strategy.use_ergodic_bound:
            power *= beta
            bound = scale * (1.0 - power)
        else:
            bound += weight * gc
        g = g + delta * Q._apply_lower(g)
        gc = centred_norm(g)
        i += 1
        if i % every == 0:
            progress(i, g, bound)

    guaranteed = 2.0 * bound
    converged = guaranteed <= epsilon
    if not converged:
        logger.warning("Running bound 2 epsilon' = %.6g exceeds the requested %.6g; use a smaller step",
                       guaranteed, epsilon)
    logger.info("Running-bound limit run: %d iterations of %.6g, guaranteed error %.6g", i, delta, guaranteed)
    return LimitResult(value=midpoint(g), guaranteed_error=guaranteed, iterations=i,
                       converged=converged, delta=delta)
