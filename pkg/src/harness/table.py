"""
Comparison of the approximation methods on the two-state model.

Each configuration approximates T_1 I_sick and reports the number of
iterations, the mean durations without and with tracking of epsilon', the
bound epsilon' and the true error, both scaled by 10^3.
"""
import csv
import io
import logging
import os
import time
from dataclasses import dataclass
from functools import partial
from typing import Callable, List, Optional, Union

import numpy as np

from ..approximation import ApproxTrace, adaptive_approximate, run_uniform_plan, uniform_approximate
from ..ergodicity import uniform_ergodic_plan
from ..operators.gamble import Gamble
from ..operators.rate_operator import IntervalRateOperator
from .model_file import load_model
from .query import exact_expectation

logger = logging.getLogger(__name__)

DEFAULT_FIXTURE = os.path.normpath(
    os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', '..', 'models', 'healthy-sick.json'))
TABLE_COLUMNS = ['method', 'N', 'D_eps', 'D_eps_prime', 'eps_prime_e3', 'eps_a_e3']
HORIZON = 1.0


@dataclass(frozen=True)
class TableRow:
    method: str
    n: int
    duration: float
    duration_tracked: float
    epsilon_prime: float
    true_error: Optional[float]

    def cells(self) -> List[str]:
        return [
            self.method,
            str(self.n),
            f"{self.duration:#.3g}",
            f"{self.duration_tracked:#.3g}",
            f"{self.epsilon_prime * 1e3:#.3g}",
            f"{self.true_error * 1e3:#.3g}" if self.true_error is not None else '',
        ]


def _uniform_ergodic(Q, f, t, epsilon, m=1, track_bound=True) -> ApproxTrace:
    plan = uniform_ergodic_plan(Q, f, t, epsilon, m=m)
    return run_uniform_plan(Q, f, plan, track_bound=track_bound)


def configurations():
    """(label, method) pairs; each method maps (Q, f, t, track_bound) to an ApproxTrace."""
    return [
        ('Uniform eps=1e-3', partial(uniform_approximate, epsilon=1e-3)),
        ('Uniform eps=3.2e-2', partial(uniform_approximate, epsilon=3.2e-2)),
        ('Adaptive m=1', partial(adaptive_approximate, epsilon=1e-3, m=1)),
        ('Adaptive m=20', partial(adaptive_approximate, epsilon=1e-3, m=20)),
        ('Uniform ergodic m=1', partial(_uniform_ergodic, epsilon=1e-3, m=1)),
    ]


def _timed(method: Callable[..., ApproxTrace], Q: IntervalRateOperator, f: Gamble,
           track_bound: bool, repeats: int):
    durations = []
    trace = None
    for _ in range(repeats):
        start = time.perf_counter()
        trace = method(Q, f, t=HORIZON, track_bound=track_bound)
        durations.append(time.perf_counter() - start)
    return trace, float(np.mean(durations))


def reproduce_table(fixture: Union[str, IntervalRateOperator] = DEFAULT_FIXTURE,
                    repeats: int = 50, state: Union[str, int] = 'sick') -> List[TableRow]:
    """
    Run every configuration `repeats` times with and without bound tracking.

    Args:
        fixture: Model file path or operator
        repeats: Number of runs the durations are averaged over
        state: State whose indicator is the gamble

    Returns:
        One TableRow per configuration
    """
    if repeats < 1:
        raise ValueError(f"repeats must be positive, got {repeats}")
    Q = load_model(fixture) if isinstance(fixture, str) else fixture
    f = np.zeros(Q.size)
    f[Q.state_space.index(state)] = 1.0
    exact = exact_expectation(Q, f, HORIZON)

    rows = []
    for label, method in configurations():
        _, duration = _timed(method, Q, f, False, repeats)
        trace, duration_tracked = _timed(method, Q, f, True, repeats)
        true_error = trace.true_error(exact) if exact is not None else None
        rows.append(TableRow(label, trace.total_iterations, duration, duration_tracked,
                             trace.epsilon_prime, true_error))
        logger.info("%s: N=%d, epsilon'=%.3g", label, trace.total_iterations, trace.epsilon_prime)
    return rows


def table_to_csv(rows: List[TableRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(TABLE_COLUMNS)
    for row in rows:
        writer.writerow(row.cells())
    return buffer.getvalue()
