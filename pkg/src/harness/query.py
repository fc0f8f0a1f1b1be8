"""
Queries against a model: parsing, the method registry and dispatch.

A query is a JSON object such as

    {"f": {"sick": 1}, "t": 1, "epsilon": 1e-3, "method": "uniform"}

where `f` maps labels to values (unlisted states are 0) or lists the states
of an indicator gamble, and `t` is a horizon or "infinity" for limit queries.
A query file holds one query or a list of them.
"""
import logging
import math
import time
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..approximation import adaptive_approximate, run_uniform_plan, uniform_approximate, upper_approximate
from ..ergodicity import AprioriDelta, RunningBound, limit_approximate, uniform_ergodic_plan
from ..errors import ContractViolationError, InapplicableError, ModelValidationError
from ..operators.gamble import Gamble, StateSpace
from ..operators.rate_operator import IntervalRateOperator
from ..oracle import BinaryModel, analytic_limit, analytic_transient, exact_limit, exact_transient
from .model_file import parse_json

logger = logging.getLogger(__name__)

INFINITY = 'infinity'
BOUNDS = ('lower', 'upper')


@dataclass(frozen=True)
class QuerySpec:
    """One lower (or upper) expectation query."""

    f: Dict[str, float]
    t: float
    epsilon: float
    method: str = 'uniform'
    m: int = 1
    track_bound: bool = True
    delta_override: Optional[float] = None
    bound: str = 'lower'
    stop_early: bool = False
    alternate_bound: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ContractViolationError(f"Unknown method: {self.method}")
        if self.bound not in BOUNDS:
            raise ContractViolationError(f"Unknown bound {self.bound!r}, expected one of {BOUNDS}")
        if not (isinstance(self.epsilon, (int, float)) and math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ContractViolationError(f"epsilon must be a positive real, got {self.epsilon!r}")
        if int(self.m) != self.m or self.m < 1:
            raise ContractViolationError(f"m must be a positive integer, got {self.m!r}")
        if self.method == 'limit':
            if self.t != math.inf:
                raise ContractViolationError("Method 'limit' requires t = \"infinity\"")
        else:
            if not math.isfinite(self.t) or self.t < 0:
                raise ContractViolationError(
                    f"Method {self.method!r} needs a finite non-negative horizon, got {self.t!r}"
                )
            if self.delta_override is not None:
                raise ContractViolationError("delta_override is only used by method 'limit'")
        if self.delta_override is not None and not (math.isfinite(self.delta_override) and self.delta_override > 0):
            raise ContractViolationError(f"delta_override must be a positive real, got {self.delta_override!r}")

    def gamble(self, space: StateSpace) -> Gamble:
        values = np.zeros(space.size)
        for label, value in self.f.items():
            values[space.index(label)] = value
        return values

    def parameters(self) -> Dict[str, Any]:
        """The query as echoed in a report."""
        params = asdict(self)
        params['t'] = INFINITY if self.t == math.inf else self.t
        return params


def _parse_gamble(value: Any) -> Dict[str, float]:
    if isinstance(value, dict):
        result = {}
        for label, number in value.items():
            if isinstance(number, bool) or not isinstance(number, (int, float)) or not math.isfinite(number):
                raise ContractViolationError(f"Value of f at {label!r} must be a finite number, got {number!r}")
            result[str(label)] = float(number)
        return result
    if isinstance(value, list):
        return {str(label): 1.0 for label in value}
    raise ContractViolationError("f must map labels to values or list the states of an indicator")


def _parse_horizon(value: Any) -> float:
    if isinstance(value, str) and value.strip().lower() in (INFINITY, 'inf'):
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ContractViolationError(f"t must be a number or \"infinity\", got {value!r}")
    return float(value)


_FIELDS = ('f', 't', 'epsilon', 'method', 'm', 'track_bound', 'delta_override', 'bound',
           'stop_early', 'alternate_bound')


def query_from_dict(data: Any, space: Optional[StateSpace] = None) -> QuerySpec:
    """Build a QuerySpec, checking labels against the state space when given."""
    if not isinstance(data, dict):
        raise ContractViolationError("A query must be a JSON object")
    unknown = sorted(set(data) - set(_FIELDS))
    if unknown:
        raise ContractViolationError(f"Unknown query fields: {unknown}")
    for key in ('f', 't', 'epsilon'):
        if key not in data:
            raise ContractViolationError(f"Query is missing {key!r}")
    delta = data.get('delta_override')
    spec = QuerySpec(
        f=_parse_gamble(data['f']),
        t=_parse_horizon(data['t']),
        epsilon=data['epsilon'],
        method=data.get('method', 'uniform'),
        m=data.get('m', 1),
        track_bound=bool(data.get('track_bound', True)),
        delta_override=float(delta) if delta is not None else None,
        bound=data.get('bound', 'lower'),
        stop_early=bool(data.get('stop_early', False)),
        alternate_bound=bool(data.get('alternate_bound', False)),
    )
    if space is not None:
        for label in spec.f:
            space.index(label)
    return spec


def parse_queries(text: str, space: Optional[StateSpace] = None, path: Optional[str] = None) -> List[QuerySpec]:
    """
    Parse one query object or a list of them.

    Raises:
        ModelParseError: on invalid JSON
        ModelValidationError: on an invalid query
    """
    data = parse_json(text, path)
    items = data if isinstance(data, list) else [data]
    queries = []
    for i, item in enumerate(items):
        try:
            queries.append(query_from_dict(item, space))
        except ContractViolationError as e:
            raise ModelValidationError(f"Query {i}: {e}", path=path)
    return queries


def get_method_info() -> Dict[str, Dict[str, Any]]:
    """
    Get information about available approximation methods.

    Returns:
        Dictionary with method information
    """
    return METHODS


METHODS: Dict[str, Dict[str, Any]] = {
    'uniform': {
        'name': 'Uniform grid',
        'parameters': ['t', 'epsilon', 'track_bound', 'stop_early'],
        'guarantee': "error <= epsilon' <= epsilon",
        'description': 'n equal Euler steps with n fixed in advance from ||Q||, ||f||_c, t and epsilon',
    },
    'adaptive': {
        'name': 'Adaptive m-fold grid',
        'parameters': ['t', 'epsilon', 'm', 'track_bound', 'alternate_bound', 'stop_early'],
        'guarantee': "error <= epsilon' <= epsilon",
        'description': 'Blocks of m steps; the step size grows as the approximation flattens out',
    },
    'uniform-ergodic': {
        'name': 'Uniform grid with ergodic bound',
        'parameters': ['t', 'epsilon', 'm', 'track_bound', 'stop_early'],
        'guarantee': 'error <= epsilon_e <= epsilon',
        'description': 'Smallest uniform grid allowed by the coefficient of ergodicity (ergodic operators only)',
    },
    'limit': {
        'name': 'Limit value',
        'parameters': ['epsilon', 'm', 'delta_override'],
        'guarantee': 'error <= guaranteed_error (epsilon, or 2 epsilon\' with delta_override)',
        'description': 'lim T_t f for ergodic operators; a-priori step size, or a fixed step with a running bound',
    },
}


def exact_expectation(Q: IntervalRateOperator, f: Gamble, t: float, bound: str = 'lower') -> Optional[Gamble]:
    """Exact lower (or upper) expectation when a closed form or a linear solution exists."""
    if bound == 'upper':
        exact = exact_expectation(Q, -np.asarray(f, dtype=np.float64), t)
        return -exact if exact is not None else None
    try:
        if Q.size == 2:
            model = BinaryModel.from_operator(Q)
            if t == math.inf:
                return np.full(2, analytic_limit(model, f))
            return analytic_transient(model, f, t)
        if Q.is_degenerate:
            if t == math.inf:
                return np.full(Q.size, exact_limit(Q, f))
            return exact_transient(Q, f, t)
    except InapplicableError:
        return None
    return None


def _approximate(query: 'QuerySpec', method: Callable, Q, f, *args, **kwargs):
    if query.bound == 'upper':
        return upper_approximate(method, Q, f, *args, **kwargs)
    return method(Q, f, *args, **kwargs)


def _run_uniform(Q, f, query):
    trace = _approximate(query, uniform_approximate, Q, f, query.t, query.epsilon,
                         track_bound=query.track_bound, stop_early=query.stop_early)
    return trace.result, {'epsilon_prime': trace.epsilon_prime, 'iterations': trace.total_iterations,
                          'stopped_early': trace.stopped_early}


def _run_adaptive(Q, f, query):
    trace = _approximate(query, adaptive_approximate, Q, f, query.t, query.epsilon, m=query.m,
                         track_bound=query.track_bound, alternate_bound=query.alternate_bound,
                         stop_early=query.stop_early)
    return trace.result, {'epsilon_prime': trace.epsilon_prime, 'iterations': trace.total_iterations,
                          'blocks': len(trace.steps), 'stopped_early': trace.stopped_early}


def _run_uniform_ergodic(Q, f, query):
    # the plan depends on f only through its centred norm, which negation keeps
    plan = uniform_ergodic_plan(Q, f, query.t, query.epsilon, m=query.m)
    trace = _approximate(query, run_uniform_plan, Q, f, plan, track_bound=query.track_bound,
                         stop_early=query.stop_early)
    return trace.result, {'epsilon_prime': trace.epsilon_prime, 'guaranteed_error': plan.guaranteed_epsilon,
                          'iterations': trace.total_iterations, 'stopped_early': trace.stopped_early}


def _run_limit(Q, f, query):
    if query.delta_override is not None:
        strategy = RunningBound(query.delta_override)
    else:
        strategy = AprioriDelta(query.m)
    result = _approximate(query, limit_approximate, Q, f, query.epsilon, strategy)
    return np.full(Q.size, result.value), {'guaranteed_error': result.guaranteed_error,
                                           'iterations': result.iterations, 'converged': result.converged,
                                           'delta': result.delta}


_RUNNERS: Dict[str, Callable[[IntervalRateOperator, Gamble, QuerySpec], Tuple[Gamble, Dict[str, Any]]]] = {
    'uniform': _run_uniform,
    'adaptive': _run_adaptive,
    'uniform-ergodic': _run_uniform_ergodic,
    'limit': _run_limit,
}


def run_query(Q: IntervalRateOperator, query: QuerySpec) -> Dict[str, Any]:
    """
    Run one query and describe its outcome.

    Upper queries go through `upper_approximate`. For two-state and precise
    models the entry also holds the true error.

    Returns:
        Report entry with the result by label, bound figures, iterations and wall time
    """
    f = query.gamble(Q.state_space)
    runner = _RUNNERS[query.method]

    start = time.perf_counter()
    result, figures = runner(Q, f, query)
    wall_time = time.perf_counter() - start

    exact = exact_expectation(Q, f, query.t, query.bound)
    labels = Q.state_space.all_labels()
    entry = {
        'query': query.parameters(),
        'result': {label: float(value) for label, value in zip(labels, result)},
        'wall_time': wall_time,
        'true_error': float(np.max(np.abs(exact - result))) if exact is not None else None,
    }
    entry.update(figures)
    logger.info("Query %s (%s): %d iterations in %.3fs", query.method, query.bound,
                entry['iterations'], wall_time)
    return entry
