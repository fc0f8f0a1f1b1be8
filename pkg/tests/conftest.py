"""
Shared fixtures and the `slow` marker.

Slow tests run only with `pytest --runslow`.
"""
import os

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
MODELS_DIR = os.path.join(ROOT, 'models')


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='Run slow tests')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long-running computation (enable with --runslow)')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def healthy_sick():
    """The two-state healthy/sick operator, q0 in [1/52, 3/52], q1 in [1/2, 2]."""
    from src.oracle import BinaryModel
    from src.operators import StateSpace

    return BinaryModel.healthy_sick().to_operator(StateSpace.from_labels(['healthy', 'sick']))


@pytest.fixture
def indicator_sick():
    import numpy as np

    return np.array([0.0, 1.0])


@pytest.fixture
def counterexample():
    """Two states with lower rates 0 and upper rates 1: ergodic, yet the subset upper bound is 1."""
    from src.oracle import BinaryModel

    return BinaryModel(0.0, 1.0, 0.0, 1.0).to_operator()


@pytest.fixture
def disconnected():
    """Two absorbing states without any transition between them."""
    from src.operators import IntervalRateOperator

    return IntervalRateOperator.from_intervals(2, {})


@pytest.fixture
def chain():
    """Precise chain 0 -> 1 -> 2 with unit rates and no way back."""
    from src.operators import IntervalRateOperator

    return IntervalRateOperator.from_intervals(3, {(0, 1): (1.0, 1.0), (1, 2): (1.0, 1.0)})


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240611)


def random_interval_operator(rng, size, high=2.0, zero_probability=0.0):
    """Random operator with intervals inside [0, high]; some pairs may be [0, 0]."""
    from src.operators import IntervalRateOperator
    import numpy as np

    a = rng.uniform(0.0, high, (size, size))
    b = rng.uniform(0.0, high, (size, size))
    lower, upper = np.minimum(a, b), np.maximum(a, b)
    if zero_probability:
        mask = rng.uniform(size=(size, size)) < zero_probability
        lower[mask] = 0.0
        upper[mask] = 0.0
    return IntervalRateOperator(size, lower, upper)


@pytest.fixture
def random_operator(rng):
    """Factory drawing random interval operators from the shared generator."""
    def make(size, **kwargs):
        return random_interval_operator(rng, size, **kwargs)
    return make


@pytest.fixture
def model_path():
    """Path of a shipped model file."""
    def path(name):
        return os.path.join(MODELS_DIR, name)
    return path


@pytest.fixture
def write_model(tmp_path):
    """Write model text to a temporary file and return its path."""
    def write(text, name='model.json'):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return write


LEAKY_MODEL = """{
  "format": "ictmc-v1",
  "states": ["on", "off"],
  "rates": [
    {"from": "on", "to": "off", "low": 0, "high": 1}
  ]
}
"""
