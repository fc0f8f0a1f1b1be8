"""
Reading and writing model files.

A model file is a JSON object:

    {
      "format": "ictmc-v1",
      "states": ["healthy", "sick"],
      "rates": [
        {"from": "healthy", "to": "sick", "low": "1/52", "high": "3/52"},
        {"from": "sick", "to": "healthy", "low": 0.5, "high": 2}
      ]
    }

Rates are numbers or strings holding a decimal or a fraction. Pairs that are
not listed have the rate interval [0, 0].
"""
import json
import math
import os
import re
from fractions import Fraction
from typing import Any, Dict, List, Optional

from ..errors import ContractViolationError, ModelParseError, ModelValidationError
from ..operators.gamble import StateSpace
from ..operators.rate_operator import IntervalRateOperator

MODEL_FORMAT = 'ictmc-v1'

_RATE_ENTRY = re.compile(r'"from"\s*:')


def _read_text(path: str) -> str:
    if not os.path.exists(path):
        raise ModelParseError("File not found", path=path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise ModelParseError(f"Cannot read file: {e}", path=path)


def parse_json(text: str, path: Optional[str] = None) -> Any:
    """Decode JSON, reporting syntax errors with their line."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelParseError(f"Invalid JSON: {e.msg}", path=path, line=e.lineno)


def _entry_lines(text: str) -> List[int]:
    """Line number of each rate entry, found by its "from" key."""
    return [text.count('\n', 0, match.start()) + 1 for match in _RATE_ENTRY.finditer(text)]


def parse_rate(value: Any) -> float:
    """
    Convert a rate given as a number or a string ('0.5', '1/52') to a float.

    Raises:
        ValueError: for anything that is not a finite non-negative rate
    """
    if isinstance(value, bool) or value is None:
        raise ValueError(f"not a rate: {value!r}")
    if isinstance(value, (int, float)):
        rate = float(value)
    elif isinstance(value, str):
        try:
            rate = float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rate: {value!r}")
    else:
        raise ValueError(f"not a rate: {value!r}")
    if not math.isfinite(rate):
        raise ValueError(f"rate must be finite, got {value!r}")
    if rate < 0:
        raise ValueError(f"rate must be non-negative, got {value!r}")
    return rate


def parse_model(text: str, path: Optional[str] = None) -> IntervalRateOperator:
    """
    Build an operator from the text of a model file.

    Raises:
        ModelParseError: on invalid JSON
        ModelValidationError: on content that does not describe a valid operator
    """
    data = parse_json(text, path)
    lines = _entry_lines(text)

    def invalid(message: str, line: Optional[int] = None):
        return ModelValidationError(message, path=path, line=line)

    if not isinstance(data, dict):
        raise invalid("A model must be a JSON object", 1)
    if data.get('format') != MODEL_FORMAT:
        raise invalid(f"Unsupported model format {data.get('format')!r}, expected {MODEL_FORMAT!r}")

    states = data.get('states')
    if not isinstance(states, list) or not states or not all(isinstance(s, str) for s in states):
        raise invalid("'states' must be a non-empty list of labels")
    if len(set(states)) != len(states):
        duplicates = sorted({s for s in states if states.count(s) > 1})
        raise invalid(f"Duplicate state labels: {duplicates}")
    space = StateSpace.from_labels(states)
    index = {label: i for i, label in enumerate(states)}

    rates = data.get('rates', [])
    if not isinstance(rates, list):
        raise invalid("'rates' must be a list")

    intervals: Dict[tuple, tuple] = {}
    for i, entry in enumerate(rates):
        line = lines[i] if i < len(lines) else None
        if not isinstance(entry, dict):
            raise invalid(f"Rate entry {i} must be an object", line)
        missing = [key for key in ('from', 'to', 'low', 'high') if key not in entry]
        if missing:
            raise invalid(f"Rate entry {i} is missing {', '.join(missing)}", line)
        source, target = entry['from'], entry['to']
        for label in (source, target):
            if label not in index:
                raise invalid(f"Rate entry {i} refers to unknown state {label!r}", line)
        if source == target:
            raise invalid(f"Rate entry {i} goes from {source!r} to itself", line)
        try:
            low = parse_rate(entry['low'])
            high = parse_rate(entry['high'])
        except ValueError as e:
            raise invalid(f"Rate entry {i} ({source} -> {target}): {e}", line)
        if low > high:
            raise invalid(f"Inverted interval [{low!r}, {high!r}] from {source!r} to {target!r}", line)
        pair = (index[source], index[target])
        if pair in intervals:
            raise invalid(f"Duplicate rate entry from {source!r} to {target!r}", line)
        intervals[pair] = (low, high)

    try:
        return IntervalRateOperator.from_intervals(space, intervals)
    except ContractViolationError as e:
        raise invalid(str(e))


def load_model(path: str) -> IntervalRateOperator:
    """
    Load and validate a model file.

    Args:
        path: Path to the JSON model

    Returns:
        IntervalRateOperator over the labelled state space
    """
    return parse_model(_read_text(path), path)


def model_to_dict(Q: IntervalRateOperator) -> Dict[str, Any]:
    """Serialisable form of an operator; [0, 0] pairs are left out."""
    labels = Q.state_space.all_labels()
    return {
        'format': MODEL_FORMAT,
        'states': list(labels),
        'rates': [
            {'from': labels[x], 'to': labels[y], 'low': low, 'high': high}
            for (x, y), (low, high) in sorted(Q.intervals().items())
        ],
    }


def dump_model(Q: IntervalRateOperator, path: str) -> None:
    """Write an operator as a model file that `load_model` reads back exactly."""
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(model_to_dict(Q), f, indent=2)
        f.write('\n')
