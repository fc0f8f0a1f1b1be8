"""
Run reports: the entries produced by `run_query`, serialised as JSON or CSV.
"""
import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

CSV_COLUMNS = ['index', 'method', 'bound', 't', 'epsilon', 'iterations', 'epsilon_prime',
               'guaranteed_error', 'true_error', 'wall_time']


def format_number(value: Optional[float]) -> str:
    """Three significant digits with a '.' separator; empty for missing values."""
    if value is None:
        return ''
    if isinstance(value, str):
        return value
    return f"{value:#.3g}"


@dataclass
class RunReport:
    """Outcome of a batch of queries against one model, in query order."""

    model: str
    entries: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {'model': self.model, 'entries': self.entries}

    def to_json(self) -> str:
        """Deterministic JSON (sorted keys)."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=True)

    def to_csv(self) -> str:
        """One row per query; result values follow the fixed columns, by label."""
        labels = sorted({label for entry in self.entries for label in entry['result']})
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(CSV_COLUMNS + [f"result[{label}]" for label in labels])
        for position, entry in enumerate(self.entries):
            query = entry['query']
            writer.writerow([
                entry.get('index', position),
                query['method'],
                query['bound'],
                query['t'],
                query['epsilon'],
                entry['iterations'],
                format_number(entry.get('epsilon_prime')),
                format_number(entry.get('guaranteed_error')),
                format_number(entry.get('true_error')),
                format_number(entry['wall_time']),
            ] + [repr(entry['result'][label]) if label in entry['result'] else '' for label in labels])
        return buffer.getvalue()
