import json
from typing import Dict, List, Optional

from core.normalizer import Trace, TraceStep
from core.printer import print_term


def serialize_record(record: Dict) -> str:
    """One JSON Lines record."""
    return json.dumps(record, ensure_ascii=False)


def parse_record(line: str, default=None) -> Dict:
    """Safely parse one JSON Lines record."""
    if not line or not line.strip():
        return default or {}
    try:
        return json.loads(line)
    except (json.JSONDecodeError, TypeError):
        return default or {}


def step_record(step: TraceStep) -> Dict:
    return {
        "step": step.index,
        "kind": str(step.site.kind),
        "path": list(step.site.path),
        "start": list(step.site.start),
        "term": None if step.after is None else print_term(step.after),
    }


def final_record(trace: Trace) -> Dict:
    return {
        "status": str(trace.status),
        "steps": trace.fuel_used,
        "term": print_term(trace.final),
    }


def trace_lines(trace: Trace, include_steps: bool = True) -> List[str]:
    lines = [serialize_record(step_record(step)) for step in trace.steps] if include_steps else []
    lines.append(serialize_record(final_record(trace)))
    return lines


def render_trace(trace: Trace, include_steps: bool = True) -> str:
    return "\n".join(trace_lines(trace, include_steps)) + "\n"


def record_term(record: Dict) -> Optional[str]:
    return record.get("term")
