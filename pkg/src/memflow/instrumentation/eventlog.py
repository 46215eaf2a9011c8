"""JSON-lines event log: one object per crossing or critical-point visit."""

from __future__ import annotations

import json
from typing import Iterable

from memflow.instrumentation.crossings import CrossingEvent
from memflow.instrumentation.critical import CriticalPointReport


def event_record(event) -> dict:
    if isinstance(event, CrossingEvent):
        return {"type": "crossing", "t": event.t, "var": event.variable_index, "dir": event.direction}
    if isinstance(event, CriticalPointReport):
        return {
            "type": "critical",
            "t": event.t,
            "residual": event.residual,
            "index": event.index,
            "center_dims": event.center_dims,
        }
    raise TypeError(f"not an event: {event!r}")


def write_events(events: Iterable, path) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for event in events:
            fh.write(json.dumps(event_record(event)) + "\n")
            count += 1
    return count


def read_events(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def crossings_from_records(records: Iterable[dict]) -> list[CrossingEvent]:
    return [
        CrossingEvent(r["t"], r["var"], r["dir"]) for r in records if r.get("type") == "crossing"
    ]
