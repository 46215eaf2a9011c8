"""Threshold crossings of terminal voltages and their signed counts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class CrossingEvent:
    t: float
    variable_index: int
    direction: int


class CrossingDetector:
    """Streaming detector for sign changes of v_i across 0.

    Each sample gets an effective side (1 for v > 0, 0 for v < 0). An exact
    zero takes the side of the next nonzero sample; zeros at the end of the
    stream count as side 0. Events fire where the effective side changes,
    at the linearly interpolated root, or at the first zero sample when
    zeros sit between the two sides.
    """

    def __init__(self, n: int):
        self.n = n
        self.events: list[CrossingEvent] = []
        self._side = np.full(n, -1, dtype=np.int8)  # -1: not yet resolved
        self._last_t = np.zeros(n)
        self._last_v = np.zeros(n)
        self._pending = np.full(n, np.nan)
        self._started = False

    def feed(self, t: float, v: np.ndarray) -> list[CrossingEvent]:
        v = np.asarray(v, dtype=float)
        nz = v != 0
        new_side = (v > 0).astype(np.int8)
        changed = nz & (self._side >= 0) & (new_side != self._side)
        new_events = []
        if self._started and changed.any():
            for i in np.flatnonzero(changed):
                if not np.isnan(self._pending[i]):
                    tc = float(self._pending[i])
                else:
                    ta, va = self._last_t[i], self._last_v[i]
                    tc = float(ta + (t - ta) * va / (va - v[i]))
                new_events.append(CrossingEvent(tc, int(i) + 1, 1 if new_side[i] else -1))
        self._side[nz] = new_side[nz]
        self._last_t[nz] = t
        self._last_v[nz] = v[nz]
        self._pending[nz] = np.nan
        fresh_zero = ~nz & np.isnan(self._pending)
        self._pending[fresh_zero] = t
        self._started = True
        self.events.extend(new_events)
        return new_events

    def finish(self) -> list[CrossingEvent]:
        """Resolve trailing zeros; call once after the last sample."""
        new_events = []
        trailing = ~np.isnan(self._pending)
        for i in np.flatnonzero(trailing & (self._side == 1)):
            new_events.append(CrossingEvent(float(self._pending[i]), int(i) + 1, -1))
        self._side[trailing] = 0
        self._pending[:] = np.nan
        self.events.extend(new_events)
        return new_events


def detect_crossings(samples: Sequence) -> list[CrossingEvent]:
    """Crossing events over a recorded trajectory.

    ``samples`` holds objects with ``t`` and ``state.v`` (trajectory
    samples) or plain ``(t, v)`` pairs. Events come out grouped by sample
    interval, each variable's events in chronological order.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    pairs = [_as_pair(s) for s in samples]
    detector = CrossingDetector(len(pairs[0][1]))
    for t, v in pairs:
        detector.feed(t, v)
    detector.finish()
    return detector.events


def _as_pair(sample):
    if hasattr(sample, "state"):
        return sample.t, sample.state.v
    t, v = sample
    return t, v


def net_signed_crossings(events: Iterable[CrossingEvent], variable_index: int) -> int:
    return sum(e.direction for e in events if e.variable_index == variable_index)


def instanton_step_count(events: Iterable[CrossingEvent]) -> int:
    """Total threshold crossings: one elementary logical transition each."""
    return sum(1 for _ in events)


def side(v: float) -> int:
    return 1 if v > 0 else 0


def events_by_variable(events: Iterable[CrossingEvent]) -> dict[int, list[CrossingEvent]]:
    out: dict[int, list[CrossingEvent]] = {}
    for e in events:
        out.setdefault(e.variable_index, []).append(e)
    return out
