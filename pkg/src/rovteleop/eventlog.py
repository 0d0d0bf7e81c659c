"""Line-delimited JSON event logs for session recording and replay.

One record per line: ``{"t_ms": <float>, "kind": <str>, "payload": {...}}``.
The first record is always ``meta`` (scenario, seed, tick rate, limit);
``input`` records carry the tick at which a message was applied, which is
all a replay needs. Timestamps are strictly increasing: simultaneous
events within one tick are spread by a microsecond apart in pipeline
order.

Record kinds: meta, input, command, grasp, place, drop, minor, major,
collision, intervention, completed, metrics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterator

FORMAT_VERSION = 1

_TIE_STEP_MS = 1e-3  # spacing for same-tick records; far below any tick dt


@dataclass(frozen=True)
class LogRecord:
    t_ms: float
    kind: str
    payload: dict


class EventLogWriter:
    """Serializes records, enforcing strictly increasing timestamps."""

    def __init__(self, stream: IO[str]):
        self._stream = stream
        self._last_t = float("-inf")

    def write(self, t_ms: float, kind: str, payload: dict) -> None:
        if t_ms <= self._last_t:
            t_ms = self._last_t + _TIE_STEP_MS
        self._last_t = t_ms
        self._stream.write(
            json.dumps({"t_ms": t_ms, "kind": kind, "payload": payload}) + "\n"
        )

    def write_meta(
        self, scenario_dict: dict, seed: int, tick_hz: float, limit_s: float
    ) -> None:
        self.write(
            -1.0,  # meta sorts before tick 0
            "meta",
            {
                "version": FORMAT_VERSION,
                "scenario": scenario_dict,
                "seed": seed,
                "tick_hz": tick_hz,
                "limit_s": limit_s,
            },
        )


def iter_event_log(stream: IO[str]) -> Iterator[LogRecord]:
    for line_no, line in enumerate(stream, 1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            yield LogRecord(float(obj["t_ms"]), str(obj["kind"]), obj["payload"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as err:
            raise ValueError(f"bad event log record at line {line_no}: {err}") from err


def read_event_log(path: str) -> list[LogRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        return list(iter_event_log(fh))
