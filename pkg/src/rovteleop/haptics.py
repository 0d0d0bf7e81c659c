"""Grasp-button telemetry to wrist vibration events.

A rising edge on the button starts a vibration that lasts two seconds or
until the button is released, whichever comes first. Holding past the
window does not retrigger; a release followed by a new press starts a
fresh window. The physical motor drive is abstracted to one boolean.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

VIBRATION_WINDOW_MS = 2000.0


@dataclass(frozen=True)
class HapticState:
    """Vibration timer state plus the previous button sample.

    ``button_prev`` is None before the first update: the first sample only
    establishes a baseline, so a button already held at session start does
    not vibrate until the next genuine rising edge.
    """

    vibrating: bool = False
    vibration_started: float = 0.0
    button_prev: Optional[bool] = None


def haptic_update(
    button: bool, now_ms: float, state: HapticState
) -> tuple[bool, HapticState]:
    """Advance the vibration state machine one tick.

    ``now_ms`` must be monotonic. Returns the actuation flag for this tick
    and the successor state.
    """
    vibrating = state.vibrating
    started = state.vibration_started

    if button and state.button_prev is False:
        vibrating = True
        started = now_ms

    if vibrating and (not button or now_ms - started >= VIBRATION_WINDOW_MS):
        vibrating = False

    return vibrating, HapticState(vibrating, started, bool(button))
