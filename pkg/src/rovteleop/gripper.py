"""Closed-loop position control of a 1-DOF gripper over discrete PWM commands.

The actuator only understands three kinds of pulse widths (open / close /
neutral), so position control is done with timed command bursts: a move
command is followed by a neutral command ``t1_ms`` later, and successive
move commands are spaced by an error-dependent delay ``t2_for_error``.
Large errors get short delays (fast, coarse motion); small errors get long
delays (slow, fine motion). Errors inside the deadband ``n_tol`` produce
no commands at all.

All timing derives from the ``now`` argument passed by the caller, never
from a wall clock, so traces replay deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from statistics import median
from typing import Iterable, Optional, Union

ADC_MAX = 1023

PWM_NEUTRAL_US = 1500
PWM_OPEN_MIN_US = 1530
PWM_OPEN_MAX_US = 1900
PWM_CLOSE_MIN_US = 1100
PWM_CLOSE_MAX_US = 1470

GRIPPER_SERVO_CHANNEL = 9


class CalibrationError(ValueError):
    """Raised for empty sample sets or degenerate (equal-endpoint) calibrations."""


def _clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


@dataclass(frozen=True)
class NormalizedPosition:
    """Dimensionless position in [0, 1]: 0 = fully open, 1 = fully closed.

    Values are clamped at construction, never rejected.
    """

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _clamp(float(self.value), 0.0, 1.0))

    def __float__(self) -> float:
        return self.value


PositionLike = Union[NormalizedPosition, float, int]


def _as_position(p: PositionLike) -> float:
    return _clamp(float(p), 0.0, 1.0)


@dataclass(frozen=True)
class GloveCalibration:
    """Per-user raw ADC endpoints for the open and closed hand positions.

    ``raw_open`` and ``raw_closed`` may appear in either order (inverted
    polarity gloves are fine) but must differ.
    """

    raw_open: float
    raw_closed: float

    def __post_init__(self):
        for name in ("raw_open", "raw_closed"):
            v = getattr(self, name)
            if not (0 <= v <= ADC_MAX):
                raise CalibrationError(f"{name}={v} outside ADC range [0, {ADC_MAX}]")
        if self.raw_open == self.raw_closed:
            raise CalibrationError(
                f"degenerate calibration: raw_open == raw_closed == {self.raw_open}"
            )


@dataclass(frozen=True)
class PwmCommand:
    """A servo actuation pulse: ``width_us`` microseconds on ``channel``.

    1500 us is neutral; [1530, 1900] opens; [1100, 1470] closes. Widths in
    the gaps around neutral are invalid and rejected at construction.
    """

    channel: int
    width_us: int

    def __post_init__(self):
        w = self.width_us
        ok = (
            w == PWM_NEUTRAL_US
            or PWM_OPEN_MIN_US <= w <= PWM_OPEN_MAX_US
            or PWM_CLOSE_MIN_US <= w <= PWM_CLOSE_MAX_US
        )
        if not ok:
            raise ValueError(f"invalid pulse width {w} us")

    @property
    def is_neutral(self) -> bool:
        return self.width_us == PWM_NEUTRAL_US

    @property
    def is_open(self) -> bool:
        return self.width_us >= PWM_OPEN_MIN_US

    @property
    def is_close(self) -> bool:
        return self.width_us <= PWM_CLOSE_MAX_US

    @property
    def is_move(self) -> bool:
        return not self.is_neutral


@dataclass(frozen=True)
class ControllerConfig:
    """Tuning constants for the burst controller.

    ``n_tol`` is the error deadband, ``t1_ms`` the move-to-neutral delay,
    and [``t2_min_ms``, ``t2_max_ms``] the bounds of the error-dependent
    delay between successive move commands.
    """

    n_tol: float = 0.05
    t1_ms: float = 45.0
    t2_min_ms: float = 10.0
    t2_max_ms: float = 300.0
    open_pwm_us: int = 1700
    close_pwm_us: int = 1300
    channel: int = GRIPPER_SERVO_CHANNEL

    def __post_init__(self):
        if not 0.0 < self.n_tol < 1.0:
            raise ValueError(f"n_tol={self.n_tol} must be in (0, 1)")
        if self.t1_ms <= 0:
            raise ValueError(f"t1_ms={self.t1_ms} must be positive")
        if not self.t2_min_ms < self.t2_max_ms:
            raise ValueError("t2_min_ms must be below t2_max_ms")
        if not PWM_OPEN_MIN_US <= self.open_pwm_us <= PWM_OPEN_MAX_US:
            raise ValueError(f"open_pwm_us={self.open_pwm_us} outside open range")
        if not PWM_CLOSE_MIN_US <= self.close_pwm_us <= PWM_CLOSE_MAX_US:
            raise ValueError(f"close_pwm_us={self.close_pwm_us} outside close range")


class Phase(Enum):
    IDLE = "idle"
    MOVE_PULSE = "move_pulse"
    COOLDOWN = "cooldown"


@dataclass(frozen=True)
class GripperControllerState:
    """Controller schedule: current phase plus the pending deadlines.

    While in MOVE_PULSE, ``neutral_deadline = last_move_start + t1_ms``.
    ``next_move_allowed`` is set from t2_for_error at move issue and gates
    the next non-neutral command.
    """

    phase: Phase = Phase.IDLE
    last_move_start: float = float("-inf")
    neutral_deadline: float = float("-inf")
    next_move_allowed: float = float("-inf")


def initial_controller_state() -> GripperControllerState:
    return GripperControllerState()


def normalize(raw: float, calib: GloveCalibration) -> NormalizedPosition:
    """Map a raw ADC reading onto [0, 1] using the calibration endpoints.

    Linear between the endpoints, clamped outside them; either polarity of
    (raw_closed - raw_open) works.
    """
    span = calib.raw_closed - calib.raw_open
    return NormalizedPosition((raw - calib.raw_open) / span)


def t2_for_error(e_abs: float, cfg: ControllerConfig = ControllerConfig()) -> float:
    """Delay in ms between successive move commands for an absolute error.

    Affine from (n_tol, 1] onto [t2_max_ms, t2_min_ms]: larger error means
    a smaller delay. At or below the deadband the maximum delay applies.
    Output is always inside [t2_min_ms, t2_max_ms].
    """
    e_abs = _clamp(e_abs, 0.0, 1.0)
    if e_abs <= cfg.n_tol:
        return cfg.t2_max_ms
    span = cfg.t2_max_ms - cfg.t2_min_ms
    t2 = cfg.t2_max_ms - span * (e_abs - cfg.n_tol) / (1.0 - cfg.n_tol)
    return _clamp(t2, cfg.t2_min_ms, cfg.t2_max_ms)


def controller_step(
    glove: PositionLike,
    gripper: PositionLike,
    now_ms: float,
    state: GripperControllerState,
    cfg: ControllerConfig = ControllerConfig(),
) -> tuple[Optional[PwmCommand], GripperControllerState]:
    """Advance the controller one tick; emit at most one command.

    ``now_ms`` must be monotonically non-decreasing across calls. The error
    convention is e = glove - gripper: positive error means the hand is more
    closed than the gripper, so a close command is issued.
    """
    glove_v = _as_position(glove)
    gripper_v = _as_position(gripper)
    e = glove_v - gripper_v

    if state.phase is Phase.MOVE_PULSE:
        if now_ms >= state.neutral_deadline:
            return (
                PwmCommand(cfg.channel, PWM_NEUTRAL_US),
                replace(state, phase=Phase.COOLDOWN),
            )
        return None, state

    if abs(e) <= cfg.n_tol:
        if state.phase is Phase.COOLDOWN and now_ms >= state.next_move_allowed:
            return None, replace(state, phase=Phase.IDLE)
        return None, state

    if now_ms >= state.next_move_allowed:
        width = cfg.close_pwm_us if e > 0 else cfg.open_pwm_us
        new_state = GripperControllerState(
            phase=Phase.MOVE_PULSE,
            last_move_start=now_ms,
            neutral_deadline=now_ms + cfg.t1_ms,
            next_move_allowed=now_ms + t2_for_error(abs(e), cfg),
        )
        return PwmCommand(cfg.channel, width), new_state

    return None, state


def calibrate(
    samples_open: Iterable[float], samples_closed: Iterable[float]
) -> GloveCalibration:
    """Build a calibration from start-of-session samples of each endpoint.

    The median of each sample set is used so isolated potentiometer spikes
    cannot skew the endpoints.
    """
    open_list = list(samples_open)
    closed_list = list(samples_closed)
    if not open_list or not closed_list:
        raise CalibrationError("calibration needs at least one sample per endpoint")
    return GloveCalibration(median(open_list), median(closed_list))
