"""Hand-controller and head-pose inputs to vehicle motion setpoints.

The grip trigger acts as a shift modifier. Unshifted, the joystick drives
sway/heave and the finger trigger forward surge; shifted, the same axes
drive roll/pitch and the finger trigger reverse surge. Head roll commands
yaw rate proportionally, head pitch maps 1:1 onto the camera tilt servo
within its +/-45 degree throw.
"""

from __future__ import annotations

from dataclasses import dataclass

SHIFT_THRESHOLD_DEFAULT = 0.95
HEAD_TILT_FULL_YAW_DEG = 30.0
CAMERA_TILT_LIMIT_DEG = 45.0


def _clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def wrap_angle_deg(a: float) -> float:
    """Normalize an angle in degrees to (-180, 180]."""
    a = float(a) % 360.0
    if a > 180.0:
        a -= 360.0
    return a


@dataclass(frozen=True)
class ControllerInputs:
    """Joystick axes in [-1, 1] and triggers in [0, 1], clamped on ingest."""

    joy_x: float = 0.0
    joy_y: float = 0.0
    finger_trigger: float = 0.0
    grip_trigger: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "joy_x", _clamp(float(self.joy_x), -1.0, 1.0))
        object.__setattr__(self, "joy_y", _clamp(float(self.joy_y), -1.0, 1.0))
        object.__setattr__(
            self, "finger_trigger", _clamp(float(self.finger_trigger), 0.0, 1.0)
        )
        object.__setattr__(
            self, "grip_trigger", _clamp(float(self.grip_trigger), 0.0, 1.0)
        )


@dataclass(frozen=True)
class HmdPose:
    """Head orientation in degrees, each angle normalized to (-180, 180]."""

    roll_deg: float = 0.0
    pitch_deg: float = 0.0
    yaw_deg: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "roll_deg", wrap_angle_deg(self.roll_deg))
        object.__setattr__(self, "pitch_deg", wrap_angle_deg(self.pitch_deg))
        object.__setattr__(self, "yaw_deg", wrap_angle_deg(self.yaw_deg))


@dataclass(frozen=True)
class VehicleSetpoint:
    """Six motion axes as fractions of maximum thruster output, plus camera tilt."""

    surge: float = 0.0
    sway: float = 0.0
    heave: float = 0.0
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0
    camera_tilt_deg: float = 0.0

    def __post_init__(self):
        for axis in ("surge", "sway", "heave", "roll", "pitch", "yaw"):
            object.__setattr__(self, axis, _clamp(float(getattr(self, axis)), -1.0, 1.0))
        object.__setattr__(
            self,
            "camera_tilt_deg",
            _clamp(
                float(self.camera_tilt_deg), -CAMERA_TILT_LIMIT_DEG, CAMERA_TILT_LIMIT_DEG
            ),
        )


def map_controller(
    inputs: ControllerInputs, shift_threshold: float = SHIFT_THRESHOLD_DEFAULT
) -> VehicleSetpoint:
    """Map controller inputs onto the translational/attitude axes.

    Shift is active once the grip trigger is essentially fully depressed
    (>= shift_threshold). Yaw and camera tilt are left at zero here; they
    belong to the head-pose path.
    """
    shifted = inputs.grip_trigger >= shift_threshold
    if shifted:
        return VehicleSetpoint(
            surge=-inputs.finger_trigger,
            roll=inputs.joy_x,
            pitch=inputs.joy_y,
        )
    return VehicleSetpoint(
        surge=inputs.finger_trigger,
        sway=inputs.joy_x,
        heave=inputs.joy_y,
    )


def map_hmd(
    pose: HmdPose, theta_max_deg: float = HEAD_TILT_FULL_YAW_DEG
) -> tuple[float, float]:
    """Head roll to a yaw-rate fraction, head pitch to camera tilt degrees.

    Yaw is proportional to head tilt and saturates at full output once the
    tilt reaches theta_max_deg. Camera tilt is the head pitch clamped to
    the servo's +/-45 degree limit.
    """
    if theta_max_deg <= 0:
        raise ValueError("theta_max_deg must be positive")
    yaw = _clamp(pose.roll_deg / theta_max_deg, -1.0, 1.0)
    camera_tilt = _clamp(pose.pitch_deg, -CAMERA_TILT_LIMIT_DEG, CAMERA_TILT_LIMIT_DEG)
    return yaw, camera_tilt


def merge_setpoints(ctrl: VehicleSetpoint, hmd: tuple[float, float]) -> VehicleSetpoint:
    """Combine the controller axes with the head-pose yaw and camera tilt."""
    yaw, camera_tilt = hmd
    return VehicleSetpoint(
        surge=ctrl.surge,
        sway=ctrl.sway,
        heave=ctrl.heave,
        roll=ctrl.roll,
        pitch=ctrl.pitch,
        yaw=yaw,
        camera_tilt_deg=camera_tilt,
    )
