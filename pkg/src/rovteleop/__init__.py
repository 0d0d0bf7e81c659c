"""Glove-to-gripper ROV teleoperation loop with a deterministic simulated
plant and a Tower-of-Hanoi task harness."""

from .gripper import (
    CalibrationError,
    ControllerConfig,
    GloveCalibration,
    GripperControllerState,
    NormalizedPosition,
    PwmCommand,
    calibrate,
    controller_step,
    initial_controller_state,
    normalize,
    t2_for_error,
)
from .haptics import HapticState, haptic_update
from .inputmap import (
    ControllerInputs,
    HmdPose,
    VehicleSetpoint,
    map_controller,
    map_hmd,
    merge_setpoints,
)
from .scenario import Scenario, default_scenario, golden_scenario, load_scenario
from .session import Session, StateSnapshot, TaskMetrics, TickSchedule

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "ControllerConfig",
    "ControllerInputs",
    "GloveCalibration",
    "GripperControllerState",
    "HapticState",
    "HmdPose",
    "NormalizedPosition",
    "PwmCommand",
    "Scenario",
    "Session",
    "StateSnapshot",
    "TaskMetrics",
    "TickSchedule",
    "VehicleSetpoint",
    "calibrate",
    "controller_step",
    "default_scenario",
    "golden_scenario",
    "haptic_update",
    "initial_controller_state",
    "load_scenario",
    "map_controller",
    "map_hmd",
    "merge_setpoints",
    "normalize",
    "t2_for_error",
]
