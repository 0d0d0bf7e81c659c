"""Controller/HMD input mapping: shift modifier, yaw proportionality, clamps."""

import pytest
from hypothesis import given, strategies as st

from rovteleop.inputmap import (
    ControllerInputs,
    HmdPose,
    VehicleSetpoint,
    map_controller,
    map_hmd,
    merge_setpoints,
    wrap_angle_deg,
)

finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e6, max_value=1e6)


def test_unshifted_joystick_is_sway_heave():
    sp = map_controller(ControllerInputs(joy_x=0.5))
    assert sp.sway == 0.5
    assert (sp.surge, sp.heave, sp.roll, sp.pitch) == (0, 0, 0, 0)


def test_shifted_joystick_is_roll_pitch():
    sp = map_controller(ControllerInputs(joy_x=0.5, grip_trigger=1.0))
    assert sp.roll == 0.5
    assert (sp.surge, sp.sway, sp.heave, sp.pitch) == (0, 0, 0, 0)


def test_all_zero_inputs():
    sp = map_controller(ControllerInputs())
    assert sp == VehicleSetpoint()


def test_finger_trigger_surge_sign():
    assert map_controller(ControllerInputs(finger_trigger=0.8)).surge == 0.8
    shifted = map_controller(ControllerInputs(finger_trigger=0.8, grip_trigger=1.0))
    assert shifted.surge == -0.8


def test_shift_threshold_boundary():
    below = map_controller(ControllerInputs(joy_x=1.0, grip_trigger=0.94))
    at = map_controller(ControllerInputs(joy_x=1.0, grip_trigger=0.95))
    assert below.sway == 1.0 and below.roll == 0.0
    assert at.roll == 1.0 and at.sway == 0.0


def test_hmd_neutral():
    assert map_hmd(HmdPose()) == (0.0, 0.0)


def test_hmd_camera_clamp():
    _, cam = map_hmd(HmdPose(pitch_deg=60.0))
    assert cam == 45.0
    _, cam = map_hmd(HmdPose(pitch_deg=-60.0))
    assert cam == -45.0


def test_hmd_yaw_proportional():
    yaw, _ = map_hmd(HmdPose(roll_deg=15.0), theta_max_deg=30.0)
    assert yaw == pytest.approx(0.5)


def test_hmd_yaw_saturates():
    yaw, _ = map_hmd(HmdPose(roll_deg=90.0), theta_max_deg=30.0)
    assert yaw == 1.0


def test_hmd_theta_max_must_be_positive():
    with pytest.raises(ValueError):
        map_hmd(HmdPose(), theta_max_deg=0)


def test_merge_disjoint_fields():
    ctrl = map_controller(ControllerInputs(joy_x=0.5))
    sp = merge_setpoints(ctrl, (0.2, 10.0))
    assert (sp.sway, sp.yaw, sp.camera_tilt_deg) == (0.5, 0.2, 10.0)
    assert (sp.surge, sp.heave, sp.roll, sp.pitch) == (0, 0, 0, 0)


def test_merge_neutral():
    assert merge_setpoints(VehicleSetpoint(), (0.0, 0.0)) == VehicleSetpoint()


def test_merge_shifted_roll_with_hmd_yaw():
    ctrl = map_controller(ControllerInputs(joy_x=1.0, grip_trigger=1.0))
    sp = merge_setpoints(ctrl, (-1.0, 0.0))
    assert (sp.roll, sp.yaw) == (1.0, -1.0)


@given(finite, finite, finite, finite)
def test_exclusivity(joy_x, joy_y, finger, grip):
    sp = map_controller(ControllerInputs(joy_x, joy_y, finger, grip))
    if ControllerInputs(joy_x, joy_y, finger, grip).grip_trigger >= 0.95:
        assert sp.sway == 0.0 and sp.heave == 0.0
        assert sp.surge <= 0.0
    else:
        assert sp.roll == 0.0 and sp.pitch == 0.0
        assert sp.surge >= 0.0


@given(finite, finite, finite, finite, finite, finite)
def test_clamping_arbitrary_inputs(joy_x, joy_y, finger, grip, roll, pitch):
    sp = merge_setpoints(
        map_controller(ControllerInputs(joy_x, joy_y, finger, grip)),
        map_hmd(HmdPose(roll_deg=roll, pitch_deg=pitch)),
    )
    for axis in (sp.surge, sp.sway, sp.heave, sp.roll, sp.pitch, sp.yaw):
        assert -1.0 <= axis <= 1.0
    assert -45.0 <= sp.camera_tilt_deg <= 45.0


@given(st.floats(min_value=-30, max_value=30, allow_nan=False))
def test_yaw_linear_inside_theta_max(roll_deg):
    yaw, _ = map_hmd(HmdPose(roll_deg=roll_deg), theta_max_deg=30.0)
    assert yaw == pytest.approx(roll_deg / 30.0)


@pytest.mark.parametrize(
    "angle,expected",
    [(0, 0), (180, 180), (-180, 180), (360, 0), (270, -90), (-270, 90), (540, 180)],
)
def test_wrap_angle(angle, expected):
    assert wrap_angle_deg(angle) == expected
