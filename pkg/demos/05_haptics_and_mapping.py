"""The vibration window rule and the shift-modifier input mapping, traced.

Part one replays grasp-button patterns through the haptic state machine:
a long hold caps at the two-second window, a short tap ends at release,
and a fresh press always restarts the window. Part two shows the same
joystick deflection steering different axes depending on the grip trigger.
"""

from rovteleop.haptics import HapticState, haptic_update
from rovteleop.inputmap import ControllerInputs, HmdPose, map_controller, map_hmd

DT = 20.0


def trace(pattern: list[tuple[bool, int]]) -> str:
    state = HapticState()
    out = []
    tick = 0
    for level, ticks in pattern:
        for _ in range(ticks):
            vib, state = haptic_update(level, tick * DT, state)
            out.append("#" if vib else ".")
            tick += 1
    return "".join(out)


print("-- haptic rule: '#' = vibrating, 20 ms per character")
print("hold 3 s:        ", trace([(False, 2), (True, 150)]))
print("tap 0.4 s:       ", trace([(False, 2), (True, 20), (False, 30)]))
print("press-release-press:", trace([(False, 2), (True, 30), (False, 5), (True, 60)]))

print()
print("-- one joystick, two meanings (grip trigger is the shift)")
for grip in (0.0, 1.0):
    inputs = ControllerInputs(joy_x=0.6, joy_y=-0.4, finger_trigger=0.8, grip_trigger=grip)
    sp = map_controller(inputs)
    mode = "shifted " if grip >= 0.95 else "default "
    print(
        f"{mode} surge={sp.surge:+.1f} sway={sp.sway:+.1f} heave={sp.heave:+.1f} "
        f"roll={sp.roll:+.1f} pitch={sp.pitch:+.1f}"
    )

print()
print("-- head pose: roll commands yaw rate, pitch aims the camera")
for roll, pitch in ((0.0, 0.0), (15.0, 20.0), (-45.0, 70.0)):
    yaw, cam = map_hmd(HmdPose(roll_deg=roll, pitch_deg=pitch))
    print(f"head roll {roll:+6.1f} deg, pitch {pitch:+6.1f} deg -> "
          f"yaw axis {yaw:+.2f}, camera tilt {cam:+.1f} deg")
