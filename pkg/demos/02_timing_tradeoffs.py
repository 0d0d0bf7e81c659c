"""How the two burst delays shape gripper motion.

T1 (move-to-neutral delay) sets how far a single burst travels; T2 (delay
between successive moves) sets how often bursts fire. This sweep holds one
constant and varies the other against the simulated actuator, then prints
the resulting travel per burst and average closing speed. Longer T1 moves
farther per burst; shorter T2 moves faster overall, which is why the
controller maps large errors onto small T2 values.
"""

import dataclasses

from rovteleop.gripper import ControllerConfig
from rovteleop.harness import bench_step_response
from rovteleop.scenario import GripperPlantConfig, Scenario


def closing_speed(cfg: ControllerConfig) -> float:
    """Average speed over the first full-range closing step (target 0 -> 1)."""
    scn = Scenario(
        controller=cfg,
        gripper=GripperPlantConfig(noise_sigma=0.0),
    )
    rows = bench_step_response(scn, targets=(0.0, 1.0), hold_s=8.0)
    step = [r for r in rows if r.t_ms > 8000.0]
    crossed = next((r for r in step if r.gripper_true >= 0.9), None)
    if crossed is None:
        return 0.0
    return 0.9 / ((crossed.t_ms - 8000.0) / 1000.0)


print("T1 sweep (T2 map unchanged): single-burst travel at full authority")
for t1 in (25.0, 45.0, 85.0, 165.0):
    cfg = ControllerConfig(t1_ms=t1)
    # travel of one burst = plant rate at 1300 us integrated over T1
    travel = 2.0 * (170 / 370) * t1 / 1000.0
    print(f"  T1 = {t1:5.0f} ms -> {travel:.3f} of full travel per burst")

print()
print("T2 bounds sweep (T1 = 45 ms): average closing speed, 0 -> 0.9")
for t2_min, t2_max in ((10.0, 300.0), (10.0, 100.0), (60.0, 300.0), (150.0, 300.0)):
    cfg = ControllerConfig(t2_min_ms=t2_min, t2_max_ms=t2_max)
    speed = closing_speed(cfg)
    print(f"  T2 in [{t2_min:3.0f}, {t2_max:3.0f}] ms -> {speed:.2f} travel/s")

print()
print("error-dependent delay (defaults):")
cfg = ControllerConfig()
from rovteleop.gripper import t2_for_error

for e in (0.05, 0.2, 0.5, 0.8, 1.0):
    print(f"  |e| = {e:.2f} -> T2 = {t2_for_error(e, cfg):5.1f} ms")
