"""Closed-loop step response of the burst-controlled gripper.

Drives the full pipeline (controller -> wire -> plant -> telemetry) through
the glove target sequence 0 -> 1 -> 0.3 -> 0.8 and plots how the gripper
tracks it: fast coarse bursts while the error is large, sparse fine bursts
near the deadband, then silence. Writes demos/out/step_response.png and
prints per-step settle statistics.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from rovteleop.harness import BENCH_HOLD_S, BENCH_TARGETS, bench_step_response
from rovteleop.scenario import default_scenario

rows = bench_step_response(default_scenario())

t = [r.t_ms / 1000 for r in rows]
target = [r.target for r in rows]
true = [r.gripper_true for r in rows]
reported = [r.gripper_reported for r in rows]
pulses = [(r.t_ms / 1000, r.command_width_us) for r in rows if r.command_width_us]

fig, (ax, axp) = plt.subplots(
    2, 1, figsize=(9, 6), sharex=True, height_ratios=[3, 1]
)
ax.plot(t, target, drawstyle="steps-post", label="glove target", lw=2)
ax.plot(t, reported, label="reported position", alpha=0.5, lw=0.8)
ax.plot(t, true, label="true position", lw=1.5)
ax.set_ylabel("normalized position")
ax.legend(loc="lower right")
ax.set_title("Gripper step response under burst control")

axp.scatter(*zip(*pulses), s=6, c=["tab:red" if w != 1500 else "tab:gray" for _, w in pulses])
axp.set_ylabel("PWM (us)")
axp.set_xlabel("time (s)")

os.makedirs(os.path.join(os.path.dirname(__file__), "out"), exist_ok=True)
out = os.path.join(os.path.dirname(__file__), "out", "step_response.png")
fig.savefig(out, dpi=120, bbox_inches="tight")
print(f"wrote {out}")

hold_ticks = int(BENCH_HOLD_S * 50)
for k, tgt in enumerate(BENCH_TARGETS):
    window = true[k * hold_ticks : (k + 1) * hold_ticks]
    settle = next(
        (
            i
            for i in range(len(window))
            if all(abs(p - tgt) <= 0.05 for p in window[i:])
        ),
        None,
    )
    settle_s = "never" if settle is None else f"{settle * 0.02:.2f} s"
    print(f"step to {tgt:.1f}: settled in {settle_s}, final error {abs(window[-1] - tgt):.3f}")
