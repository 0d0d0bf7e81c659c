"""A complete scripted Tower-of-Hanoi session, narrated.

Runs the optimal scripted operator against the deterministic plant, then
walks the event timeline: each grasp, placement, and the final metrics.
Everything flows through the same input schema and wire protocols a live
console would use, so this is a full-pipeline rehearsal of the benchmark.
"""

import time

from rovteleop.harness import OptimalToHOperator, run_session
from rovteleop.scenario import golden_scenario

scn = golden_scenario()
print(f"scenario: {scn.name} (seed {scn.seed}, {len(scn.discs)} discs)")
print(f"poles at x = {[round(x, 3) for x, _ in scn.pole_positions()]}, "
      f"move pole {scn.session.source_pole} -> pole {scn.session.target_pole}")
print()

t0 = time.perf_counter()
result = run_session(scn, OptimalToHOperator(scn))
wall = time.perf_counter() - t0

print("timeline:")
for ev in result.session.world.events:
    detail = dict(ev.detail)
    disc = detail.pop("disc", "?")
    print(f"  {ev.t_ms/1000:7.2f} s  {ev.kind:<6} {disc:<7} {detail}")

m = result.metrics
print()
print(f"completed:    {m.completed}")
print(f"sub-tasks:    {m.subtasks_completed} (minimum for 3 discs: 7)")
print(f"sim time:     {m.elapsed_s:.1f} s  ({result.ticks} ticks, {wall:.2f} s wall)")
print(f"damage:       {m.minor} minor / {m.major} major")
print(f"collisions:   {m.collisions}, interventions: {m.interventions}")
