"""Evaluation protocol: session runner, scripted operators, replay, reports.

Operators speak the same input-message schema as a live console, so a
scripted run exercises the full pipeline (input mapping, wire framing,
bridge, plant, telemetry return). ``run_session`` advances a Session at
its fixed tick rate until completion or the time limit and can record a
replayable event log; ``replay`` re-runs a recorded log and must land on
identical metrics thanks to the deterministic plant.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional, Protocol

from .eventlog import EventLogWriter, read_event_log
from .scenario import Scenario, scenario_from_dict
from .session import Session, StateSnapshot, TaskMetrics
from .toh import bfs_solution, initial_state


class Operator(Protocol):
    """A source of operator input messages, polled once per tick."""

    def messages(self, tick: int, snapshot: Optional[StateSnapshot]) -> list[dict]: ...


class IdleOperator:
    """Sends nothing; the session just runs out its clock."""

    def messages(self, tick, snapshot):
        return []


class ReplayOperator:
    """Feeds back the input messages of a recorded log at their original ticks."""

    def __init__(self, inputs_by_tick: dict[int, list[dict]]):
        self._inputs = inputs_by_tick

    def messages(self, tick, snapshot):
        return self._inputs.get(tick, [])


@dataclass
class SessionResult:
    metrics: TaskMetrics
    session: Session
    ticks: int


def run_session(
    scenario: Scenario,
    operator: Operator,
    limit_s: Optional[float] = None,
    record_path: Optional[str] = None,
    seed: Optional[int] = None,
) -> SessionResult:
    """Run one session to completion or the time limit."""
    limit = scenario.session.limit_s if limit_s is None else limit_s
    max_ticks = int(round(limit * scenario.session.tick_hz))
    stream = open(record_path, "w", encoding="utf-8") if record_path else None
    recorder = EventLogWriter(stream) if stream else None
    try:
        session = Session(scenario, seed=seed, recorder=recorder)
        snapshot: Optional[StateSnapshot] = None
        ticks = 0
        for tick in range(max_ticks):
            msgs = operator.messages(tick, snapshot)
            snapshot = session.step(msgs)
            ticks = tick + 1
            if session.completed:
                break
        session.finalize_recording()
        return SessionResult(metrics=session.metrics(), session=session, ticks=ticks)
    finally:
        if stream:
            stream.close()


def replay(log_path: str) -> SessionResult:
    """Re-run a recorded session from its log; metrics must reproduce."""
    records = read_event_log(log_path)
    if not records or records[0].kind != "meta":
        raise ValueError(f"{log_path}: event log does not start with a meta record")
    meta = records[0].payload
    scenario = scenario_from_dict(meta["scenario"])
    inputs: dict[int, list[dict]] = {}
    for rec in records:
        if rec.kind == "input":
            inputs.setdefault(int(rec.payload["tick"]), []).append(rec.payload["msg"])
    return run_session(
        scenario,
        ReplayOperator(inputs),
        limit_s=float(meta["limit_s"]),
        seed=int(meta["seed"]),
    )


# -- aggregate reporting ---------------------------------------------------

_REPORT_FIELDS = (
    "subtasks_completed",
    "elapsed_s",
    "minor",
    "major",
    "collisions",
    "interventions",
)


def report(metrics_list: list[TaskMetrics]) -> dict:
    """Aggregate per-session metrics into totals and means."""
    if not metrics_list:
        raise ValueError("report needs at least one session")
    n = len(metrics_list)
    totals = {
        f: sum(getattr(m, f) for m in metrics_list) for f in _REPORT_FIELDS
    }
    totals["completed"] = sum(1 for m in metrics_list if m.completed)
    means = {f: totals[f] / n for f in _REPORT_FIELDS}
    return {"sessions": n, "totals": totals, "means": means}


def render_report(agg: dict) -> str:
    lines = [f"sessions: {agg['sessions']} (completed: {agg['totals']['completed']})"]
    lines.append(f"{'metric':<20}{'total':>12}{'mean':>12}")
    for f in _REPORT_FIELDS:
        lines.append(f"{f:<20}{agg['totals'][f]:>12.2f}{agg['means'][f]:>12.3f}")
    return "\n".join(lines)


# -- scripted optimal operator ----------------------------------------------

_GOTO_ORDERS = {"ascend": "z", "translate": "xy", "descend": "z"}


class OptimalToHOperator:
    """Flies the shortest Tower-of-Hanoi solution through the input schema.

    For each puzzle move: rise to cruise height, translate above the source
    pole, descend onto the top disc's connector, close the glove until the
    grasp button confirms, carry the disc to the target pole the same way,
    and open to release. Navigation is one axis at a time with proportional
    slowdown, which keeps contact speeds low and sidesteps the shifted
    mode's sway/heave lockout when reversing.
    """

    CRUISE_Z = 0.55
    AXIS_TOL = 0.012
    SLOW_RADIUS_M = 0.15
    CLOSE_MARGIN = 0.05  # glove target above the contact fraction
    RELEASE_DROP = 0.25  # glove target below the contact fraction
    RELEASE_CLEARANCE = 0.05  # jaw height above the landing stack when releasing

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        n = len(scenario.discs)
        src = scenario.session.source_pole
        dst = scenario.session.target_pole
        self.moves = bfs_solution(initial_state(n, src), initial_state(n, dst))
        self.pole_xy = scenario.pole_positions()
        self._move_idx = 0
        self._steps: list[tuple] = []
        self._step_idx = 0
        self._started = False
        self._last_controller_msg: Optional[tuple] = None
        self._glove_value: Optional[float] = None
        self._heights = {d.disc_id: d for d in scenario.discs}

    # geometry helpers -------------------------------------------------------

    def _stack(self, snapshot: StateSnapshot, pole: int) -> list[dict]:
        discs = [d for d in snapshot.discs if d["status"] == "on_pole" and d["pole"] == pole]
        return sorted(discs, key=lambda d: d["level"])

    def _grasp_point_z(self, disc: dict) -> float:
        spec = self._heights[disc["id"]]
        return disc["z"] + spec.height_m + spec.connector_height_m / 2

    def _stack_top_z(self, snapshot: StateSnapshot, pole: int) -> float:
        return sum(self._heights[d["id"]].height_m for d in self._stack(snapshot, pole))

    def _plan_move(self, snapshot: StateSnapshot) -> None:
        src, dst = self.moves[self._move_idx]
        stack = self._stack(snapshot, src)
        if not stack:
            raise RuntimeError(f"planned move {src}->{dst} from an empty pole")
        disc = stack[-1]
        spec = self._heights[disc["id"]]
        p_contact = self.scenario.p_contact(spec)
        sx, sy = self.pole_xy[src]
        dx, dy = self.pole_xy[dst]
        grasp_z = self._grasp_point_z(disc)
        release_z = (
            self._stack_top_z(snapshot, dst)
            + spec.height_m
            + spec.connector_height_m / 2
            + self.RELEASE_CLEARANCE
        )
        jaw = snapshot.jaw
        self._steps = [
            ("goto", "ascend", (jaw["x"], jaw["y"], self.CRUISE_Z)),
            ("goto", "translate", (sx, sy, self.CRUISE_Z)),
            ("goto", "descend", (sx, sy, grasp_z)),
            ("close", disc["id"], p_contact + self.CLOSE_MARGIN),
            ("goto", "ascend", (sx, sy, self.CRUISE_Z)),
            ("goto", "translate", (dx, dy, self.CRUISE_Z)),
            ("goto", "descend", (dx, dy, release_z)),
            ("open", disc["id"], max(p_contact - self.RELEASE_DROP, 0.0)),
        ]
        self._step_idx = 0

    # message builders -------------------------------------------------------

    def _controller_msg(self, surge: float, sway: float, heave: float) -> Optional[dict]:
        key = (round(surge, 4), round(sway, 4), round(heave, 4))
        if key == self._last_controller_msg:
            return None
        self._last_controller_msg = key
        if surge < 0:
            # reverse needs the shift modifier; sway/heave are locked out there
            return {
                "type": "controller",
                "joy_x": 0.0,
                "joy_y": 0.0,
                "finger_trigger": -surge,
                "grip_trigger": 1.0,
            }
        return {
            "type": "controller",
            "joy_x": sway,
            "joy_y": heave,
            "finger_trigger": surge,
            "grip_trigger": 0.0,
        }

    def _glove_msg(self, value: float) -> Optional[dict]:
        if self._glove_value is not None and abs(value - self._glove_value) < 1e-9:
            return None
        self._glove_value = value
        cal = self.scenario.session
        raw = cal.glove_raw_open + value * (cal.glove_raw_closed - cal.glove_raw_open)
        return {"type": "glove_raw", "raw": round(raw, 2)}

    def _axis_command(self, err: float) -> float:
        mag = min(abs(err) / self.SLOW_RADIUS_M, 1.0)
        return mag if err > 0 else -mag

    # the per-tick policy ------------------------------------------------------

    def messages(self, tick: int, snapshot: Optional[StateSnapshot]) -> list[dict]:
        if snapshot is None:
            return [{"type": "glove_raw", "raw": self.scenario.session.glove_raw_open}]
        if self._move_idx >= len(self.moves):
            msg = self._controller_msg(0.0, 0.0, 0.0)
            return [msg] if msg else []
        if not self._started or self._step_idx >= len(self._steps):
            self._plan_move(snapshot)
            self._started = True

        step = self._steps[self._step_idx]
        out: list[dict] = []
        kind = step[0]

        if kind == "goto":
            _, stage, (tx, ty, tz) = step
            jaw = snapshot.jaw
            errs = {"x": tx - jaw["x"], "y": ty - jaw["y"], "z": tz - jaw["z"]}
            order = _GOTO_ORDERS[stage]
            active = next((a for a in order if abs(errs[a]) > self.AXIS_TOL), None)
            if active is None:
                msg = self._controller_msg(0.0, 0.0, 0.0)
                if msg:
                    out.append(msg)
                self._advance()
            else:
                cmd = self._axis_command(errs[active])
                surge = cmd if active == "x" else 0.0
                sway = cmd if active == "y" else 0.0
                heave = cmd if active == "z" else 0.0
                msg = self._controller_msg(surge, sway, heave)
                if msg:
                    out.append(msg)
        elif kind == "close":
            _, disc_id, glove_target = step
            msg = self._glove_msg(glove_target)
            if msg:
                out.append(msg)
            if snapshot.button:
                self._advance()
        elif kind == "open":
            _, disc_id, glove_target = step
            msg = self._glove_msg(glove_target)
            if msg:
                out.append(msg)
            placed = any(
                d["id"] == disc_id and d["status"] == "on_pole" for d in snapshot.discs
            )
            if not snapshot.button and placed:
                self._advance()
        return out

    def _advance(self) -> None:
        self._step_idx += 1
        if self._step_idx >= len(self._steps):
            self._move_idx += 1


# -- step-response bench -----------------------------------------------------

BENCH_TARGETS = (0.0, 1.0, 0.3, 0.8)
BENCH_HOLD_S = 4.0


class _StepOperator:
    """Steps the glove through a target sequence at a fixed period."""

    def __init__(self, scenario: Scenario, targets, hold_s: float):
        self.scenario = scenario
        self.targets = targets
        self.hold_ticks = int(round(hold_s * scenario.session.tick_hz))

    def target_at(self, tick: int) -> float:
        idx = min(tick // self.hold_ticks, len(self.targets) - 1)
        return self.targets[idx]

    def messages(self, tick, snapshot):
        if tick % self.hold_ticks == 0 and tick // self.hold_ticks < len(self.targets):
            cal = self.scenario.session
            value = self.target_at(tick)
            raw = cal.glove_raw_open + value * (cal.glove_raw_closed - cal.glove_raw_open)
            return [{"type": "glove_raw", "raw": raw}]
        return []


@dataclass
class BenchRow:
    t_ms: float
    target: float
    gripper_true: float
    gripper_reported: float
    command_width_us: Optional[int]


def bench_step_response(
    scenario: Optional[Scenario] = None,
    targets=BENCH_TARGETS,
    hold_s: float = BENCH_HOLD_S,
) -> list[BenchRow]:
    """Drive the closed loop through glove target steps and trace the response."""
    scenario = scenario or Scenario()
    op = _StepOperator(scenario, targets, hold_s)
    session = Session(scenario)
    rows = []
    total_ticks = op.hold_ticks * len(targets)
    snapshot = None
    for tick in range(total_ticks):
        msgs = op.messages(tick, snapshot)
        snapshot = session.step(msgs)
        rows.append(
            BenchRow(
                t_ms=snapshot.t_ms,
                target=op.target_at(tick),
                gripper_true=session.world.gripper.true_position,
                gripper_reported=snapshot.gripper_position,
                command_width_us=snapshot.command_width_us,
            )
        )
    return rows


def bench_rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["t_ms", "target", "gripper_true", "gripper_reported", "command_width_us"])
    for r in rows:
        writer.writerow(
            [
                f"{r.t_ms:.3f}",
                f"{r.target:.3f}",
                f"{r.gripper_true:.6f}",
                f"{r.gripper_reported:.6f}",
                "" if r.command_width_us is None else r.command_width_us,
            ]
        )
    return buf.getvalue()
