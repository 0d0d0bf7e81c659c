"""One simulated teleoperation session: the fixed-order tick pipeline.

Each tick: drain operator input messages, map them to a vehicle setpoint,
step the gripper controller, push the resulting commands through the wire
encoders and bridge, tick the plant, bring the sensor frame back over the
bridge, update haptics, and publish an immutable snapshot. Timing is pure
tick arithmetic (no wall clock), so a (scenario, seed, input trace) triple
fully determines the snapshot stream.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

from . import wire
from .eventlog import EventLogWriter
from .gripper import (
    GloveCalibration,
    GripperControllerState,
    initial_controller_state,
    controller_step,
    normalize,
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
from .plant import TohWorld
from .scenario import Scenario

POT_FULL_SCALE = 1023


class InputError(ValueError):
    """Raised for malformed operator input messages."""


@dataclass(frozen=True)
class TickSchedule:
    """Tick counter that owns the session clock: now = tick / tick_hz."""

    tick_hz: float = 50.0
    tick: int = 0

    @property
    def dt_ms(self) -> float:
        return 1000.0 / self.tick_hz

    @property
    def now_ms(self) -> float:
        return self.tick * self.dt_ms

    def advanced(self) -> "TickSchedule":
        return TickSchedule(self.tick_hz, self.tick + 1)


@dataclass(frozen=True)
class TaskMetrics:
    """Per-session counters reported at the end of a run."""

    subtasks_completed: int = 0
    elapsed_s: float = 0.0
    minor: int = 0
    major: int = 0
    collisions: int = 0
    interventions: int = 0
    completed: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class StateSnapshot:
    """Everything a console needs for one tick, all from the same tick."""

    tick: int
    t_ms: float
    vehicle: dict
    jaw: dict
    gripper_position: float
    glove_position: float
    glove_raw: float
    button: bool
    vibrating: bool
    camera_tilt_deg: float
    setpoint: dict
    discs: list = field(default_factory=list)
    metrics: dict = field(default_factory=dict)
    latency_ms: float = 0.0
    sensor_seq: Optional[int] = None
    bridge: dict = field(default_factory=dict)
    completed: bool = False
    command_width_us: Optional[int] = None

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class _QueuedMessage:
    msg: dict
    ingest_tick: int


_CONTROLLER_FIELDS = ("joy_x", "joy_y", "finger_trigger", "grip_trigger")
_HMD_FIELDS = ("roll_deg", "pitch_deg", "yaw_deg")
_ADMIN_ACTIONS = ("reset", "intervention_ack")


def validate_message(msg: object) -> dict:
    """Check one operator input message against the schema; returns it."""
    if not isinstance(msg, dict):
        raise InputError("input message must be a JSON object")
    kind = msg.get("type")
    if kind == "glove_raw":
        raw = msg.get("raw")
        if not isinstance(raw, (int, float)) or isinstance(raw, bool):
            raise InputError("glove_raw needs a numeric 'raw' field")
    elif kind == "controller":
        for name in _CONTROLLER_FIELDS:
            v = msg.get(name, 0.0)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise InputError(f"controller field {name!r} must be numeric")
    elif kind == "hmd":
        for name in _HMD_FIELDS:
            v = msg.get(name, 0.0)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise InputError(f"hmd field {name!r} must be numeric")
    elif kind == "admin":
        if msg.get("action") not in _ADMIN_ACTIONS:
            raise InputError(f"admin action must be one of {_ADMIN_ACTIONS}")
    else:
        raise InputError(f"unknown input message type {kind!r}")
    return msg


class Session:
    """Owns all mutable state for one session and advances it tick by tick."""

    def __init__(
        self,
        scenario: Scenario,
        seed: Optional[int] = None,
        recorder: Optional[EventLogWriter] = None,
    ):
        self.scenario = scenario
        self.seed = scenario.seed if seed is None else seed
        self.schedule = TickSchedule(tick_hz=scenario.session.tick_hz)
        self.world = TohWorld(scenario, self.seed)
        self.calibration = GloveCalibration(
            scenario.session.glove_raw_open, scenario.session.glove_raw_closed
        )
        self.controller_cfg = scenario.controller
        self.controller_state: GripperControllerState = initial_controller_state()
        self.haptic_state = HapticState()
        self.command_bridge = wire.SerialUdpBridge(decoder=wire.decode_command)
        self.sensor_bridge = wire.SerialUdpBridge()

        # Held operator inputs (they persist between messages).
        self.glove_raw: float = scenario.session.glove_raw_open
        self.controller_inputs = ControllerInputs()
        self.hmd_pose = HmdPose()

        # Host-side view of the vehicle telemetry.
        self.gripper_measured: float = scenario.gripper.initial_position
        self.button_measured = False
        self.vibrating = False
        self.last_sensor_seq: Optional[int] = None

        self._cmd_seq = 0
        self._sensor_seq = 0
        self._events_seen = 0
        self._ledger_seen = 0
        self.subtasks_completed = 0
        self.completed = False
        self.completed_at_ms: Optional[float] = None
        self.latency_ms = 0.0
        self.last_snapshot: Optional[StateSnapshot] = None
        self._last_command_width: Optional[int] = None
        self._recorder = recorder
        if recorder is not None:
            from .scenario import scenario_to_dict

            recorder.write_meta(
                scenario_to_dict(scenario),
                self.seed,
                scenario.session.tick_hz,
                scenario.session.limit_s,
            )

    # -- input handling ----------------------------------------------------

    def apply_message(self, msg: dict) -> None:
        """Apply one validated input message to the held-input state."""
        validate_message(msg)
        kind = msg["type"]
        if kind == "glove_raw":
            self.glove_raw = min(max(float(msg["raw"]), 0.0), 1023.0)
        elif kind == "controller":
            self.controller_inputs = ControllerInputs(
                *(float(msg.get(name, 0.0)) for name in _CONTROLLER_FIELDS)
            )
        elif kind == "hmd":
            self.hmd_pose = HmdPose(
                *(float(msg.get(name, 0.0)) for name in _HMD_FIELDS)
            )
        elif kind == "admin":
            self._apply_admin(msg["action"])

    def _apply_admin(self, action: str) -> None:
        if action == "reset":
            self.world = TohWorld(self.scenario, self.seed)
            self.controller_state = initial_controller_state()
            self.haptic_state = HapticState()
            self.gripper_measured = self.scenario.gripper.initial_position
            self.button_measured = False
            self.vibrating = False
            self._events_seen = 0
            self._ledger_seen = 0
            self.subtasks_completed = 0
            self.completed = False
            self.completed_at_ms = None
        elif action == "intervention_ack":
            self.world.restore_loose_discs()

    # -- the tick pipeline ---------------------------------------------------

    def step(
        self, messages: Optional[list[dict]] = None, ingest_tick: Optional[int] = None
    ) -> StateSnapshot:
        """Run one tick and return its snapshot.

        ``messages`` are the operator inputs drained at this tick;
        ``ingest_tick`` (defaulting to the current tick) is when they
        arrived, for the pipeline-latency readout.
        """
        now = self.schedule.now_ms
        tick = self.schedule.tick
        dt = self.schedule.dt_ms

        # 1. drain inputs
        for msg in messages or []:
            self.apply_message(msg)
            self._record(now, "input", {"tick": tick, "msg": msg})
        if messages:
            arrived = tick if ingest_tick is None else ingest_tick
            self.latency_ms = (tick - arrived + 1) * dt

        # 2. input mapping
        setpoint_host = merge_setpoints(
            map_controller(self.controller_inputs), map_hmd(self.hmd_pose)
        )

        # 3. gripper control step against the last telemetry measurement
        glove_norm = normalize(self.glove_raw, self.calibration)
        command, self.controller_state = controller_step(
            glove_norm,
            self.gripper_measured,
            now,
            self.controller_state,
            self.controller_cfg,
        )

        # 4. encode, bridge, decode at the plant side
        plant_setpoint = self._send_setpoint(setpoint_host, now)
        pwm_width = self._send_servo(command, now)
        self._last_command_width = command.width_us if command is not None else None

        # 5. plant tick
        self.world.tick(plant_setpoint, pwm_width, dt)

        # 6. sensor frame back over the bridge
        self._return_telemetry(now)

        # 7. haptics
        self.vibrating, self.haptic_state = haptic_update(
            self.button_measured, now, self.haptic_state
        )

        # 8. bookkeeping and snapshot
        self._consume_world_events()
        snapshot = self._build_snapshot(tick, setpoint_host)
        self.last_snapshot = snapshot
        self.schedule = self.schedule.advanced()
        return snapshot

    def _send_setpoint(self, sp: VehicleSetpoint, now: float) -> VehicleSetpoint:
        axes = (sp.surge, sp.sway, sp.heave, sp.roll, sp.pitch, sp.yaw)
        frame = wire.CommandFrame(
            seq=self._cmd_seq & 0xFF,
            msg_id=wire.MSG_MANUAL_SETPOINT,
            payload=wire.manual_setpoint_payload(axes),
        )
        self._cmd_seq += 1
        datagram = self.command_bridge.forward(wire.encode_command(frame), now)
        if datagram is None:
            return VehicleSetpoint()  # dropped frame: the plant holds neutral
        decoded = wire.parse_manual_setpoint(wire.decode_command(datagram))
        return VehicleSetpoint(*decoded, camera_tilt_deg=sp.camera_tilt_deg)

    def _send_servo(self, command, now: float) -> Optional[int]:
        if command is None:
            return None
        frame = wire.CommandFrame(
            seq=self._cmd_seq & 0xFF,
            msg_id=wire.MSG_SET_SERVO,
            payload=wire.set_servo_payload(command.channel, command.width_us),
        )
        self._cmd_seq += 1
        self._record(
            now, "command", {"channel": command.channel, "width_us": command.width_us}
        )
        datagram = self.command_bridge.forward(wire.encode_command(frame), now)
        if datagram is None:
            return None
        channel, width = wire.parse_set_servo(wire.decode_command(datagram))
        if channel != self.controller_cfg.channel:
            return None
        return width

    def _return_telemetry(self, now: float) -> None:
        pot = int(round(self.world.gripper.reported_position * POT_FULL_SCALE))
        frame = wire.SensorFrame(
            seq=self._sensor_seq & 0xFF, pot_raw=pot, button=self.world.button
        )
        self._sensor_seq += 1
        datagram = self.sensor_bridge.forward(wire.encode_sensor_frame(frame), now)
        if datagram is None:
            return  # dropped frame: host keeps the previous measurement
        decoded = wire.decode_sensor_frame(datagram)
        self.gripper_measured = decoded.pot_raw / POT_FULL_SCALE
        self.button_measured = decoded.button
        self.last_sensor_seq = decoded.seq

    def _consume_world_events(self) -> None:
        events = self.world.events
        for ev in events[self._events_seen :]:
            self._record(ev.t_ms, ev.kind, ev.detail)
            if (
                ev.kind == "place"
                and ev.detail.get("legal")
                and isinstance(ev.detail.get("source"), int)
                and ev.detail["source"] != ev.detail["pole"]
            ):
                self.subtasks_completed += 1
        self._events_seen = len(events)

        ledger = self.world.ledger.events
        for ev in ledger[self._ledger_seen :]:
            self._record(ev.t_ms, ev.kind, ev.detail)
        self._ledger_seen = len(ledger)

        if not self.completed and self.world.completed():
            self.completed = True
            self.completed_at_ms = self.world.clock_ms
            self._record(self.world.clock_ms, "completed", {})

    def metrics(self) -> TaskMetrics:
        ledger = self.world.ledger
        elapsed_ms = (
            self.completed_at_ms if self.completed_at_ms is not None else self.world.clock_ms
        )
        return TaskMetrics(
            subtasks_completed=self.subtasks_completed,
            elapsed_s=elapsed_ms / 1000.0,
            minor=ledger.minor,
            major=ledger.major,
            collisions=ledger.collisions,
            interventions=ledger.interventions,
            completed=self.completed,
        )

    def _build_snapshot(self, tick: int, setpoint: VehicleSetpoint) -> StateSnapshot:
        world = self.world
        veh = world.vehicle
        jaw = veh.jaw_position()
        discs = []
        for disc_id, d in world.workspace.discs.items():
            discs.append(
                {
                    "id": disc_id,
                    "diameter_m": d.spec.diameter_m,
                    "status": d.status,
                    "pole": d.pole,
                    "level": d.level,
                    "x": float(d.position[0]),
                    "y": float(d.position[1]),
                    "z": float(d.position[2]),
                }
            )
        return StateSnapshot(
            tick=tick,
            t_ms=world.clock_ms,
            vehicle={
                "x": float(veh.position[0]),
                "y": float(veh.position[1]),
                "z": float(veh.position[2]),
                "roll_deg": veh.roll_deg,
                "pitch_deg": veh.pitch_deg,
                "yaw_deg": veh.yaw_deg,
            },
            jaw={"x": float(jaw[0]), "y": float(jaw[1]), "z": float(jaw[2])},
            gripper_position=self.gripper_measured,
            glove_position=float(normalize(self.glove_raw, self.calibration)),
            glove_raw=self.glove_raw,
            button=self.button_measured,
            vibrating=self.vibrating,
            camera_tilt_deg=setpoint.camera_tilt_deg,
            setpoint={
                "surge": setpoint.surge,
                "sway": setpoint.sway,
                "heave": setpoint.heave,
                "roll": setpoint.roll,
                "pitch": setpoint.pitch,
                "yaw": setpoint.yaw,
            },
            discs=discs,
            metrics=self.metrics().as_dict(),
            latency_ms=self.latency_ms,
            sensor_seq=self.last_sensor_seq,
            bridge={
                "command": {
                    "forwarded": self.command_bridge.stats.frames_forwarded,
                    "dropped_crc": self.command_bridge.stats.frames_dropped_crc,
                },
                "sensor": {
                    "forwarded": self.sensor_bridge.stats.frames_forwarded,
                    "dropped_crc": self.sensor_bridge.stats.frames_dropped_crc,
                },
            },
            completed=self.completed,
            command_width_us=self._last_command_width,
        )

    def _record(self, t_ms: float, kind: str, payload: dict) -> None:
        if self._recorder is not None:
            self._recorder.write(t_ms, kind, payload)

    def finalize_recording(self) -> None:
        if self._recorder is not None:
            self._recorder.write(
                self.world.clock_ms, "metrics", self.metrics().as_dict()
            )
