"""Deterministic simulated plant: gripper dynamics, kinematic vehicle, and
the Tower-of-Hanoi workspace with grasp, damage, and collision tracking.

Everything is advanced by explicit ticks with caller-supplied dt; the only
randomness is the seeded gaussian noise on the *reported* gripper position,
so identical (seed, command trace) pairs replay bit-for-bit.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .gripper import PWM_NEUTRAL_US, PwmCommand
from .inputmap import VehicleSetpoint, wrap_angle_deg
from .scenario import DiscSpec, Scenario

PWM_DEAD_ZONE_US = 30
PWM_SPAN_US = 370  # full authority at 1500 +/- (30 + 370) = 1900/1100


def pwm_rate_fraction(width_us: int) -> float:
    """Signed full-travel fraction per second per unit rate_max.

    Close widths (< 1500) drive the position toward 1, open widths toward 0.
    Widths within the 30 us dead zone around neutral produce no motion.
    """
    offset = abs(width_us - PWM_NEUTRAL_US)
    if offset <= PWM_DEAD_ZONE_US:
        return 0.0
    magnitude = min((offset - PWM_DEAD_ZONE_US) / PWM_SPAN_US, 1.0)
    return magnitude if width_us < PWM_NEUTRAL_US else -magnitude


class GripperPlant:
    """1-DOF actuator integrating PWM commands after a fixed latency.

    The true position follows the piecewise-linear rate law exactly;
    the reported position adds seeded gaussian measurement noise and is
    clamped back into [0, 1].
    """

    def __init__(self, cfg, seed: int):
        self.cfg = cfg
        self.true_position = float(cfg.initial_position)
        self.reported_position = self.true_position
        self.active_pwm_us = PWM_NEUTRAL_US
        self.clock_ms = 0.0
        self._pending: deque[tuple[float, int]] = deque()
        self._rng = np.random.default_rng(seed)

    def command(self, width_us: int) -> None:
        """Queue a width change; it takes effect actuation_latency_ms from now."""
        self._pending.append((self.clock_ms + self.cfg.actuation_latency_ms, width_us))

    def tick(self, incoming: Optional[PwmCommand | int], dt_ms: float) -> float:
        """Advance the actuator by dt_ms and return the reported position.

        ``incoming`` is a command arriving at the start of this tick (a
        PwmCommand or a bare width). Integration splits the tick at every
        command-activation instant, so latency boundaries are exact.
        """
        if dt_ms <= 0:
            raise ValueError("dt_ms must be positive")
        if incoming is not None:
            width = incoming.width_us if isinstance(incoming, PwmCommand) else int(incoming)
            self.command(width)

        t = self.clock_ms
        end = t + dt_ms
        while t < end:
            while self._pending and self._pending[0][0] <= t:
                self.active_pwm_us = self._pending.popleft()[1]
            seg_end = end
            if self._pending and self._pending[0][0] < end:
                seg_end = self._pending[0][0]
            rate = self.cfg.rate_max * pwm_rate_fraction(self.active_pwm_us)
            p = self.true_position + rate * (seg_end - t) / 1000.0
            self.true_position = min(max(p, 0.0), 1.0)
            t = seg_end
        self.clock_ms = end

        noise = self._rng.normal(0.0, self.cfg.noise_sigma) if self.cfg.noise_sigma > 0 else 0.0
        self.reported_position = min(max(self.true_position + noise, 0.0), 1.0)
        return self.reported_position


@dataclass
class VehicleTickResult:
    wall_contact: bool
    speed_m_s: float


class VehiclePlant:
    """Kinematic vehicle: setpoint axes scale straight into body velocities.

    No hydrodynamics; position is Euler-integrated and clamped to the tank
    (keeping the hull radius off the walls). z is height above the floor.
    """

    def __init__(self, cfg, tank, position, yaw_deg: float = 0.0):
        self.cfg = cfg
        self.tank = tank
        self.position = np.array(position, dtype=float)
        self.roll_deg = 0.0
        self.pitch_deg = 0.0
        self.yaw_deg = wrap_angle_deg(yaw_deg)

    def tick(self, sp: VehicleSetpoint, dt_ms: float) -> VehicleTickResult:
        if dt_ms <= 0:
            raise ValueError("dt_ms must be positive")
        dt = dt_ms / 1000.0
        cfg = self.cfg

        psi = math.radians(self.yaw_deg)
        u = sp.surge * cfg.v_surge
        v = sp.sway * cfg.v_sway
        w = sp.heave * cfg.v_heave
        vel = np.array(
            [
                u * math.cos(psi) - v * math.sin(psi),
                u * math.sin(psi) + v * math.cos(psi),
                w,
            ]
        )

        self.roll_deg = wrap_angle_deg(self.roll_deg + sp.roll * cfg.attitude_rate_max_deg_s * dt)
        self.pitch_deg = wrap_angle_deg(self.pitch_deg + sp.pitch * cfg.attitude_rate_max_deg_s * dt)
        self.yaw_deg = wrap_angle_deg(self.yaw_deg + sp.yaw * cfg.yaw_rate_max_deg_s * dt)

        raw = self.position + vel * dt
        r = cfg.hull_radius_m
        lo = np.array([r, r, r])
        hi = np.array([self.tank.length_m - r, self.tank.width_m - r, self.tank.depth_m - r])
        clamped = np.minimum(np.maximum(raw, lo), hi)
        wall_contact = bool(np.any(raw < lo) or np.any(raw > hi))
        self.position = clamped
        return VehicleTickResult(wall_contact=wall_contact, speed_m_s=float(np.linalg.norm(vel)))

    def jaw_position(self) -> np.ndarray:
        """World position of the jaw reference point (rigid body-frame offset)."""
        dx, dy, dz = self.cfg.jaw_offset_m
        psi = math.radians(self.yaw_deg)
        return self.position + np.array(
            [
                dx * math.cos(psi) - dy * math.sin(psi),
                dx * math.sin(psi) + dy * math.cos(psi),
                dz,
            ]
        )


ON_POLE = "on_pole"
GRASPED = "grasped"
LOOSE = "loose"


@dataclass
class DiscState:
    spec: DiscSpec
    status: str
    pole: Optional[int]
    level: Optional[int]
    position: np.ndarray  # (x, y, z of the disc underside)


class TohWorkspace:
    """Three poles and the discs distributed across pole / grasped / loose."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.pole_xy = [np.array(p) for p in scenario.pole_positions()]
        self.discs: dict[str, DiscState] = {}
        source = scenario.session.source_pole
        x, y = self.pole_xy[source]
        z = 0.0
        ordered = sorted(scenario.discs, key=lambda d: -d.diameter_m)
        for level, spec in enumerate(ordered):
            self.discs[spec.disc_id] = DiscState(
                spec=spec,
                status=ON_POLE,
                pole=source,
                level=level,
                position=np.array([x, y, z]),
            )
            z += spec.height_m

    def stack(self, pole: int) -> list[str]:
        """Disc ids on a pole, bottom to top."""
        on = [d for d in self.discs.values() if d.status == ON_POLE and d.pole == pole]
        return [d.spec.disc_id for d in sorted(on, key=lambda d: d.level)]

    def top_disc(self, pole: int) -> Optional[str]:
        ids = self.stack(pole)
        return ids[-1] if ids else None

    def stack_top_z(self, pole: int) -> float:
        return sum(self.discs[i].spec.height_m for i in self.stack(pole))

    def grasp_point(self, disc_id: str) -> np.ndarray:
        """Centre of the connector the jaws close on."""
        d = self.discs[disc_id]
        top = d.position[2] + d.spec.height_m
        return np.array([d.position[0], d.position[1], top + d.spec.connector_height_m / 2])

    def grasp(self, disc_id: str, jaw: np.ndarray) -> None:
        d = self.discs[disc_id]
        d.status = GRASPED
        d.pole = None
        d.level = None
        self.follow_jaw(disc_id, jaw)

    def follow_jaw(self, disc_id: str, jaw: np.ndarray) -> None:
        d = self.discs[disc_id]
        d.position = np.array(
            [jaw[0], jaw[1], jaw[2] - d.spec.connector_height_m / 2 - d.spec.height_m]
        )

    def place_on_pole(self, disc_id: str, pole: int) -> None:
        d = self.discs[disc_id]
        level = len(self.stack(pole))
        z = self.stack_top_z(pole)
        x, y = self.pole_xy[pole]
        d.status = ON_POLE
        d.pole = pole
        d.level = level
        d.position = np.array([x, y, z])

    def set_loose(self, disc_id: str, x: float, y: float) -> None:
        d = self.discs[disc_id]
        d.status = LOOSE
        d.pole = None
        d.level = None
        d.position = np.array([x, y, 0.0])

    def nearest_pole(self, xy: np.ndarray) -> tuple[int, float]:
        dists = [float(np.linalg.norm(xy[:2] - p)) for p in self.pole_xy]
        idx = int(np.argmin(dists))
        return idx, dists[idx]

    def size_rank(self, disc_id: str) -> int:
        """1 for the smallest diameter upward; the harness's disc ordering."""
        ordered = sorted(self.discs.values(), key=lambda d: d.spec.diameter_m)
        return [d.spec.disc_id for d in ordered].index(disc_id) + 1

    def to_state(self):
        """Stacks of size ranks, bottom to top, for the puzzle-rule checks."""
        return tuple(
            tuple(self.size_rank(i) for i in self.stack(pole)) for pole in range(3)
        )

    def all_on_pole_legal(self, pole: int) -> bool:
        ids = self.stack(pole)
        if len(ids) != len(self.discs):
            return False
        diams = [self.discs[i].spec.diameter_m for i in ids]
        return all(a > b for a, b in zip(diams, diams[1:]))


def grasp_check(
    gripper_true: float, workspace: TohWorkspace, jaw: np.ndarray, capture_radius_m: float
) -> tuple[bool, Optional[str]]:
    """Instantaneous grasp predicate for a free jaw.

    A disc is grabbable when its connector is within the capture radius and
    the jaw has closed at least to the connector width. Only loose discs
    and stack tops are reachable; lower discs are shielded by the ones
    above them.
    """
    scenario = workspace.scenario
    best_id = None
    best_dist = capture_radius_m
    for disc_id, d in workspace.discs.items():
        if d.status == GRASPED:
            continue
        if d.status == ON_POLE and workspace.top_disc(d.pole) != disc_id:
            continue
        dist = float(np.linalg.norm(workspace.grasp_point(disc_id) - jaw))
        if dist <= best_dist:
            best_dist = dist
            best_id = disc_id
    if best_id is None:
        return False, None
    if gripper_true >= scenario.p_contact(workspace.discs[best_id].spec):
        return True, best_id
    return False, None


@dataclass
class LedgerEvent:
    t_ms: float
    kind: str
    detail: dict


@dataclass
class DamageLedger:
    """Session damage/collision/intervention counters with their event list."""

    minor: int = 0
    major: int = 0
    collisions: int = 0
    interventions: int = 0
    events: list[LedgerEvent] = field(default_factory=list)

    _KINDS = {"minor", "major", "collision", "intervention"}

    def add(self, t_ms: float, kind: str, detail: dict) -> None:
        if kind not in self._KINDS:
            raise ValueError(f"unknown ledger kind {kind!r}")
        self.events.append(LedgerEvent(t_ms, kind, dict(detail)))
        if kind == "minor":
            self.minor += 1
        elif kind == "major":
            self.major += 1
        elif kind == "collision":
            self.collisions += 1
        else:
            self.interventions += 1


class TohWorld:
    """The composed plant: vehicle + gripper + workspace + ledgers.

    ``tick`` applies one decoded setpoint and optional gripper PWM, then
    runs grasp and damage checks. World events (grasp / place / drop) feed
    the task metrics; the ledger holds damage, collisions, interventions.
    """

    def __init__(self, scenario: Scenario, seed: Optional[int] = None):
        self.scenario = scenario
        seed = scenario.seed if seed is None else seed
        self.gripper = GripperPlant(scenario.gripper, seed)
        self.vehicle = VehiclePlant(
            scenario.vehicle,
            scenario.tank,
            scenario.session.start_position_m,
            scenario.session.start_yaw_deg,
        )
        self.workspace = TohWorkspace(scenario)
        self.ledger = DamageLedger()
        self.events: list[LedgerEvent] = []
        self.clock_ms = 0.0
        self.button = False
        self.grasped_disc: Optional[str] = None
        self._grasp_source: Optional[int | str] = None
        self._episode_minor = False
        self._episode_major = False
        self._wall_episode = False
        self._pole_episodes: set[int] = set()
        self._stack_episodes: set[int] = set()

    # -- tick pipeline ----------------------------------------------------

    def tick(self, sp: VehicleSetpoint, gripper_pwm: Optional[int], dt_ms: float) -> float:
        """Advance everything one tick; returns the reported gripper position."""
        self.clock_ms += dt_ms
        vres = self.vehicle.tick(sp, dt_ms)
        reported = self.gripper.tick(gripper_pwm, dt_ms)
        jaw = self.vehicle.jaw_position()
        self._update_grasp(jaw)
        self._update_collisions(vres, jaw)
        self._update_overgrip()
        return reported

    def _emit(self, kind: str, detail: dict) -> None:
        self.events.append(LedgerEvent(self.clock_ms, kind, detail))

    def _update_grasp(self, jaw: np.ndarray) -> None:
        ws = self.workspace
        p_true = self.gripper.true_position
        if self.grasped_disc is not None:
            disc_id = self.grasped_disc
            spec = ws.discs[disc_id].spec
            if p_true >= self.scenario.p_contact(spec):
                ws.follow_jaw(disc_id, jaw)
                self.button = True
                return
            # jaws opened past the connector: the disc comes free
            pole, dist = ws.nearest_pole(jaw)
            if dist <= self.scenario.poles.capture_radius_m:
                stack_before = ws.stack(pole)
                legal = (
                    not stack_before
                    or ws.discs[stack_before[-1]].spec.diameter_m > spec.diameter_m
                )
                ws.place_on_pole(disc_id, pole)
                self._emit(
                    "place",
                    {
                        "disc": disc_id,
                        "pole": pole,
                        "source": self._grasp_source,
                        "legal": legal,
                    },
                )
            else:
                ws.set_loose(disc_id, float(jaw[0]), float(jaw[1]))
                self._emit("drop", {"disc": disc_id, "source": self._grasp_source})
                self.ledger.add(self.clock_ms, "intervention", {"disc": disc_id})
            self.grasped_disc = None
            self._grasp_source = None
            self._episode_minor = False
            self._episode_major = False
            self.button = False
            return

        grabbed, disc_id = grasp_check(p_true, ws, jaw, self.scenario.gripper.capture_radius_m)
        if grabbed:
            src = ws.discs[disc_id].pole
            self._grasp_source = src if src is not None else LOOSE
            ws.grasp(disc_id, jaw)
            self.grasped_disc = disc_id
            self._episode_minor = False
            self._episode_major = False
            self._emit("grasp", {"disc": disc_id, "source": self._grasp_source})
        self.button = grabbed

    def _update_collisions(self, vres: VehicleTickResult, jaw: np.ndarray) -> None:
        threshold = self.scenario.damage.collision_speed_m_s
        t = self.clock_ms

        if vres.wall_contact:
            if not self._wall_episode and vres.speed_m_s >= threshold:
                self.ledger.add(t, "collision", {"what": "tank_wall", "speed": vres.speed_m_s})
            self._wall_episode = True
        else:
            self._wall_episode = False

        hull = self.vehicle.position
        reach = self.scenario.vehicle.hull_radius_m + self.scenario.poles.radius_m
        for i, (px, py) in enumerate(self.workspace.pole_xy):
            z = min(max(hull[2], 0.0), self.scenario.poles.height_m)
            dist = math.dist((hull[0], hull[1], hull[2]), (px, py, z))
            if dist < reach:
                if i not in self._pole_episodes and vres.speed_m_s >= threshold:
                    self.ledger.add(t, "collision", {"what": "pole", "pole": i})
                self._pole_episodes.add(i)
            else:
                self._pole_episodes.discard(i)

        # The jaw straddles the bare pole when aligned with it, so only the
        # stacked discs act as an obstacle for it.
        for i in range(3):
            stack = self.workspace.stack(i)
            if not stack:
                self._stack_episodes.discard(i)
                continue
            radius = max(self.workspace.discs[d].spec.diameter_m for d in stack) / 2
            px, py = self.workspace.pole_xy[i]
            horizontal = math.hypot(jaw[0] - px, jaw[1] - py)
            inside = horizontal < radius and jaw[2] < self.workspace.stack_top_z(i)
            if inside:
                if i not in self._stack_episodes and vres.speed_m_s >= threshold:
                    self.ledger.add(t, "collision", {"what": "disc_stack", "pole": i})
                self._stack_episodes.add(i)
            else:
                self._stack_episodes.discard(i)

    def _update_overgrip(self) -> None:
        if self.grasped_disc is None:
            return
        spec = self.workspace.discs[self.grasped_disc].spec
        p_contact = self.scenario.p_contact(spec)
        p = self.gripper.true_position
        if p > p_contact + self.scenario.damage.delta_minor and not self._episode_minor:
            self.ledger.add(self.clock_ms, "minor", {"disc": self.grasped_disc})
            self._episode_minor = True
        if p > p_contact + self.scenario.damage.delta_major and not self._episode_major:
            self.ledger.add(self.clock_ms, "major", {"disc": self.grasped_disc})
            self._episode_major = True

    # -- queries -----------------------------------------------------------

    def completed(self) -> bool:
        return self.workspace.all_on_pole_legal(self.scenario.session.target_pole)

    def restore_loose_discs(self) -> int:
        """Put loose discs back on their nearest pole (the external helper)."""
        restored = 0
        for disc_id, d in self.workspace.discs.items():
            if d.status == LOOSE:
                pole, _ = self.workspace.nearest_pole(d.position)
                self.workspace.place_on_pole(disc_id, pole)
                restored += 1
        return restored
