"""Scenario configuration: tank, pole layout, disc geometry, plant constants.

Scenarios are plain YAML mappings mirroring the dataclasses below; any
omitted key falls back to its default, so a scenario file only has to name
what it changes. ``default_scenario()`` is the tank-scale three-disc setup;
``golden_scenario()`` is the same workspace tuned for scripted regression
runs (measurement noise off, more forgiving disc damage thresholds).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import yaml

from .gripper import ControllerConfig

FT = 0.3048  # metres per foot


class ScenarioError(ValueError):
    """Raised for unparseable or physically inconsistent scenario files."""


@dataclass(frozen=True)
class TankConfig:
    """Inner water volume; poses are clamped to it. 10 x 6 ft, 5 ft deep."""

    length_m: float = 10 * FT
    width_m: float = 6 * FT
    depth_m: float = 5 * FT


@dataclass(frozen=True)
class PoleLayout:
    """Three poles on the tank's long axis, ``spacing_m`` apart."""

    spacing_m: float = 2 * FT
    height_m: float = 1 * FT
    radius_m: float = 0.008
    capture_radius_m: float = 0.10  # horizontal snap radius for placements


@dataclass(frozen=True)
class DiscSpec:
    """One puzzle disc plus the connector the jaws actually grip."""

    disc_id: str
    diameter_m: float
    hole_radius_m: float
    height_m: float = 0.035
    connector_width_m: float = 0.02
    connector_height_m: float = 0.06


@dataclass(frozen=True)
class GripperPlantConfig:
    """Actuator dynamics constants for the simulated gripper."""

    rate_max: float = 2.0  # full-travel fraction per second at maximum width
    noise_sigma: float = 0.01  # gaussian sigma on the reported position
    actuation_latency_ms: float = 50.0
    jaw_max_gap_m: float = 0.06
    capture_radius_m: float = 0.08  # jaw-to-connector grasp radius
    initial_position: float = 0.0


@dataclass(frozen=True)
class VehicleConfig:
    """Kinematic vehicle limits and the rigid jaw mount offset."""

    v_surge: float = 0.5  # m/s at full axis
    v_sway: float = 0.4
    v_heave: float = 0.3
    yaw_rate_max_deg_s: float = 45.0
    attitude_rate_max_deg_s: float = 45.0
    hull_radius_m: float = 0.20
    jaw_offset_m: tuple[float, float, float] = (0.35, 0.0, -0.18)  # body frame


@dataclass(frozen=True)
class DamageConfig:
    """Overgrip and impact thresholds behind the damage/collision metrics."""

    delta_minor: float = 0.08  # closure beyond contact for minor damage
    delta_major: float = 0.15
    collision_speed_m_s: float = 0.15


@dataclass(frozen=True)
class SessionConfig:
    """Tick rate, time limit, puzzle poles, and the vehicle start pose."""

    tick_hz: float = 50.0
    limit_s: float = 1800.0
    source_pole: int = 0
    target_pole: int = 2
    start_position_m: tuple[float, float, float] = (0.56, 0.9144, 0.75)
    start_yaw_deg: float = 0.0
    glove_raw_open: int = 100
    glove_raw_closed: int = 900


def _default_discs() -> tuple[DiscSpec, ...]:
    # Smallest disc has the largest centre hole; diameters span a few inches.
    return (
        DiscSpec("small", diameter_m=0.10, hole_radius_m=0.030),
        DiscSpec("medium", diameter_m=0.15, hole_radius_m=0.025),
        DiscSpec("large", diameter_m=0.20, hole_radius_m=0.020),
    )


@dataclass(frozen=True)
class Scenario:
    name: str = "default"
    seed: int = 2024
    tank: TankConfig = field(default_factory=TankConfig)
    poles: PoleLayout = field(default_factory=PoleLayout)
    discs: tuple[DiscSpec, ...] = field(default_factory=_default_discs)
    gripper: GripperPlantConfig = field(default_factory=GripperPlantConfig)
    vehicle: VehicleConfig = field(default_factory=VehicleConfig)
    damage: DamageConfig = field(default_factory=DamageConfig)
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    session: SessionConfig = field(default_factory=SessionConfig)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not self.discs:
            raise ScenarioError("scenario needs at least one disc")
        diameters = [d.diameter_m for d in self.discs]
        if len(set(diameters)) != len(diameters):
            raise ScenarioError("disc diameters must be distinct")
        for d in self.discs:
            if d.connector_width_m >= self.gripper.jaw_max_gap_m:
                raise ScenarioError(
                    f"disc {d.disc_id}: connector wider than the jaw opening"
                )
            if d.connector_width_m <= 2 * self.poles.radius_m:
                raise ScenarioError(
                    f"disc {d.disc_id}: jaws would close onto the pole "
                    "(connector_width_m <= pole diameter)"
                )
        for v in (self.tank.length_m, self.tank.width_m, self.tank.depth_m):
            if v <= 0:
                raise ScenarioError("tank dimensions must be positive")
        if self.session.tick_hz <= 0 or self.session.limit_s <= 0:
            raise ScenarioError("tick_hz and limit_s must be positive")
        if not (
            0 <= self.session.source_pole < 3 and 0 <= self.session.target_pole < 3
        ):
            raise ScenarioError("pole indices must be 0..2")
        if self.session.source_pole == self.session.target_pole:
            raise ScenarioError("source and target pole must differ")
        xs = self.pole_positions()
        for x, _y in xs:
            if not 0 < x < self.tank.length_m:
                raise ScenarioError("pole layout does not fit the tank length")

    def pole_positions(self) -> list[tuple[float, float]]:
        """Plan-view (x, y) of the three poles, centred on the tank."""
        mid_x = self.tank.length_m / 2
        y = self.tank.width_m / 2
        s = self.poles.spacing_m
        return [(mid_x - s, y), (mid_x, y), (mid_x + s, y)]

    @property
    def tick_dt_ms(self) -> float:
        return 1000.0 / self.session.tick_hz

    def p_contact(self, disc: DiscSpec) -> float:
        """Closure fraction at which the jaw gap equals the connector width."""
        frac = 1.0 - disc.connector_width_m / self.gripper.jaw_max_gap_m
        return min(max(frac, 0.0), 1.0)


def default_scenario() -> Scenario:
    return Scenario()


def golden_scenario() -> Scenario:
    """Deterministic regression scenario for the scripted optimal operator.

    Measurement noise is disabled and the damage thresholds widened so the
    scripted run exercises the whole pipeline without riding the margins of
    the default disc fragility.
    """
    return Scenario(
        name="golden",
        seed=7,
        gripper=GripperPlantConfig(noise_sigma=0.0),
        damage=DamageConfig(delta_minor=0.15, delta_major=0.30),
    )


_BUILTIN_SCENARIOS = {"default": default_scenario, "golden": golden_scenario}


def _dataclass_from_dict(cls, data, path):
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: expected a mapping, got {type(data).__name__}")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ScenarioError(f"{path}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name not in data:
            continue
        value = data[f.name]
        if f.name in _NESTED:
            value = _dataclass_from_dict(_NESTED[f.name], value, f"{path}.{f.name}")
        elif f.name == "discs":
            value = tuple(
                _dataclass_from_dict(DiscSpec, d, f"{path}.discs[{i}]")
                for i, d in enumerate(value)
            )
        elif isinstance(value, list):
            value = tuple(value)
        kwargs[f.name] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as err:
        if isinstance(err, ScenarioError):
            raise
        raise ScenarioError(f"{path}: {err}") from err


_NESTED = {
    "tank": TankConfig,
    "poles": PoleLayout,
    "gripper": GripperPlantConfig,
    "vehicle": VehicleConfig,
    "damage": DamageConfig,
    "controller": ControllerConfig,
    "session": SessionConfig,
}


def scenario_from_dict(data: dict) -> Scenario:
    return _dataclass_from_dict(Scenario, data, "scenario")


def scenario_to_dict(scn: Scenario) -> dict:
    return dataclasses.asdict(scn)


def load_scenario(source: str) -> Scenario:
    """Load a scenario by builtin name ('default', 'golden') or YAML path."""
    builder = _BUILTIN_SCENARIOS.get(source)
    if builder is not None:
        return builder()
    try:
        with open(source, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as err:
        raise ScenarioError(f"cannot read scenario {source!r}: {err}") from err
    except yaml.YAMLError as err:
        raise ScenarioError(f"invalid YAML in {source!r}: {err}") from err
    if data is None:
        data = {}
    return scenario_from_dict(data)


def save_scenario(scn: Scenario, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(scenario_to_dict(scn), fh, sort_keys=False)
