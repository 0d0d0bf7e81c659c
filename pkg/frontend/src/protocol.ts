// Gateway wire schema: JSON messages over one WebSocket.
// parseServerMessage is deliberately strict; a frame that does not match
// the schema is skipped by the caller (and counted), never half-applied.

export interface Calibration {
  raw_open: number;
  raw_closed: number;
}

export interface Hello {
  type: "hello";
  tick_hz: number;
  scenario: string;
  calibration: Calibration;
  tank: { length_m: number; width_m: number; depth_m: number };
  poles: [number, number][];
  pole_height_m: number;
}

export interface VehiclePose {
  x: number;
  y: number;
  z: number;
  roll_deg: number;
  pitch_deg: number;
  yaw_deg: number;
}

export interface DiscInfo {
  id: string;
  diameter_m: number;
  status: string;
  pole: number | null;
  level: number | null;
  x: number;
  y: number;
  z: number;
}

export interface Setpoint {
  surge: number;
  sway: number;
  heave: number;
  roll: number;
  pitch: number;
  yaw: number;
}

export interface Metrics {
  subtasks_completed: number;
  elapsed_s: number;
  minor: number;
  major: number;
  collisions: number;
  interventions: number;
  completed: boolean;
}

export interface Snapshot {
  type: "snapshot";
  tick: number;
  t_ms: number;
  vehicle: VehiclePose;
  jaw: { x: number; y: number; z: number };
  gripper_position: number;
  glove_position: number;
  glove_raw: number;
  button: boolean;
  vibrating: boolean;
  camera_tilt_deg: number;
  setpoint: Setpoint;
  discs: DiscInfo[];
  metrics: Metrics;
  latency_ms: number;
  completed: boolean;
}

export interface ErrorMessage {
  type: "error";
  detail: string;
}

export type ServerMessage = Hello | Snapshot | ErrorMessage;

function isNum(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function hasNums(obj: any, keys: string[]): boolean {
  return obj && typeof obj === "object" && keys.every((k) => isNum(obj[k]));
}

function validHello(m: any): m is Hello {
  return (
    isNum(m.tick_hz) &&
    m.tick_hz > 0 &&
    typeof m.scenario === "string" &&
    hasNums(m.calibration, ["raw_open", "raw_closed"]) &&
    hasNums(m.tank, ["length_m", "width_m", "depth_m"]) &&
    Array.isArray(m.poles) &&
    m.poles.every((p: any) => Array.isArray(p) && p.length === 2 && p.every(isNum)) &&
    isNum(m.pole_height_m)
  );
}

function validSnapshot(m: any): m is Snapshot {
  return (
    isNum(m.tick) &&
    isNum(m.t_ms) &&
    hasNums(m.vehicle, ["x", "y", "z", "roll_deg", "pitch_deg", "yaw_deg"]) &&
    hasNums(m.jaw, ["x", "y", "z"]) &&
    isNum(m.gripper_position) &&
    isNum(m.glove_position) &&
    isNum(m.glove_raw) &&
    typeof m.button === "boolean" &&
    typeof m.vibrating === "boolean" &&
    isNum(m.camera_tilt_deg) &&
    hasNums(m.setpoint, ["surge", "sway", "heave", "roll", "pitch", "yaw"]) &&
    Array.isArray(m.discs) &&
    m.discs.every(
      (d: any) => typeof d.id === "string" && hasNums(d, ["diameter_m", "x", "y", "z"]),
    ) &&
    m.metrics &&
    typeof m.metrics === "object" &&
    isNum(m.latency_ms)
  );
}

export function parseServerMessage(text: string): ServerMessage | null {
  let msg: any;
  try {
    msg = JSON.parse(text);
  } catch {
    return null;
  }
  if (!msg || typeof msg !== "object") return null;
  switch (msg.type) {
    case "hello":
      return validHello(msg) ? (msg as Hello) : null;
    case "snapshot":
      return validSnapshot(msg) ? (msg as Snapshot) : null;
    case "error":
      return typeof msg.detail === "string" ? (msg as ErrorMessage) : null;
    default:
      return null;
  }
}
