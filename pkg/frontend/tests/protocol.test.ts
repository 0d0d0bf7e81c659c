import { describe, expect, test } from "vitest";

import { parseServerMessage } from "../src/protocol.js";

const HELLO = {
  type: "hello",
  tick_hz: 50,
  scenario: "golden",
  calibration: { raw_open: 100, raw_closed: 900 },
  tank: { length_m: 3.048, width_m: 1.829, depth_m: 1.524 },
  poles: [
    [0.914, 0.914],
    [1.524, 0.914],
    [2.134, 0.914],
  ],
  pole_height_m: 0.3048,
};

export const SNAPSHOT = {
  type: "snapshot",
  tick: 12,
  t_ms: 260,
  vehicle: { x: 1, y: 0.9, z: 0.7, roll_deg: 0, pitch_deg: 0, yaw_deg: 0 },
  jaw: { x: 1.35, y: 0.9, z: 0.52 },
  gripper_position: 0.25,
  glove_position: 0.3,
  glove_raw: 340,
  button: false,
  vibrating: false,
  camera_tilt_deg: 0,
  setpoint: { surge: 0, sway: 0, heave: 0, roll: 0, pitch: 0, yaw: 0 },
  discs: [
    { id: "small", diameter_m: 0.1, status: "on_pole", pole: 0, level: 2, x: 1, y: 0.9, z: 0.07 },
  ],
  metrics: {
    subtasks_completed: 0,
    elapsed_s: 0.26,
    minor: 0,
    major: 0,
    collisions: 0,
    interventions: 0,
    completed: false,
  },
  latency_ms: 20,
  sensor_seq: 11,
  bridge: { command: { forwarded: 13, dropped_crc: 0 }, sensor: { forwarded: 13, dropped_crc: 0 } },
  completed: false,
  command_width_us: null,
};

describe("parseServerMessage", () => {
  test("parses a hello", () => {
    const msg = parseServerMessage(JSON.stringify(HELLO));
    expect(msg?.type).toBe("hello");
    if (msg?.type === "hello") {
      expect(msg.calibration.raw_closed).toBe(900);
      expect(msg.poles.length).toBe(3);
    }
  });

  test("parses a snapshot", () => {
    const msg = parseServerMessage(JSON.stringify(SNAPSHOT));
    expect(msg?.type).toBe("snapshot");
    if (msg?.type === "snapshot") {
      expect(msg.tick).toBe(12);
      expect(msg.discs[0].id).toBe("small");
    }
  });

  test("parses an error message", () => {
    expect(parseServerMessage('{"type":"error","detail":"nope"}')).toEqual({
      type: "error",
      detail: "nope",
    });
  });

  test("rejects malformed json", () => {
    expect(parseServerMessage("{oops")).toBeNull();
    expect(parseServerMessage("")).toBeNull();
  });

  test("rejects unknown types and wrong shapes", () => {
    expect(parseServerMessage('{"type":"mystery"}')).toBeNull();
    expect(parseServerMessage('"just a string"')).toBeNull();
    expect(parseServerMessage("42")).toBeNull();

    const broken: any = structuredClone(SNAPSHOT);
    broken.vehicle.x = "left-ish";
    expect(parseServerMessage(JSON.stringify(broken))).toBeNull();

    const missing: any = structuredClone(SNAPSHOT);
    delete missing.jaw;
    expect(parseServerMessage(JSON.stringify(missing))).toBeNull();

    const badHello: any = structuredClone(HELLO);
    badHello.tick_hz = 0;
    expect(parseServerMessage(JSON.stringify(badHello))).toBeNull();
  });
});
