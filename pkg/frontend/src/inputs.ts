// Widget and keyboard events to gateway input messages.
// The glove slider works in normalized closure [0, 1] and is inverted
// through the active calibration, so "fully closed" lands exactly on
// raw_closed whatever the glove's polarity.

import { Calibration } from "./protocol.js";

export interface AxesState {
  joyX: number;
  joyY: number;
  finger: number;
  shift: boolean;
}

export function clamp01(v: number): number {
  return v < 0 ? 0 : v > 1 ? 1 : v;
}

export function gloveRawFromClosure(closure: number, cal: Calibration): number {
  const v = clamp01(closure);
  return Math.round(cal.raw_open + v * (cal.raw_closed - cal.raw_open));
}

export function gloveMessage(closure: number, cal: Calibration) {
  return { type: "glove_raw", raw: gloveRawFromClosure(closure, cal) };
}

export function controllerMessage(axes: AxesState) {
  return {
    type: "controller",
    joy_x: axes.joyX,
    joy_y: axes.joyY,
    finger_trigger: clamp01(axes.finger),
    grip_trigger: axes.shift ? 1.0 : 0.0,
  };
}

export function hmdMessage(rollDeg: number, pitchDeg: number) {
  return { type: "hmd", roll_deg: rollDeg, pitch_deg: pitchDeg, yaw_deg: 0.0 };
}

export function adminMessage(action: "reset" | "intervention_ack") {
  return { type: "admin", action };
}

// What the joystick axes mean under the current shift state; mirrors the
// vehicle-side mapping so the panel labels never lie.
export function axisLabels(shift: boolean): { x: string; y: string; trigger: string } {
  if (shift) {
    return { x: "roll", y: "pitch", trigger: "surge (reverse)" };
  }
  return { x: "sway", y: "heave", trigger: "surge (forward)" };
}

// Keyboard bindings mirroring the hand controller: A/D joystick x,
// W/S joystick y, F the finger trigger, Shift the grip modifier,
// arrow keys tilt the head (yaw left/right, camera up/down).
export const KEY_HELP =
  "A/D: joy x | W/S: joy y | F: finger trigger | Shift: modifier | arrows: head";

export function keysToAxes(pressed: Set<string>): AxesState {
  let joyX = 0;
  let joyY = 0;
  if (pressed.has("a")) joyX -= 1;
  if (pressed.has("d")) joyX += 1;
  if (pressed.has("w")) joyY += 1;
  if (pressed.has("s")) joyY -= 1;
  return {
    joyX,
    joyY,
    finger: pressed.has("f") ? 1 : 0,
    shift: pressed.has("shift"),
  };
}

export function keysToHead(pressed: Set<string>, step = 5.0): { roll: number; pitch: number } {
  let roll = 0;
  let pitch = 0;
  if (pressed.has("arrowleft")) roll -= step;
  if (pressed.has("arrowright")) roll += step;
  if (pressed.has("arrowup")) pitch += step;
  if (pressed.has("arrowdown")) pitch -= step;
  return { roll, pitch };
}
