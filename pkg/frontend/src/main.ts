// DOM wiring for the operator console: connect to a gateway, mirror its
// snapshot stream onto the canvas and telemetry panel, and turn widget or
// keyboard activity into input messages.

import { GatewayClient } from "./net.js";
import { ConsoleState } from "./state.js";
import { drawScene } from "./render.js";
import { VirtualJoystick } from "./joystick.js";
import {
  KEY_HELP,
  adminMessage,
  axisLabels,
  controllerMessage,
  gloveMessage,
  hmdMessage,
  keysToAxes,
} from "./inputs.js";

const $ = <T extends HTMLElement = HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

const state = new ConsoleState();
let client: GatewayClient | null = null;

const canvas = $("scene") as unknown as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;

// ---- connection -----------------------------------------------------------

function connect(): void {
  const url = ($("gateway-url") as HTMLInputElement).value.trim();
  client?.close();
  client = new GatewayClient(url, (u) => new WebSocket(u) as any, {
    reconnectDelayMs: 1000,
  });
  client.onStatus = (status) => {
    state.setConnection(status);
    const el = $("conn-status");
    el.textContent = status;
    el.className = `status ${status}`;
  };
  client.onText = (text) => {
    const msg = state.ingest(text);
    if (msg && msg.type === "hello") {
      ($("scenario-name") as HTMLElement).textContent = msg.scenario;
    }
  };
  client.connect();
}

$("connect-btn").addEventListener("click", connect);

// ---- input widgets ---------------------------------------------------------

const gloveSlider = $("glove-slider") as HTMLInputElement;
gloveSlider.addEventListener("input", () => {
  if (!state.hello) return;
  client?.send(gloveMessage(parseFloat(gloveSlider.value), state.hello.calibration));
});

const fingerSlider = $("finger-slider") as HTMLInputElement;
const shiftToggle = $("shift-toggle") as HTMLInputElement;
const joystick = new VirtualJoystick($("joy-base"), $("joy-knob"));

function sendController(): void {
  client?.send(
    controllerMessage({
      joyX: joystick.axisX,
      joyY: joystick.axisY,
      finger: parseFloat(fingerSlider.value),
      shift: shiftToggle.checked,
    }),
  );
}

joystick.onChange = sendController;
fingerSlider.addEventListener("input", sendController);
shiftToggle.addEventListener("change", () => {
  relabelAxes();
  sendController();
});

function relabelAxes(): void {
  const labels = axisLabels(shiftToggle.checked);
  $("label-joy-x").textContent = labels.x;
  $("label-joy-y").textContent = labels.y;
  $("label-finger").textContent = labels.trigger;
}
relabelAxes();

const headRoll = $("head-roll") as HTMLInputElement;
const headPitch = $("head-pitch") as HTMLInputElement;
function sendHead(): void {
  client?.send(hmdMessage(parseFloat(headRoll.value), parseFloat(headPitch.value)));
}
headRoll.addEventListener("input", sendHead);
headPitch.addEventListener("input", sendHead);

$("reset-btn").addEventListener("click", () => client?.send(adminMessage("reset")));
$("intervene-btn").addEventListener("click", () =>
  client?.send(adminMessage("intervention_ack")),
);

// ---- keyboard bindings -----------------------------------------------------

$("key-help").textContent = KEY_HELP;
const pressed = new Set<string>();

function handleKeys(): void {
  const axes = keysToAxes(pressed);
  joystick.set(axes.joyX, axes.joyY);
  fingerSlider.value = String(axes.finger);
  if (shiftToggle.checked !== axes.shift) {
    shiftToggle.checked = axes.shift;
    relabelAxes();
  }
  sendController();
  if (pressed.has("arrowleft") || pressed.has("arrowright")) {
    headRoll.value = String(
      parseFloat(headRoll.value) + (pressed.has("arrowright") ? 5 : -5),
    );
    sendHead();
  }
  if (pressed.has("arrowup") || pressed.has("arrowdown")) {
    headPitch.value = String(
      parseFloat(headPitch.value) + (pressed.has("arrowup") ? 5 : -5),
    );
    sendHead();
  }
}

window.addEventListener("keydown", (e) => {
  if (e.target instanceof HTMLInputElement && e.target.type === "text") return;
  const key = e.key.toLowerCase();
  if (!pressed.has(key)) {
    pressed.add(key);
    handleKeys();
  }
});
window.addEventListener("keyup", (e) => {
  pressed.delete(e.key.toLowerCase());
  handleKeys();
});

// ---- render loop -----------------------------------------------------------

let lastDrawnTick = -1;
let framesDrawn = 0;
let fpsWindowStart = performance.now();

function renderLoop(): void {
  const snap = state.snapshot;
  if (state.hello && snap && snap.tick !== lastDrawnTick) {
    lastDrawnTick = snap.tick;
    drawScene(ctx, state.hello, snap, canvas.width, canvas.height);
    updatePanel();
    framesDrawn += 1;
  }
  const now = performance.now();
  if (now - fpsWindowStart >= 1000) {
    $("fps").textContent = `${framesDrawn} fps`;
    framesDrawn = 0;
    fpsWindowStart = now;
  }
  requestAnimationFrame(renderLoop);
}

function setBar(id: string, value: number): void {
  const el = $(id);
  el.style.width = `${Math.abs(value) * 50}%`;
  el.style.marginLeft = value < 0 ? `${50 - Math.abs(value) * 50}%` : "50%";
}

function updatePanel(): void {
  const snap = state.snapshot!;
  $("tick").textContent = String(snap.tick);
  $("latency").textContent = `${snap.latency_ms.toFixed(0)} ms`;

  ($("gauge-glove") as HTMLElement).style.width = `${snap.glove_position * 100}%`;
  ($("gauge-gripper") as HTMLElement).style.width = `${snap.gripper_position * 100}%`;
  $("glove-value").textContent = snap.glove_position.toFixed(3);
  $("gripper-value").textContent = snap.gripper_position.toFixed(3);

  const grasp = $("grasp-indicator");
  grasp.classList.toggle("on", snap.button);
  grasp.textContent = snap.button ? "GRASP" : "no grasp";
  const vib = $("vibration-indicator");
  vib.classList.toggle("on", snap.vibrating);
  vib.textContent = snap.vibrating ? "VIBRATING" : "quiet";

  setBar("bar-surge", snap.setpoint.surge);
  setBar("bar-sway", snap.setpoint.sway);
  setBar("bar-heave", snap.setpoint.heave);
  setBar("bar-roll", snap.setpoint.roll);
  setBar("bar-pitch", snap.setpoint.pitch);
  setBar("bar-yaw", snap.setpoint.yaw);
  $("camera-tilt").textContent = `${snap.camera_tilt_deg.toFixed(0)} deg`;

  const m = snap.metrics;
  $("metrics").textContent =
    `subtasks ${m.subtasks_completed} | minor ${m.minor} | major ${m.major} | ` +
    `collisions ${m.collisions} | interventions ${m.interventions}` +
    (m.completed ? " | COMPLETED" : "");

  const dropped = client ? client.droppedInputs : 0;
  const queued = client ? client.queuedCount() : 0;
  $("counters").textContent =
    `skipped frames: ${state.parseErrors} bad / ${state.staleDropped} stale` +
    (queued || dropped ? ` | inputs queued ${queued}, dropped ${dropped}` : "");
}

requestAnimationFrame(renderLoop);
