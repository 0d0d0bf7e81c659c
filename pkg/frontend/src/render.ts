// 2-D dual projection of the tank: plan view (x/y) above, side elevation
// (x/z) below. Geometry comes straight from snapshots; nothing here is
// simulated locally.

import { Hello, Snapshot } from "./protocol.js";

export interface Viewport {
  x0: number;
  y0: number;
  w: number;
  h: number;
}

// World x/y (metres) to canvas pixels inside a viewport, preserving aspect.
export function planProjector(hello: Hello, vp: Viewport) {
  const scale = Math.min(vp.w / hello.tank.length_m, vp.h / hello.tank.width_m);
  const ox = vp.x0 + (vp.w - hello.tank.length_m * scale) / 2;
  const oy = vp.y0 + (vp.h - hello.tank.width_m * scale) / 2;
  return {
    scale,
    point(xm: number, ym: number): [number, number] {
      return [ox + xm * scale, oy + (hello.tank.width_m - ym) * scale];
    },
    frame(): [number, number, number, number] {
      return [ox, oy, hello.tank.length_m * scale, hello.tank.width_m * scale];
    },
  };
}

// World x/z to canvas pixels; z runs up the screen (floor at the bottom).
export function sideProjector(hello: Hello, vp: Viewport) {
  const scale = Math.min(vp.w / hello.tank.length_m, vp.h / hello.tank.depth_m);
  const ox = vp.x0 + (vp.w - hello.tank.length_m * scale) / 2;
  const oy = vp.y0 + (vp.h - hello.tank.depth_m * scale) / 2;
  return {
    scale,
    point(xm: number, zm: number): [number, number] {
      return [ox + xm * scale, oy + (hello.tank.depth_m - zm) * scale];
    },
    frame(): [number, number, number, number] {
      return [ox, oy, hello.tank.length_m * scale, hello.tank.depth_m * scale];
    },
  };
}

const DISC_COLORS = ["#4fc3f7", "#ffb74d", "#e57373", "#ba68c8", "#81c784"];

export function discColor(index: number): string {
  return DISC_COLORS[index % DISC_COLORS.length];
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  hello: Hello,
  snap: Snapshot,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  const gap = 12;
  const planVp = { x0: 8, y0: 8, w: width - 16, h: height * 0.55 - gap };
  const sideVp = { x0: 8, y0: height * 0.55 + gap / 2, w: width - 16, h: height * 0.45 - 8 };
  const discIndex = new Map(
    [...snap.discs].sort((a, b) => a.diameter_m - b.diameter_m).map((d, i) => [d.id, i]),
  );

  // --- plan view -----------------------------------------------------------
  const plan = planProjector(hello, planVp);
  ctx.strokeStyle = "#5c6b73";
  ctx.lineWidth = 2;
  ctx.strokeRect(...plan.frame());
  label(ctx, "top view", planVp.x0 + 6, planVp.y0 + 14);

  for (const [px, py] of hello.poles) {
    dot(ctx, ...plan.point(px, py), 3, "#90a4ae");
  }
  for (const d of snap.discs) {
    const [cx, cy] = plan.point(d.x, d.y);
    circle(ctx, cx, cy, (d.diameter_m / 2) * plan.scale, discColor(discIndex.get(d.id) ?? 0));
  }
  // vehicle: hull circle plus a heading tick
  {
    const [vx, vy] = plan.point(snap.vehicle.x, snap.vehicle.y);
    circle(ctx, vx, vy, 0.2 * plan.scale, "rgba(236, 239, 241, 0.25)", "#eceff1");
    const yaw = (snap.vehicle.yaw_deg * Math.PI) / 180;
    ctx.strokeStyle = "#eceff1";
    ctx.beginPath();
    ctx.moveTo(vx, vy);
    ctx.lineTo(vx + Math.cos(yaw) * 0.3 * plan.scale, vy - Math.sin(yaw) * 0.3 * plan.scale);
    ctx.stroke();
    const [jx, jy] = plan.point(snap.jaw.x, snap.jaw.y);
    square(ctx, jx, jy, 5, snap.button ? "#ffee58" : "#b0bec5");
  }

  // --- side elevation -------------------------------------------------------
  const side = sideProjector(hello, sideVp);
  ctx.strokeStyle = "#5c6b73";
  ctx.strokeRect(...side.frame());
  label(ctx, "side view", sideVp.x0 + 6, sideVp.y0 + 14);

  for (const [px] of hello.poles) {
    const [bx, by] = side.point(px, 0);
    const [tx, ty] = side.point(px, hello.pole_height_m);
    ctx.strokeStyle = "#90a4ae";
    ctx.lineWidth = 3;
    ctx.beginPath();
    ctx.moveTo(bx, by);
    ctx.lineTo(tx, ty);
    ctx.stroke();
    ctx.lineWidth = 1;
  }
  for (const d of snap.discs) {
    const [cx, cy] = side.point(d.x, d.z + 0.0175);
    const w = d.diameter_m * side.scale;
    const h = Math.max(0.035 * side.scale, 3);
    ctx.fillStyle = discColor(discIndex.get(d.id) ?? 0);
    ctx.fillRect(cx - w / 2, cy - h / 2, w, h);
  }
  {
    const [vx, vz] = side.point(snap.vehicle.x, snap.vehicle.z);
    circle(ctx, vx, vz, 0.2 * side.scale, "rgba(236, 239, 241, 0.25)", "#eceff1");
    const [jx, jz] = side.point(snap.jaw.x, snap.jaw.z);
    square(ctx, jx, jz, 5, snap.button ? "#ffee58" : "#b0bec5");
    ctx.strokeStyle = "rgba(176, 190, 197, 0.6)";
    ctx.beginPath();
    ctx.moveTo(vx, vz);
    ctx.lineTo(jx, jz);
    ctx.stroke();
  }
}

function circle(
  ctx: CanvasRenderingContext2D,
  x: number,
  y: number,
  r: number,
  fill: string,
  stroke?: string,
): void {
  ctx.beginPath();
  ctx.arc(x, y, Math.max(r, 2), 0, Math.PI * 2);
  ctx.fillStyle = fill;
  ctx.fill();
  if (stroke) {
    ctx.strokeStyle = stroke;
    ctx.stroke();
  }
}

function dot(ctx: CanvasRenderingContext2D, x: number, y: number, r: number, color: string): void {
  circle(ctx, x, y, r, color);
}

function square(ctx: CanvasRenderingContext2D, x: number, y: number, half: number, color: string): void {
  ctx.fillStyle = color;
  ctx.fillRect(x - half, y - half, half * 2, half * 2);
}

function label(ctx: CanvasRenderingContext2D, text: string, x: number, y: number): void {
  ctx.fillStyle = "#78909c";
  ctx.font = "11px system-ui, sans-serif";
  ctx.fillText(text, x, y);
}
