/**
 * Top-down angular map: pan on x, tilt on y (tilt_max at the top). The
 * map draws exactly what the metrics measure, which is the point.
 */

import type { RectDto, SceneDto } from "./api.js";

export interface PixelRect {
  x: number;
  y: number;
  w: number;
  h: number;
}

/** Project an angular rectangle into canvas pixels. */
export function project(rect: RectDto, world: RectDto, width: number, height: number): PixelRect {
  const sx = width / (world.pan_max - world.pan_min);
  const sy = height / (world.tilt_max - world.tilt_min);
  return {
    x: (rect.pan_min - world.pan_min) * sx,
    y: (world.tilt_max - rect.tilt_max) * sy,
    w: (rect.pan_max - rect.pan_min) * sx,
    h: (rect.tilt_max - rect.tilt_min) * sy,
  };
}

const OBJECT_FILL = "rgba(96, 165, 250, 0.25)";
const OBJECT_EDGE = "#60a5fa";
const VIEWPORT_EDGE = "#f59e0b";
const GRID_EDGE = "#333a45";

export function drawMap(
  ctx: CanvasRenderingContext2D,
  scene: SceneDto,
  viewport: RectDto | null,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, width, height);

  // axes every 45 degrees of pan, 30 of tilt
  ctx.strokeStyle = GRID_EDGE;
  ctx.lineWidth = 1;
  const world = scene.world_bounds;
  for (let pan = world.pan_min; pan <= world.pan_max; pan += 45) {
    const { x } = project({ pan_min: pan, pan_max: pan + 0.01, tilt_min: 0, tilt_max: 0.01 }, world, width, height);
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, height);
    ctx.stroke();
  }
  for (let tilt = world.tilt_min; tilt <= world.tilt_max; tilt += 30) {
    const { y } = project({ pan_min: 0, pan_max: 0.01, tilt_min: tilt - 0.01, tilt_max: tilt }, world, width, height);
    ctx.beginPath();
    ctx.moveTo(0, y);
    ctx.lineTo(width, y);
    ctx.stroke();
  }

  ctx.font = "11px system-ui, sans-serif";
  for (const object of scene.objects) {
    const box = project(object.extent, world, width, height);
    ctx.fillStyle = OBJECT_FILL;
    ctx.fillRect(box.x, box.y, box.w, box.h);
    ctx.strokeStyle = OBJECT_EDGE;
    ctx.strokeRect(box.x, box.y, box.w, box.h);
    ctx.fillStyle = "#cbd5e1";
    ctx.fillText(object.id, box.x + 2, box.y + 12);
  }

  if (viewport) {
    const box = project(viewport, world, width, height);
    ctx.strokeStyle = VIEWPORT_EDGE;
    ctx.lineWidth = 2;
    ctx.strokeRect(box.x, box.y, box.w, box.h);
    ctx.lineWidth = 1;
  }
}
