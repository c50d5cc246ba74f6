/** Canvas drawing: slice image, ROI shapes with handles, mask overlays. */

import { toScreen, type ViewTransform } from "./geometry.js";
import { rleToRgba } from "./rle.js";
import type { ClassifyResponse, RoiShape } from "./types.js";

const MASK_COLORS: Record<string, [number, number, number, number]> = {
  lumen: [64, 128, 255, 48],
  clot: [255, 200, 0, 56],
  clot_binary: [255, 64, 64, 112],
};

export function drawScene(
  canvas: HTMLCanvasElement,
  image: CanvasImageSource | null,
  t: ViewTransform,
  lumen: RoiShape | null,
  clot: RoiShape | null,
  result: ClassifyResponse | null,
  highlightClot: boolean,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.save();
  ctx.setTransform(t.zoom, 0, 0, t.zoom, t.panX, t.panY);
  if (image) ctx.drawImage(image, 0, 0);
  ctx.restore();

  if (result) drawMasks(ctx, t, result);
  if (lumen) strokeShape(ctx, t, lumen, "#4f8fff", false);
  if (clot) strokeShape(ctx, t, clot, "#ffc800", highlightClot);
}

function drawMasks(
  ctx: CanvasRenderingContext2D,
  t: ViewTransform,
  result: ClassifyResponse,
): void {
  for (const name of ["lumen", "clot", "clot_binary"] as const) {
    const rle = result.masks[name];
    const rgba = rleToRgba(rle, MASK_COLORS[name]);
    const doc = ctx.canvas.ownerDocument;
    const scratch = doc.createElement("canvas");
    scratch.width = rle.width;
    scratch.height = rle.height;
    const sctx = scratch.getContext("2d");
    if (!sctx) return;
    sctx.putImageData(new ImageData(rgba, rle.width, rle.height), 0, 0);
    ctx.save();
    ctx.setTransform(t.zoom, 0, 0, t.zoom, t.panX, t.panY);
    ctx.drawImage(scratch, 0, 0);
    ctx.restore();
  }
}

function strokeShape(
  ctx: CanvasRenderingContext2D,
  t: ViewTransform,
  shape: RoiShape,
  color: string,
  highlight: boolean,
): void {
  ctx.save();
  ctx.strokeStyle = highlight ? "#ff3030" : color;
  ctx.lineWidth = highlight ? 3 : 1.5;
  ctx.beginPath();
  if (shape.kind === "ellipse") {
    const c = toScreen({ x: shape.cx, y: shape.cy }, t);
    ctx.ellipse(c.x, c.y, shape.a * t.zoom, shape.b * t.zoom, shape.rot,
                0, 2 * Math.PI);
  } else {
    shape.points.forEach(([x, y], i) => {
      const p = toScreen({ x, y }, t);
      if (i === 0) ctx.moveTo(p.x, p.y);
      else ctx.lineTo(p.x, p.y);
    });
    ctx.closePath();
  }
  ctx.stroke();
  if (shape.kind === "ellipse") drawHandles(ctx, t, shape);
  ctx.restore();
}

/** Center, both axis endpoints, and a rotation knob above the center. */
function drawHandles(
  ctx: CanvasRenderingContext2D,
  t: ViewTransform,
  shape: { cx: number; cy: number; a: number; b: number; rot: number },
): void {
  const cos = Math.cos(shape.rot);
  const sin = Math.sin(shape.rot);
  const points = [
    { x: shape.cx, y: shape.cy },
    { x: shape.cx + shape.a * cos, y: shape.cy + shape.a * sin },
    { x: shape.cx - shape.b * sin, y: shape.cy + shape.b * cos },
    { x: shape.cx + (shape.b + 8) * sin, y: shape.cy - (shape.b + 8) * cos },
  ];
  for (const p of points) {
    const s = toScreen(p, t);
    ctx.fillStyle = "#ffffff";
    ctx.fillRect(s.x - 2.5, s.y - 2.5, 5, 5);
  }
}
