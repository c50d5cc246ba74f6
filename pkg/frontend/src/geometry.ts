/** ROI construction in image pixel coordinates.
 *
 * All pointer input arrives in screen (canvas) coordinates and is mapped
 * through the inverse of the current zoom/pan transform, so the same
 * anatomical gesture produces the same image-space shape at any zoom.
 */

import type { EllipseShape, PolygonShape, RoiDocument, RoiShape } from "./types.js";

export interface ViewTransform {
  zoom: number;
  panX: number;
  panY: number;
}

export interface Point {
  x: number;
  y: number;
}

export const IDENTITY: ViewTransform = { zoom: 1, panX: 0, panY: 0 };

export function toImage(p: Point, t: ViewTransform): Point {
  return { x: (p.x - t.panX) / t.zoom, y: (p.y - t.panY) / t.zoom };
}

export function toScreen(p: Point, t: ViewTransform): Point {
  return { x: p.x * t.zoom + t.panX, y: p.y * t.zoom + t.panY };
}

/** Drag gesture -> axis-aligned ellipse: center at the drag midpoint,
 * semi-axes half the drag extents. */
export function ellipseFromDrag(
  start: Point,
  end: Point,
  t: ViewTransform,
): EllipseShape {
  const a = toImage(start, t);
  const b = toImage(end, t);
  return {
    kind: "ellipse",
    cx: (a.x + b.x) / 2,
    cy: (a.y + b.y) / 2,
    a: Math.abs(b.x - a.x) / 2,
    b: Math.abs(b.y - a.y) / 2,
    rot: 0,
  };
}

export function polygonFromClicks(
  screenPoints: Point[],
  t: ViewTransform,
): PolygonShape {
  return {
    kind: "polygon",
    points: screenPoints.map((p) => {
      const q = toImage(p, t);
      return [q.x, q.y] as [number, number];
    }),
  };
}

export function polygonArea(points: [number, number][]): number {
  let acc = 0;
  for (let i = 0; i < points.length; i++) {
    const [x0, y0] = points[i];
    const [x1, y1] = points[(i + 1) % points.length];
    acc += x0 * y1 - x1 * y0;
  }
  return Math.abs(acc) / 2;
}

/** Zero-area shapes cannot be submitted (a bare click, a line). */
export function isDegenerate(shape: RoiShape | null): boolean {
  if (!shape) return true;
  if (shape.kind === "ellipse") return shape.a < 0.5 || shape.b < 0.5;
  return shape.points.length < 3 || polygonArea(shape.points) < 0.5;
}

/** JSON with sorted keys, 2-space indent and a trailing newline —
 * byte-compatible with the reports the pipeline CLI writes. */
export function stableStringify(value: unknown): string {
  const sort = (v: unknown): unknown => {
    if (Array.isArray(v)) return v.map(sort);
    if (v !== null && typeof v === "object") {
      const out: Record<string, unknown> = {};
      for (const key of Object.keys(v as Record<string, unknown>).sort()) {
        out[key] = sort((v as Record<string, unknown>)[key]);
      }
      return out;
    }
    return v;
  };
  return JSON.stringify(sort(value), null, 2) + "\n";
}

export function serializeRoiDocument(doc: RoiDocument): string {
  return stableStringify(doc);
}
