import { describe, expect, it } from "vitest";

import {
  ellipseFromDrag,
  IDENTITY,
  isDegenerate,
  polygonArea,
  polygonFromClicks,
  serializeRoiDocument,
  toImage,
  toScreen,
} from "../src/geometry.js";
import type { RoiDocument } from "../src/types.js";

import fs from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

const here = path.dirname(fileURLToPath(import.meta.url));

describe("drag-to-ellipse", () => {
  it("maps a zoom-1 drag to midpoint/half-extent", () => {
    const e = ellipseFromDrag({ x: 40, y: 40 }, { x: 80, y: 80 }, IDENTITY);
    expect(e).toEqual({ kind: "ellipse", cx: 60, cy: 60, a: 20, b: 20, rot: 0 });
  });

  it("produces the identical image-space ellipse at zoom 2", () => {
    // the same anatomical gesture is at doubled screen coordinates
    const t = { zoom: 2, panX: 0, panY: 0 };
    const e = ellipseFromDrag({ x: 80, y: 80 }, { x: 160, y: 160 }, t);
    expect(e).toEqual({ kind: "ellipse", cx: 60, cy: 60, a: 20, b: 20, rot: 0 });
  });

  it("respects pan in the inverse transform", () => {
    const t = { zoom: 2, panX: 10, panY: -6 };
    const p = toImage(toScreen({ x: 33, y: 44 }, t), t);
    expect(p.x).toBeCloseTo(33, 12);
    expect(p.y).toBeCloseTo(44, 12);
  });

  it("flags a click without drag as degenerate", () => {
    const e = ellipseFromDrag({ x: 50, y: 50 }, { x: 50, y: 50 }, IDENTITY);
    expect(isDegenerate(e)).toBe(true);
  });
});

describe("polygon drafting", () => {
  it("builds image-space vertices through the transform", () => {
    const t = { zoom: 2, panX: 0, panY: 0 };
    const poly = polygonFromClicks(
      [{ x: 0, y: 0 }, { x: 20, y: 0 }, { x: 20, y: 20 }], t);
    expect(poly.points).toEqual([[0, 0], [10, 0], [10, 10]]);
  });

  it("computes the shoelace area", () => {
    expect(polygonArea([[0, 0], [10, 0], [10, 10], [0, 10]])).toBe(100);
  });

  it("treats collinear drafts as degenerate", () => {
    expect(isDegenerate({
      kind: "polygon",
      points: [[0, 0], [5, 0], [10, 0]],
    })).toBe(true);
  });
});

describe("ROI serialization", () => {
  it("is byte-compatible with the pipeline's ROI files", () => {
    const fixture = fs.readFileSync(
      path.join(here, "fixtures", "roi_schema_python.json"), "utf-8");
    const doc = JSON.parse(fixture) as RoiDocument;
    expect(serializeRoiDocument(doc)).toBe(fixture);
  });
});
