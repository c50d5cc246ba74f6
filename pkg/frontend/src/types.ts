/** Wire types mirroring the service JSON exactly. */

export interface EllipseShape {
  kind: "ellipse";
  cx: number;
  cy: number;
  a: number;
  b: number;
  rot: number;
}

export interface PolygonShape {
  kind: "polygon";
  points: [number, number][];
}

export type RoiShape = EllipseShape | PolygonShape;

export interface RoiDocument {
  lumen: RoiShape;
  clot: RoiShape;
}

export interface ParameterResult {
  value: number | null;
  threshold_low: number | null;
  threshold_high: number | null;
  indicative: boolean;
  detail: string;
}

export interface AssessmentCase {
  source_id: string;
  verdict: "POSITIVE" | "NEGATIVE";
  parameters: {
    intensity_ratio: ParameterResult;
    occupation: ParameterResult;
    eccentricity: ParameterResult;
  };
  [extra: string]: unknown;
}

export interface Rle {
  width: number;
  height: number;
  runs: [number, number][];
}

export interface ClassifyResponse {
  assessment: AssessmentCase;
  masks: {
    lumen: Rle;
    clot: Rle;
    lumen_only: Rle;
    clot_binary: Rle;
  };
}

export interface StudyEntry {
  id: string;
  width: number;
  height: number;
}

export type ViewName = "original" | "simple" | "weighted";
