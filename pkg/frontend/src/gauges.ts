/** Verdict banner and the three parameter gauges.
 *
 * Values shown are exactly the service's numbers (exposed unrounded in
 * data-value); nothing is recomputed client-side.
 */

import type { AssessmentCase, ParameterResult } from "./types.js";

const GAUGE_ORDER = ["intensity_ratio", "occupation", "eccentricity"] as const;

const GAUGE_LABELS: Record<(typeof GAUGE_ORDER)[number], string> = {
  intensity_ratio: "intensity ratio",
  occupation: "occupation",
  eccentricity: "eccentricity",
};

function bandText(p: ParameterResult): string {
  if (p.threshold_low !== null && p.threshold_high !== null) {
    return `band ${p.threshold_low}–${p.threshold_high}`;
  }
  if (p.threshold_low !== null) return `> ${p.threshold_low}`;
  return `< ${p.threshold_high}`;
}

export function renderVerdict(banner: HTMLElement, assessment: AssessmentCase,
                              stale: boolean): void {
  banner.textContent = assessment.verdict;
  banner.className = `banner ${assessment.verdict.toLowerCase()}` +
    (stale ? " stale" : "");
  banner.title = stale
    ? "ROIs edited since this verdict; resubmit to refresh"
    : "";
}

export function clearVerdict(banner: HTMLElement): void {
  banner.textContent = "—";
  banner.className = "banner empty";
  banner.title = "";
}

export function renderGauges(container: HTMLElement,
                             assessment: AssessmentCase): void {
  container.replaceChildren();
  for (const name of GAUGE_ORDER) {
    const p = assessment.parameters[name];
    const row = container.ownerDocument.createElement("div");
    row.className = `gauge ${p.indicative ? "indicative" : "quiet"}`;
    row.dataset.parameter = name;
    row.dataset.value = p.value === null ? "" : String(p.value);

    const label = container.ownerDocument.createElement("span");
    label.className = "gauge-label";
    label.textContent = GAUGE_LABELS[name];

    const value = container.ownerDocument.createElement("span");
    value.className = "gauge-value";
    value.textContent = p.value === null
      ? (p.detail || "undefined")
      : p.value.toFixed(3);

    const band = container.ownerDocument.createElement("span");
    band.className = "gauge-band";
    band.textContent = `${bandText(p)} ${p.indicative ? "✓" : "✗"}`;

    row.append(label, value, band);
    container.append(row);
  }
}
