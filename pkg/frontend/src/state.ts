/** Session state: the operator's drafts and the last verdict.
 *
 * Invariants the UI relies on:
 * - submit is enabled only when both ROIs exist and are non-degenerate;
 * - any ROI edit after a verdict marks that verdict stale until the next
 *   successful submission;
 * - at most one classification request is in flight; a newer submission
 *   supersedes a pending one.
 */

import { isDegenerate } from "./geometry.js";
import type { ClassifyResponse, RoiShape, ViewName } from "./types.js";

export type RoiRole = "lumen" | "clot";

export class Session {
  studyId: string | null = null;
  activeView: ViewName = "original";
  lumen: RoiShape | null = null;
  clot: RoiShape | null = null;
  lastResult: ClassifyResponse | null = null;
  stale = false;
  highlightClot = false;
  errorMessage = "";
  private controller: AbortController | null = null;

  selectStudy(id: string): void {
    this.studyId = id;
    this.lumen = null;
    this.clot = null;
    this.lastResult = null;
    this.stale = false;
    this.highlightClot = false;
    this.errorMessage = "";
  }

  setView(view: ViewName): void {
    // presentation only: verdict and overlays are untouched
    this.activeView = view;
  }

  setRoi(role: RoiRole, shape: RoiShape | null): void {
    this[role] = shape;
    if (this.lastResult) this.stale = true;
    this.highlightClot = false;
    this.errorMessage = "";
  }

  canSubmit(): boolean {
    return this.studyId !== null &&
      !isDegenerate(this.lumen) && !isDegenerate(this.clot);
  }

  /** Returns the signal for the new request, aborting any pending one. */
  beginSubmit(): AbortSignal {
    this.controller?.abort();
    this.controller = new AbortController();
    return this.controller.signal;
  }

  completeSubmit(result: ClassifyResponse): void {
    this.controller = null;
    this.lastResult = result;
    this.stale = false;
    this.highlightClot = false;
    this.errorMessage = "";
  }

  failSubmit(code: string, detail: string): void {
    // ROIs and any previous verdict are preserved
    this.controller = null;
    this.errorMessage = `${code}: ${detail}`;
    if (code === "clot_not_contained") this.highlightClot = true;
  }
}
