/** Thin client for the three service endpoints. */

import type {
  ClassifyResponse,
  RoiDocument,
  StudyEntry,
  ViewName,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  async listStudies(): Promise<StudyEntry[]> {
    const resp = await fetch(`${this.baseUrl}/api/studies`);
    if (!resp.ok) throw await this.asError(resp);
    return (await resp.json()) as StudyEntry[];
  }

  imageUrl(studyId: string, view: ViewName): string {
    return `${this.baseUrl}/api/studies/${encodeURIComponent(studyId)}` +
      `/image?view=${view}`;
  }

  async classify(
    studyId: string,
    roi: RoiDocument,
    signal?: AbortSignal,
  ): Promise<ClassifyResponse> {
    const resp = await fetch(
      `${this.baseUrl}/api/studies/${encodeURIComponent(studyId)}/classify`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(roi),
        signal,
      },
    );
    if (!resp.ok) throw await this.asError(resp);
    return (await resp.json()) as ClassifyResponse;
  }

  private async asError(resp: Response): Promise<ApiError> {
    let code = "http_error";
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { error?: string; detail?: string };
      code = body.error ?? code;
      detail = body.detail ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    return new ApiError(resp.status, code, detail);
  }
}
