/** Operator console wiring: study list, view toggle, ROI drawing,
 * submission, verdict panel.
 *
 * The console is deliberately thin: every number shown comes from the
 * service response; the only client-side geometry is the drag-to-shape
 * mapping (inverse of the canvas transform).
 */

import { ApiClient, ApiError } from "./api.js";
import {
  ellipseFromDrag,
  IDENTITY,
  polygonFromClicks,
  type Point,
  type ViewTransform,
} from "./geometry.js";
import { clearVerdict, renderGauges, renderVerdict } from "./gauges.js";
import { drawScene } from "./overlay.js";
import { Session, type RoiRole } from "./state.js";
import type { RoiDocument, ViewName } from "./types.js";

export interface AppHandles {
  session: Session;
  submit: () => Promise<void>;
  redraw: () => void;
}

interface Elements {
  studyList: HTMLSelectElement;
  canvas: HTMLCanvasElement;
  banner: HTMLElement;
  gauges: HTMLElement;
  message: HTMLElement;
  submitButton: HTMLButtonElement;
  roleButtons: Record<RoiRole, HTMLButtonElement>;
  shapeButtons: Record<"ellipse" | "polygon", HTMLButtonElement>;
  viewButtons: Record<ViewName, HTMLButtonElement>;
}

function grab(doc: Document): Elements {
  const byId = <T extends HTMLElement>(id: string): T => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`missing #${id}`);
    return el as T;
  };
  return {
    studyList: byId<HTMLSelectElement>("study-list"),
    canvas: byId<HTMLCanvasElement>("slice-canvas"),
    banner: byId("verdict-banner"),
    gauges: byId("gauges"),
    message: byId("message"),
    submitButton: byId<HTMLButtonElement>("submit"),
    roleButtons: {
      lumen: byId<HTMLButtonElement>("mode-lumen"),
      clot: byId<HTMLButtonElement>("mode-clot"),
    },
    shapeButtons: {
      ellipse: byId<HTMLButtonElement>("shape-ellipse"),
      polygon: byId<HTMLButtonElement>("shape-polygon"),
    },
    viewButtons: {
      original: byId<HTMLButtonElement>("view-original"),
      simple: byId<HTMLButtonElement>("view-simple"),
      weighted: byId<HTMLButtonElement>("view-weighted"),
    },
  };
}

export function bootstrap(doc: Document, api: ApiClient): AppHandles {
  const el = grab(doc);
  const session = new Session();
  const transform: ViewTransform = { ...IDENTITY };

  let activeRole: RoiRole = "lumen";
  let activeShape: "ellipse" | "polygon" = "ellipse";
  let dragStart: Point | null = null;
  let polygonDraft: Point[] = [];
  let sliceImage: HTMLImageElement | null = null;

  const canvasPoint = (ev: MouseEvent): Point => {
    const rect = el.canvas.getBoundingClientRect();
    return { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
  };

  const redraw = (): void => {
    drawScene(el.canvas, sliceImage, transform, session.lumen, session.clot,
              session.lastResult, session.highlightClot);
    el.submitButton.disabled = !session.canSubmit();
    el.message.textContent = session.errorMessage;
    if (session.lastResult) {
      renderVerdict(el.banner, session.lastResult.assessment, session.stale);
      renderGauges(el.gauges, session.lastResult.assessment);
    } else {
      clearVerdict(el.banner);
      el.gauges.replaceChildren();
    }
  };

  const loadView = (): void => {
    if (!session.studyId) return;
    const img = doc.createElement("img");
    img.onload = () => {
      sliceImage = img;
      redraw();
    };
    img.src = api.imageUrl(session.studyId, session.activeView);
  };

  const submit = async (): Promise<void> => {
    if (!session.canSubmit() || !session.studyId) return;
    const roi: RoiDocument = {
      lumen: session.lumen!,
      clot: session.clot!,
    };
    const signal = session.beginSubmit();
    try {
      const result = await api.classify(session.studyId, roi, signal);
      session.completeSubmit(result);
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return;
      if (err instanceof ApiError) session.failSubmit(err.code, err.detail);
      else session.failSubmit("network_error", String(err));
    }
    redraw();
  };

  // --- study list -----------------------------------------------------------
  void api.listStudies().then((studies) => {
    el.studyList.replaceChildren(
      ...studies.map((s) => {
        const opt = doc.createElement("option");
        opt.value = s.id;
        opt.textContent = `${s.id} (${s.width}×${s.height})`;
        return opt;
      }),
    );
    if (studies.length) {
      session.selectStudy(studies[0].id);
      loadView();
      redraw();
    }
  });

  el.studyList.addEventListener("change", () => {
    session.selectStudy(el.studyList.value);
    loadView();
    redraw();
  });

  // --- mode + view toggles --------------------------------------------------
  for (const role of ["lumen", "clot"] as const) {
    el.roleButtons[role].addEventListener("click", () => {
      activeRole = role;
      el.roleButtons.lumen.classList.toggle("active", role === "lumen");
      el.roleButtons.clot.classList.toggle("active", role === "clot");
    });
  }
  for (const shape of ["ellipse", "polygon"] as const) {
    el.shapeButtons[shape].addEventListener("click", () => {
      activeShape = shape;
      polygonDraft = [];
      el.shapeButtons.ellipse.classList.toggle("active", shape === "ellipse");
      el.shapeButtons.polygon.classList.toggle("active", shape === "polygon");
    });
  }
  for (const view of ["original", "simple", "weighted"] as const) {
    el.viewButtons[view].addEventListener("click", () => {
      session.setView(view);
      loadView();
      // overlays and verdict persist across view changes
      redraw();
    });
  }

  // --- drawing --------------------------------------------------------------
  el.canvas.addEventListener("mousedown", (ev) => {
    if (activeShape !== "ellipse") return;
    dragStart = canvasPoint(ev as MouseEvent);
  });

  el.canvas.addEventListener("mousemove", (ev) => {
    if (!dragStart) return;
    session.setRoi(activeRole,
                   ellipseFromDrag(dragStart, canvasPoint(ev as MouseEvent),
                                   transform));
    redraw();
  });

  el.canvas.addEventListener("mouseup", (ev) => {
    if (activeShape === "ellipse") {
      if (!dragStart) return;
      session.setRoi(activeRole,
                     ellipseFromDrag(dragStart, canvasPoint(ev as MouseEvent),
                                     transform));
      dragStart = null;
      redraw();
      return;
    }
    polygonDraft.push(canvasPoint(ev as MouseEvent));
    if (polygonDraft.length >= 3) {
      session.setRoi(activeRole, polygonFromClicks(polygonDraft, transform));
    }
    redraw();
  });

  el.canvas.addEventListener("dblclick", () => {
    polygonDraft = [];
  });

  el.submitButton.addEventListener("click", () => {
    void submit();
  });

  redraw();
  return { session, submit, redraw };
}

/** Browser entry point; tests call bootstrap() directly. */
export function start(): void {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "";
  bootstrap(document, new ApiClient(base));
}

if (typeof window !== "undefined" && document.getElementById("slice-canvas")) {
  start();
}
