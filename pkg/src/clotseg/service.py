"""Stateless HTTP facade over the classifier for the companion UI.

Endpoints (JSON unless noted):

* ``GET /api/studies`` — catalog listing.
* ``GET /api/studies/{id}/image?view=original|simple|weighted`` — 8-bit
  grayscale PNG of a filtered-set member (default filter params, cached
  per study).
* ``POST /api/studies/{id}/classify`` — body is the shared ROI schema
  plus optional ``params``/``thresholds`` overrides; returns the
  assessment (identical to a CLI report case) plus RLE mask overlays.

The catalog is immutable after startup; the lazy view cache is the only
shared mutable state and is computed at most once per study id.
"""

import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import report as rpt
from .classifier import CriterionThresholds, classify
from .errors import ClotsegError
from .filters import FilterParams, build_filtered_set
from .image_io import load_slice
from .pngout import gray_image_to_png
from .roi import roi_pair_from_json

log = logging.getLogger("clotseg.service")

VIEW_MEMBERS = {
    "original": "original",
    "simple": "simple_enhanced",
    "weighted": "weighted_enhanced",
}


class StudyCatalog:
    """Immutable id -> StudySlice map loaded from a directory at startup."""

    def __init__(self, entries):
        self.entries = dict(entries)
        self._views = {}
        self._lock = threading.Lock()

    @staticmethod
    def from_directory(path):
        root = Path(path)
        entries = {}
        for child in sorted(root.iterdir()):
            if child.suffix.lower() not in (".pgm", ".dcm"):
                continue
            study_id = child.stem
            if study_id in entries:
                raise ValueError(f"duplicate study id {study_id!r} in {root}")
            entries[study_id] = load_slice(child)
        return StudyCatalog(entries)

    def listing(self):
        return [
            {"id": sid, "width": s.image.width, "height": s.image.height}
            for sid, s in sorted(self.entries.items())
        ]

    def filtered_views(self, study_id):
        """FilteredSet under default params, computed once per id."""
        with self._lock:
            if study_id not in self._views:
                self._views[study_id] = build_filtered_set(
                    self.entries[study_id].image, FilterParams())
            return self._views[study_id]


def _make_handler(catalog):
    class Handler(BaseHTTPRequestHandler):
        server_version = "clotseg"

        def log_message(self, fmt, *args):
            log.debug("%s " + fmt, self.address_string(), *args)

        def _cors(self):
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods",
                             "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")

        def _send(self, status, body, content_type="application/json"):
            self.send_response(status)
            self._cors()
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _send_json(self, status, obj):
            self._send(status, rpt.dumps(obj).encode("utf-8"))

        def _error(self, status, code, detail=""):
            self._send_json(status, {"error": code, "detail": detail})

        def do_OPTIONS(self):
            self.send_response(204)
            self._cors()
            self.end_headers()

        def do_GET(self):
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            if parts == ["api", "studies"]:
                self._send_json(200, catalog.listing())
                return
            if len(parts) == 4 and parts[:2] == ["api", "studies"] \
                    and parts[3] == "image":
                self._image(parts[2], parse_qs(url.query))
                return
            self._error(404, "not_found", self.path)

        def _image(self, study_id, query):
            if study_id not in catalog.entries:
                self._error(404, "unknown_study", study_id)
                return
            view = query.get("view", ["original"])[0]
            if view not in VIEW_MEMBERS:
                self._error(400, "unknown_view", view)
                return
            fset = catalog.filtered_views(study_id)
            png = gray_image_to_png(getattr(fset, VIEW_MEMBERS[view]))
            self._send(200, png, content_type="image/png")

        def do_POST(self):
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            if len(parts) != 4 or parts[:2] != ["api", "studies"] \
                    or parts[3] != "classify":
                self._error(404, "not_found", self.path)
                return
            study_id = parts[2]
            if study_id not in catalog.entries:
                self._error(404, "unknown_study", study_id)
                return
            length = int(self.headers.get("Content-Length", 0))
            try:
                doc = json.loads(self.rfile.read(length))
            except json.JSONDecodeError as exc:
                self._error(400, "bad_request", f"malformed JSON: {exc}")
                return
            try:
                lumen, clot = roi_pair_from_json(doc)
                params = FilterParams.from_json(doc["params"]) \
                    if "params" in doc else FilterParams()
                thresholds = CriterionThresholds.from_json(doc["thresholds"]) \
                    if "thresholds" in doc else CriterionThresholds()
            except (ClotsegError, ValueError, TypeError) as exc:
                self._error(400, "bad_request", str(exc))
                return
            try:
                assessment = classify(catalog.entries[study_id], lumen, clot,
                                      params, thresholds)
            except ClotsegError as exc:
                self._error(422, exc.code, str(exc))
                return
            body = {
                "assessment": rpt.assessment_to_case(assessment),
                "masks": {
                    "lumen": rpt.rle_encode(assessment.masks.lumen),
                    "clot": rpt.rle_encode(assessment.masks.clot),
                    "lumen_only": rpt.rle_encode(assessment.masks.lumen_only),
                    "clot_binary": rpt.rle_encode(assessment.clot_binary),
                },
            }
            self._send_json(200, body)

    return Handler


def make_server(studies_dir, host="127.0.0.1", port=0):
    catalog = StudyCatalog.from_directory(studies_dir)
    return ThreadingHTTPServer((host, port), _make_handler(catalog))


def serve(studies_dir, host, port):
    server = make_server(studies_dir, host, port)
    print(f"clotseg service on http://{host}:{server.server_address[1]} "
          f"(studies: {studies_dir})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
