"""Batch entry point.

Verbs: classify, batch, phantom, render, serve.  Structured output is
JSON; images are DICOM-subset/PGM in, PGM/PNG out.  Exit codes: 0 ok,
2 validation failure, 64 usage, 74 I/O.
"""

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import report as rpt
from .classifier import CriterionThresholds, classify
from .errors import ClotsegError
from .filters import FilterParams, build_filtered_set
from .image_io import load_slice, write_pgm
from .phantom import KINDS, generate_corpus
from .roi import make_masks, roi_pair_from_json

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_USAGE = 64
EXIT_IO = 74

log = logging.getLogger("clotseg")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(obj, out_path):
    text = rpt.dumps(obj)
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _fail(code, exit_code, detail, out_path=None):
    _emit({"error": code, "detail": detail}, out_path)
    return exit_code


def _parse_json_flag(text, kind):
    if not text:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ClotsegError(f"bad {kind} JSON: {exc}") from None


def _load_params(args):
    obj = _parse_json_flag(getattr(args, "params", None), "--params")
    params = FilterParams.from_json(obj) if obj else FilterParams()
    obj = _parse_json_flag(getattr(args, "thresholds", None), "--thresholds")
    thresholds = CriterionThresholds.from_json(obj) if obj \
        else CriterionThresholds()
    return params, thresholds


def _read_roi_file(path):
    with open(path) as fh:
        doc = json.load(fh)
    pair = roi_pair_from_json(doc)
    expected = doc.get("expected") if isinstance(doc, dict) else None
    return pair, expected


def _classify_case(image_path, roi_path, params, thresholds, with_timings):
    t0 = time.perf_counter()
    study = load_slice(image_path)
    (lumen, clot), expected = _read_roi_file(roi_path)
    assessment = classify(study, lumen, clot, params, thresholds)
    timings = {"seconds": round(time.perf_counter() - t0, 6)} \
        if with_timings else None
    case = rpt.assessment_to_case(assessment, timings=timings)
    return case, expected


def cmd_classify(args):
    params, thresholds = _load_params(args)
    case, _ = _classify_case(args.image, args.roi, params, thresholds,
                             not args.no_timings)
    _emit(rpt.single_report(case), args.out)
    return EXIT_OK


def _batch_worker(task):
    index, image_path, roi_path, expected, params_json, thresholds_json, \
        with_timings = task
    params = FilterParams.from_json(params_json)
    thresholds = CriterionThresholds.from_json(thresholds_json)
    try:
        case, sidecar_expected = _classify_case(
            image_path, roi_path, params, thresholds, with_timings)
        expected = expected or sidecar_expected
        if expected:
            case["expected"] = expected
        return index, case, None
    except ClotsegError as exc:
        return index, None, {"image": str(image_path),
                             "error": exc.code, "detail": str(exc)}
    except OSError as exc:
        return index, None, {"image": str(image_path),
                             "error": "io_error", "detail": str(exc)}


def cmd_batch(args):
    params, thresholds = _load_params(args)
    manifest_path = Path(args.manifest)
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    if isinstance(manifest, dict):
        manifest = manifest.get("cases", [])
    base = manifest_path.parent
    tasks = []
    for i, entry in enumerate(manifest):
        tasks.append((i, str(base / entry["image"]), str(base / entry["roi"]),
                      entry.get("expected"), params.to_json(),
                      thresholds.to_json(), not args.no_timings))

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_worker, tasks))
    else:
        results = [_batch_worker(t) for t in tasks]
    results.sort(key=lambda r: r[0])

    cases = [case for _, case, err in results if case is not None]
    errors = [err for _, case, err in results if err is not None]
    labels_present = any("expected" in c for c in cases)
    _emit(rpt.batch_report(cases, errors, labels_present), args.out)
    return EXIT_OK if not errors else EXIT_VALIDATION


def cmd_phantom(args):
    if args.kind != "all" and args.kind not in KINDS:
        print(f"clotseg phantom: unknown kind {args.kind!r} "
              f"(choose from {', '.join(KINDS)}, all)", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cases = generate_corpus(args.count, args.seed, noise_sigma=args.noise)
    if args.kind != "all":
        cases = [c for c in cases if c.spec.kind == args.kind]
    manifest = []
    per_kind_index = {}
    for case in cases:
        kind = case.spec.kind
        i = per_kind_index.get(kind, 0)
        per_kind_index[kind] = i + 1
        stem = f"case_{kind}_{i:03d}"
        (out_dir / f"{stem}.pgm").write_bytes(write_pgm(case.study.image))
        (out_dir / f"{stem}.json").write_text(rpt.dumps(case.sidecar))
        manifest.append({"image": f"{stem}.pgm", "roi": f"{stem}.json",
                         "expected": case.expected})
    if args.manifest:
        (out_dir / "manifest.json").write_text(rpt.dumps(manifest))
    log.info("wrote %d phantom case(s) to %s", len(cases), out_dir)
    return EXIT_OK


def cmd_render(args):
    params, thresholds = _load_params(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    study = load_slice(args.image)
    (lumen, clot), _ = _read_roi_file(args.roi)
    assessment = classify(study, lumen, clot, params, thresholds)
    fset = build_filtered_set(study.image, params)
    stem = Path(args.image).stem

    def write8(name, pixels):
        from .image_io import GrayImage
        img = GrayImage(np.asarray(pixels, dtype=np.float64))
        (out_dir / f"{stem}__{name}.pgm").write_bytes(
            write_pgm(img, maxval=255))

    for name in ("original", "sharpened", "enhanced", "simple_enhanced",
                 "weighted_enhanced"):
        write8(name, getattr(fset, name).pixels)
    masks = assessment.masks
    write8("mask_lumen", masks.lumen.bits.astype(np.float64))
    write8("mask_clot", masks.clot.bits.astype(np.float64))
    write8("mask_lumen_only", masks.lumen_only.bits.astype(np.float64))
    write8("clot_binary_closed",
           assessment.clot_binary.bits.astype(np.float64))
    log.info("wrote 9 renders to %s", out_dir)
    return EXIT_OK


def cmd_serve(args):
    from .service import serve
    host, _, port = args.bind.rpartition(":")
    serve(args.studies, host or "127.0.0.1", int(port))
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="clotseg")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--params", help="FilterParams overrides as JSON")
        p.add_argument("--thresholds",
                       help="CriterionThresholds overrides as JSON")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--no-timings", action="store_true",
                       help="omit timings for byte-stable output")

    p = sub.add_parser("classify", help="classify one slice + ROI pair")
    p.add_argument("image")
    p.add_argument("roi")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("batch", help="classify a manifest of cases")
    p.add_argument("manifest")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("phantom", help="generate synthetic test cases")
    p.add_argument("kind", help=f"one of {', '.join(KINDS)}, all")
    p.add_argument("--count", type=int, default=1,
                   help="cases per kind")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.02)
    p.add_argument("--out", required=True)
    p.add_argument("--manifest", action="store_true",
                   help="also write manifest.json for `clotseg batch`")
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("render", help="write the filter/mask debug images")
    p.add_argument("image")
    p.add_argument("roi")
    p.add_argument("--params")
    p.add_argument("--thresholds")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--studies", required=True)
    p.add_argument("--bind", default="127.0.0.1:8787")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None):
    logging.basicConfig(
        level=os.environ.get("CLOTSEG_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except ClotsegError as exc:
        return _fail(exc.code, EXIT_VALIDATION, str(exc),
                     getattr(args, "out", None))
    except (json.JSONDecodeError, ValueError, KeyError) as exc:
        return _fail("invalid_input", EXIT_VALIDATION, str(exc),
                     getattr(args, "out", None))
    except OSError as exc:
        return _fail("io_error", EXIT_IO, str(exc), None)


if __name__ == "__main__":
    sys.exit(main())
