"""Report assembly: assessment serialization, mask run-length encoding,
and the confusion statistics for labeled batches.

All JSON is emitted with sorted keys and a trailing newline so reports
are byte-stable and diffable.
"""

import json

import numpy as np

from .roi import BinaryMask

SCHEMA_VERSION = 1

# Fixed analysis conventions, recorded in every case so results are
# reproducible from the report alone.
CONVENTIONS = {
    "foreground": "masked pixels <= threshold (dark)",
    "connectivity": 8,
    "structuring_element": "discrete euclidean disk, radius in pixels",
    "intensity_band": "inclusive",
    "occupation_comparison": "strict greater",
    "eccentricity_comparison": "strict less",
    "normalization": "per-slice linear scaling to [0, 1]",
}


def rle_encode(mask):
    """Row-major run-length encoding: [[start, length], ...] over the
    flattened bit array."""
    flat = np.asarray(mask.bits, dtype=bool).ravel()
    padded = np.empty(flat.size + 2, dtype=bool)
    padded[0] = padded[-1] = False
    padded[1:-1] = flat
    edges = np.flatnonzero(padded[1:] != padded[:-1])
    starts = edges[::2]
    ends = edges[1::2]
    return {
        "width": mask.width,
        "height": mask.height,
        "runs": [[int(s), int(e - s)] for s, e in zip(starts, ends)],
    }


def rle_decode(obj):
    bits = np.zeros(obj["height"] * obj["width"], dtype=bool)
    for start, length in obj["runs"]:
        bits[start:start + length] = True
    return BinaryMask(bits.reshape(obj["height"], obj["width"]))


def assessment_to_case(assessment, timings=None):
    """The canonical per-case report dict (shared by CLI and service)."""
    case = {
        "source_id": assessment.source_id,
        "verdict": assessment.verdict,
        "parameters": {
            "intensity_ratio": assessment.intensity.to_json(),
            "occupation": assessment.occupation.to_json(),
            "eccentricity": assessment.eccentricity.to_json(),
        },
        "roi": assessment.roi,
        "filter_params": assessment.params.to_json(),
        "thresholds": assessment.thresholds.to_json(),
        "normalization": assessment.normalization,
        "conventions": CONVENTIONS,
        "intermediate": {"clot_binary": rle_encode(assessment.clot_binary)},
    }
    if timings is not None:
        case["timings"] = timings
    return case


def confusion_statistics(tp, fn, fp, tn):
    """Derived accuracy measures; ratios are exact fractions of counts."""
    total = tp + fn + fp + tn
    pos = tp + fn
    neg = tn + fp
    pred_pos = tp + fp
    pred_neg = tn + fn

    def ratio(num, den):
        return num / den if den else None

    return {
        "tp": tp,
        "fn": fn,
        "fp": fp,
        "tn": tn,
        "total": total,
        "accuracy": ratio(tp + tn, total),
        "sensitivity": ratio(tp, pos),
        "specificity": ratio(tn, neg),
        "ppv": ratio(tp, pred_pos),
        "npv": ratio(tn, pred_neg),
    }


def single_report(case):
    return {"schema_version": SCHEMA_VERSION, "case": case}


def batch_report(cases, case_errors, labels_present):
    report = {
        "schema_version": SCHEMA_VERSION,
        "cases": cases,
        "case_errors": case_errors,
    }
    if labels_present:
        tp = fn = fp = tn = 0
        for case in cases:
            expected = case.get("expected")
            if expected is None:
                continue
            got_positive = case["verdict"] == "POSITIVE"
            if expected == "POSITIVE":
                tp, fn = (tp + 1, fn) if got_positive else (tp, fn + 1)
            else:
                fp, tn = (fp + 1, tn) if got_positive else (fp, tn + 1)
        report["statistics"] = confusion_statistics(tp, fn, fp, tn)
    return report


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
