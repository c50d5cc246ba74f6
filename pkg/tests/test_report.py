import json

import numpy as np
import pytest

from clotseg.report import (
    batch_report,
    confusion_statistics,
    dumps,
    rle_decode,
    rle_encode,
)
from clotseg.roi import BinaryMask


class TestRle:
    def test_round_trip(self, rng):
        for density in (0.0, 0.2, 0.7, 1.0):
            bits = rng.random((17, 23)) < density
            mask = BinaryMask(bits)
            back = rle_decode(rle_encode(mask))
            assert np.array_equal(back.bits, bits)

    def test_runs_are_row_major(self):
        bits = np.zeros((2, 4), dtype=bool)
        bits[0, 1:3] = True
        bits[1, 0] = True
        enc = rle_encode(BinaryMask(bits))
        assert enc["runs"] == [[1, 2], [4, 1]]


class TestStatistics:
    def test_paper_confusion_counts(self):
        stats = confusion_statistics(tp=5, fn=1, fp=2, tn=29)
        assert stats["total"] == 37
        assert 100 * stats["accuracy"] == pytest.approx(91.8, abs=0.1)
        assert 100 * stats["sensitivity"] == pytest.approx(83.3, abs=0.1)
        assert 100 * stats["specificity"] == pytest.approx(93.5, abs=0.1)
        assert 100 * stats["ppv"] == pytest.approx(71.4, abs=0.1)
        assert 100 * stats["npv"] == pytest.approx(96.7, abs=0.1)

    def test_recompute_exactly_from_counts(self, rng):
        for _ in range(20):
            tp, fn, fp, tn = (int(v) for v in rng.integers(0, 40, 4))
            s = confusion_statistics(tp, fn, fp, tn)
            total = tp + fn + fp + tn
            if total:
                assert s["accuracy"] == (tp + tn) / total
            if tp + fn:
                assert s["sensitivity"] == tp / (tp + fn)
            if tn + fp:
                assert s["specificity"] == tn / (tn + fp)

    def test_empty_denominators_are_none(self):
        s = confusion_statistics(0, 0, 0, 0)
        assert s["accuracy"] is None
        assert s["sensitivity"] is None

    def test_batch_report_aggregates(self):
        cases = (
            [{"verdict": "POSITIVE", "expected": "POSITIVE"}] * 5
            + [{"verdict": "NEGATIVE", "expected": "POSITIVE"}] * 1
            + [{"verdict": "POSITIVE", "expected": "NEGATIVE"}] * 2
            + [{"verdict": "NEGATIVE", "expected": "NEGATIVE"}] * 29
        )
        report = batch_report(cases, [], labels_present=True)
        s = report["statistics"]
        assert (s["tp"], s["fn"], s["fp"], s["tn"]) == (5, 1, 2, 29)

    def test_no_labels_no_statistics(self):
        report = batch_report([{"verdict": "POSITIVE"}], [],
                              labels_present=False)
        assert "statistics" not in report


class TestDumps:
    def test_round_trip(self):
        obj = {"b": [1, 2], "a": {"x": 0.25, "y": None}}
        assert json.loads(dumps(obj)) == obj

    def test_sorted_and_newline_terminated(self):
        text = dumps({"b": 1, "a": 2})
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")
