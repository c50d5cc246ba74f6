import itertools

import numpy as np
import pytest

from clotseg import errors
from clotseg.classifier import (
    NEGATIVE,
    POSITIVE,
    CriterionThresholds,
    classify,
    decide,
    eval_eccentricity,
    eval_intensity,
    eval_occupation,
)
from clotseg.filters import FilterParams, FilteredSet
from clotseg.image_io import GrayImage
from clotseg.phantom import PhantomSpec, generate
from clotseg.roi import BinaryMask, EllipseRoi, MaskTriple

TH = CriterionThresholds()


def flat_fset(pixels):
    """FilteredSet stub where every member is the same image; criterion
    functions only read simple_enhanced / weighted_enhanced."""
    img = GrayImage.from_array(pixels)
    return FilteredSet(original=img, sharpened=img, enhanced=img,
                       simple_enhanced=img, weighted_enhanced=img,
                       params=FilterParams())


def triple_from_values(clot_value, lumen_value, n=32, r_clot=6, r_lumen=12):
    pixels = np.full((n, n), float(lumen_value))
    ys, xs = np.mgrid[0:n, 0:n]
    clot = (xs - n // 2) ** 2 + (ys - n // 2) ** 2 <= r_clot ** 2
    lumen = (xs - n // 2) ** 2 + (ys - n // 2) ** 2 <= r_lumen ** 2
    pixels[clot] = float(clot_value)
    masks = MaskTriple(clot=BinaryMask(clot), lumen=BinaryMask(lumen),
                       lumen_only=BinaryMask(lumen & ~clot))
    return flat_fset(pixels), masks


class TestIntensity:
    def test_ratio_040_indicative(self):
        fset, masks = triple_from_values(0.32, 0.80)
        result = eval_intensity(fset, masks, TH)
        assert result.value == pytest.approx(0.40)
        assert result.indicative

    def test_equal_means_not_indicative(self):
        fset, masks = triple_from_values(0.80, 0.80)
        result = eval_intensity(fset, masks, TH)
        assert result.value == pytest.approx(1.0)
        assert not result.indicative

    def test_upper_boundary_inclusive(self):
        fset, masks = triple_from_values(0.48, 0.80)
        result = eval_intensity(fset, masks, TH)
        assert result.value == pytest.approx(0.60)
        assert result.indicative

    def test_dark_lumen_degrades(self):
        fset, masks = triple_from_values(0.0, 0.0)
        result = eval_intensity(fset, masks, TH)
        assert result.value is None
        assert not result.indicative
        assert "dark" in result.detail


class TestOccupation:
    def test_solid_inclusion(self):
        # dark disc radius 6 inside a radius-9 ROI: the foreground is the
        # disc, closing preserves it, occupation = disc / ROI popcounts
        n = 40
        pixels = np.full((n, n), 0.8)
        ys, xs = np.mgrid[0:n, 0:n]
        disc = (xs - 20) ** 2 + (ys - 20) ** 2 <= 6 ** 2
        roi = (xs - 20) ** 2 + (ys - 20) ** 2 <= 9 ** 2
        lumen = (xs - 20) ** 2 + (ys - 20) ** 2 <= 16 ** 2
        pixels[disc] = 0.2
        masks = MaskTriple(clot=BinaryMask(roi), lumen=BinaryMask(lumen),
                           lumen_only=BinaryMask(lumen & ~roi))
        result, binary = eval_occupation(flat_fset(pixels), masks, TH)
        assert result.value == pytest.approx(disc.sum() / roi.sum())
        assert result.indicative
        assert binary.popcount == disc.sum()

    def test_uniform_region_is_no_structure(self):
        fset, masks = triple_from_values(0.8, 0.8)
        result, binary = eval_occupation(fset, masks, TH)
        assert result.value == 0.0
        assert not result.indicative
        assert binary.popcount == 0
        assert "no binary structure" in result.detail

    def test_exact_seven_percent_not_indicative(self):
        result_like = 0.07
        assert not result_like > TH.occupation_min_fraction

    def test_fraction_arithmetic(self):
        # 40 dark pixels in a 400-pixel ROI -> 0.10 after closing of a
        # compact blob
        n = 40
        pixels = np.full((n, n), 0.8)
        ys, xs = np.mgrid[0:n, 0:n]
        roi = (np.abs(xs - 20) <= 9) & (np.abs(ys - 20) <= 9)  # 19x19=361
        blob = (np.abs(xs - 20) <= 3) & (np.abs(ys - 20) <= 3)  # 7x7=49
        pixels[blob] = 0.2
        masks = MaskTriple(clot=BinaryMask(roi), lumen=BinaryMask(roi | blob),
                           lumen_only=BinaryMask(roi & ~blob))
        result, _ = eval_occupation(flat_fset(pixels), masks, TH)
        assert result.value == pytest.approx(49 / 361)
        assert result.indicative


class TestEccentricityCriterion:
    def test_circle_indicative(self):
        ys, xs = np.mgrid[0:64, 0:64]
        binary = BinaryMask((xs - 32) ** 2 + (ys - 32) ** 2 <= 15 ** 2)
        result = eval_eccentricity(binary, TH)
        assert result.value < 0.1
        assert result.indicative

    def test_line_not_indicative(self):
        bits = np.zeros((8, 48), dtype=bool)
        bits[4, 2:42] = True
        result = eval_eccentricity(BinaryMask(bits), TH)
        assert result.value > 0.99
        assert not result.indicative

    def test_empty_not_indicative(self):
        result = eval_eccentricity(BinaryMask(np.zeros((8, 8), bool)), TH)
        assert result.value is None
        assert not result.indicative
        assert result.detail == "no solid component"


class TestDecide:
    # exhaustive truth table: (intensity, occupation, eccentricity)
    TABLE = {
        (False, False, False): NEGATIVE,
        (False, False, True): NEGATIVE,   # shape alone never suffices
        (False, True, False): NEGATIVE,
        (False, True, True): POSITIVE,
        (True, False, False): NEGATIVE,
        (True, False, True): POSITIVE,    # one criterion + round shape
        (True, True, False): POSITIVE,    # positive regardless of shape
        (True, True, True): POSITIVE,
    }

    @pytest.mark.parametrize("flags,verdict", sorted(TABLE.items()))
    def test_table(self, flags, verdict):
        assert decide(*flags) == verdict

    def test_monotone(self):
        for flags in itertools.product([False, True], repeat=3):
            if decide(*flags) == POSITIVE:
                for i in range(3):
                    raised = list(flags)
                    raised[i] = True
                    assert decide(*raised) == POSITIVE


class TestClassify:
    def test_real_clot_positive(self):
        study, lumen, clot, expected = generate(
            PhantomSpec.default("real_clot", seed=3, noise_sigma=0.0))
        a = classify(study, lumen, clot)
        assert a.verdict == expected == POSITIVE

    def test_turbulence_negative(self):
        study, lumen, clot, expected = generate(
            PhantomSpec.default("turbulence", seed=3, noise_sigma=0.0))
        a = classify(study, lumen, clot)
        assert a.verdict == expected == NEGATIVE

    def test_clot_outside_lumen_raises(self):
        study, lumen, clot, _ = generate(
            PhantomSpec.default("real_clot", seed=3, noise_sigma=0.0))
        stray = EllipseRoi(cx=20, cy=20, a=6, b=6)
        with pytest.raises(errors.ClotNotContained):
            classify(study, lumen, stray)

    def test_verdict_consistent_with_flags(self):
        for kind in ("real_clot", "turbulence", "clean_lumen"):
            study, lumen, clot, _ = generate(
                PhantomSpec.default(kind, seed=11, noise_sigma=0.02))
            a = classify(study, lumen, clot)
            assert a.verdict == decide(a.intensity.indicative,
                                       a.occupation.indicative,
                                       a.eccentricity.indicative)

    def test_deterministic_serialization(self):
        from clotseg.report import assessment_to_case, dumps
        study, lumen, clot, _ = generate(
            PhantomSpec.default("real_clot", seed=5, noise_sigma=0.02))
        a = dumps(assessment_to_case(classify(study, lumen, clot)))
        b = dumps(assessment_to_case(classify(study, lumen, clot)))
        assert a == b

    def test_intensity_ratio_rescaling_invariant(self):
        # ratio of means over the same image is invariant under global
        # positive rescaling (pre-clamp)
        rng = np.random.default_rng(7)
        base = rng.random((32, 32)) * 0.5 + 0.25
        _, masks = triple_from_values(0.3, 0.8)
        r1 = eval_intensity(flat_fset(base), masks, TH)
        r2 = eval_intensity(flat_fset(base * 0.5), masks, TH)
        assert r1.value == pytest.approx(r2.value, rel=1e-12)
