"""The three-criterion characterization and the dichotomous verdict.

A candidate region is read as a real clot when its darkness relative to
the open lumen, the solid fraction it occupies, and its roundness agree:
any two indicative criteria yield POSITIVE, with the shape criterion
never sufficient on its own.
"""

from dataclasses import dataclass, field

from .errors import DegenerateHistogram
from .filters import FilterParams, build_filtered_set
from .roi import BinaryMask, make_masks
from .segmentation import (
    binarize,
    connected_components,
    mean_intensity,
    morphological_close,
    otsu_threshold,
)

POSITIVE = "POSITIVE"
NEGATIVE = "NEGATIVE"

# Guard for the inclusive intensity band so a ratio that equals an
# endpoint in real arithmetic (e.g. 0.48/0.80) is not pushed out by one
# rounding ulp.  The strict comparisons (occupation, eccentricity) are
# left exact.
_BAND_EPS = 1e-9


@dataclass(frozen=True)
class CriterionThresholds:
    """Acceptance bands for the three criteria.

    Intensity ratio is indicative inside center +/- halfwidth
    (inclusive); occupation must strictly exceed its minimum fraction;
    eccentricity must be strictly below its maximum.
    """

    intensity_center: float = 0.40
    intensity_halfwidth: float = 0.20
    occupation_min_fraction: float = 0.07
    eccentricity_max: float = 0.8
    closing_radius: int = 5

    def validate(self):
        low = self.intensity_center - self.intensity_halfwidth
        high = self.intensity_center + self.intensity_halfwidth
        if not (0.0 < low and high < 1.0):
            raise ValueError("intensity band must lie inside (0, 1)")
        if self.occupation_min_fraction <= 0 or self.eccentricity_max <= 0:
            raise ValueError("thresholds must be positive")
        if self.closing_radius < 1:
            raise ValueError("closing radius must be >= 1")

    def to_json(self):
        return {
            "intensity_center": self.intensity_center,
            "intensity_halfwidth": self.intensity_halfwidth,
            "occupation_min_fraction": self.occupation_min_fraction,
            "eccentricity_max": self.eccentricity_max,
            "closing_radius": self.closing_radius,
        }

    @staticmethod
    def from_json(obj):
        base = CriterionThresholds()
        th = CriterionThresholds(
            intensity_center=float(obj.get("intensity_center",
                                           base.intensity_center)),
            intensity_halfwidth=float(obj.get("intensity_halfwidth",
                                              base.intensity_halfwidth)),
            occupation_min_fraction=float(obj.get("occupation_min_fraction",
                                                  base.occupation_min_fraction)),
            eccentricity_max=float(obj.get("eccentricity_max",
                                           base.eccentricity_max)),
            closing_radius=int(obj.get("closing_radius", base.closing_radius)),
        )
        th.validate()
        return th


@dataclass(frozen=True)
class ParameterResult:
    """One measured criterion; value is None when undefined, which
    forces indicative = False."""

    name: str
    value: float | None
    threshold_low: float | None
    threshold_high: float | None
    indicative: bool
    detail: str = ""

    def to_json(self):
        return {
            "value": self.value,
            "threshold_low": self.threshold_low,
            "threshold_high": self.threshold_high,
            "indicative": self.indicative,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ClotAssessment:
    verdict: str
    intensity: ParameterResult
    occupation: ParameterResult
    eccentricity: ParameterResult
    clot_binary: BinaryMask
    masks: object  # MaskTriple, kept for overlay rendering
    params: FilterParams
    thresholds: CriterionThresholds
    source_id: str
    roi: dict
    normalization: dict = field(default_factory=dict)


def eval_intensity(fset, masks, thresholds):
    """Mean intensity of the clot ROI relative to the lumen-only zone,
    measured on the simple enhanced image."""
    low = thresholds.intensity_center - thresholds.intensity_halfwidth
    high = thresholds.intensity_center + thresholds.intensity_halfwidth
    clot_mean = mean_intensity(fset.simple_enhanced, masks.clot)
    lumen_mean = mean_intensity(fset.simple_enhanced, masks.lumen_only)
    if lumen_mean == 0.0:
        return ParameterResult(
            name="intensity_ratio", value=None,
            threshold_low=low, threshold_high=high, indicative=False,
            detail="lumen-only region is entirely dark; ratio undefined")
    value = clot_mean / lumen_mean
    return ParameterResult(
        name="intensity_ratio", value=value,
        threshold_low=low, threshold_high=high,
        indicative=low - _BAND_EPS <= value <= high + _BAND_EPS)


def eval_occupation(fset, masks, thresholds):
    """Solid fraction of the clot ROI after Otsu binarization and closing
    of the weighted enhanced image.

    Returns the result plus the closed binary for the shape criterion.
    A single-bin ROI histogram is the no-structure branch: artifacts
    flattened by the weighted filtering leave nothing to segment.
    """
    roi_area = masks.clot.popcount
    empty = BinaryMask(masks.clot.bits & False)
    values = fset.weighted_enhanced.pixels[masks.clot.bits]
    try:
        threshold = otsu_threshold(values)
    except DegenerateHistogram:
        return ParameterResult(
            name="occupation", value=0.0,
            threshold_low=thresholds.occupation_min_fraction,
            threshold_high=None, indicative=False,
            detail="no binary structure inside the clot ROI"), empty
    foreground = binarize(fset.weighted_enhanced, masks.clot, threshold)
    if foreground.popcount == 0:
        return ParameterResult(
            name="occupation", value=0.0,
            threshold_low=thresholds.occupation_min_fraction,
            threshold_high=None, indicative=False,
            detail="no binary structure inside the clot ROI"), empty
    closed = morphological_close(foreground, thresholds.closing_radius)
    value = closed.popcount / roi_area
    return ParameterResult(
        name="occupation", value=value,
        threshold_low=thresholds.occupation_min_fraction,
        threshold_high=None,
        indicative=value > thresholds.occupation_min_fraction), closed


def eval_eccentricity(clot_binary, thresholds):
    """Eccentricity of the largest closed component; round is indicative."""
    regions = connected_components(clot_binary)
    if not regions:
        return ParameterResult(
            name="eccentricity", value=None,
            threshold_low=None, threshold_high=thresholds.eccentricity_max,
            indicative=False, detail="no solid component")
    value = regions[0].eccentricity
    return ParameterResult(
        name="eccentricity", value=value,
        threshold_low=None, threshold_high=thresholds.eccentricity_max,
        indicative=value < thresholds.eccentricity_max)


def decide(intensity, occupation, eccentricity):
    """Two or more indicative criteria mean POSITIVE.

    Intensity and occupation together suffice regardless of shape; a
    single indicative criterion needs the round shape to corroborate;
    shape alone never suffices.
    """
    if intensity and occupation:
        return POSITIVE
    if (intensity != occupation) and eccentricity:
        return POSITIVE
    return NEGATIVE


def classify(study, lumen_shape, clot_shape, params=None,
             thresholds=None):
    """Full pipeline: masks, filtering, the three criteria, verdict."""
    params = params or FilterParams()
    thresholds = thresholds or CriterionThresholds()
    params.validate()
    thresholds.validate()
    image = study.image
    masks = make_masks(lumen_shape, clot_shape, image.width, image.height)
    fset = build_filtered_set(image, params)
    intensity = eval_intensity(fset, masks, thresholds)
    occupation, clot_binary = eval_occupation(fset, masks, thresholds)
    eccentricity = eval_eccentricity(clot_binary, thresholds)
    verdict = decide(intensity.indicative, occupation.indicative,
                     eccentricity.indicative)
    return ClotAssessment(
        verdict=verdict,
        intensity=intensity,
        occupation=occupation,
        eccentricity=eccentricity,
        clot_binary=clot_binary,
        masks=masks,
        params=params,
        thresholds=thresholds,
        source_id=study.source_id,
        roi={"lumen": lumen_shape.to_json(), "clot": clot_shape.to_json()},
        normalization={
            "original_bit_depth": study.original_bit_depth,
            "raw_min": study.raw_min,
            "raw_max": study.raw_max,
        },
    )
