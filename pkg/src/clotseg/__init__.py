"""clotseg: quantitative clot-versus-flow-artifact characterization for
True-FISP pulmonary MR slices."""

from .classifier import (
    NEGATIVE,
    POSITIVE,
    ClotAssessment,
    CriterionThresholds,
    ParameterResult,
    classify,
    decide,
)
from .filters import FilterParams, FilteredSet, build_filtered_set
from .image_io import GrayImage, StudySlice, load_dicom, load_pgm, write_pgm
from .roi import BinaryMask, EllipseRoi, MaskTriple, PolygonRoi, make_masks, rasterize

__version__ = "0.1.0"

__all__ = [
    "BinaryMask",
    "ClotAssessment",
    "CriterionThresholds",
    "EllipseRoi",
    "FilterParams",
    "FilteredSet",
    "GrayImage",
    "MaskTriple",
    "NEGATIVE",
    "POSITIVE",
    "ParameterResult",
    "PolygonRoi",
    "StudySlice",
    "build_filtered_set",
    "classify",
    "decide",
    "load_dicom",
    "load_pgm",
    "make_masks",
    "rasterize",
    "write_pgm",
    "__version__",
]
