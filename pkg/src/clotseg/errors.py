"""Exception hierarchy shared by the whole pipeline.

Every error carries a stable machine-readable ``code`` so the CLI and the
HTTP service can emit the same error identifiers.
"""


class ClotsegError(Exception):
    code = "error"


# --- image loading -----------------------------------------------------------

class MissingPreamble(ClotsegError):
    code = "missing_preamble"


class UnsupportedTransferSyntax(ClotsegError):
    code = "unsupported_transfer_syntax"


class UnsupportedPixelFormat(ClotsegError):
    """Photometric/bit-depth/frame-count combinations outside the subset."""

    code = "unsupported_pixel_format"


class MalformedDicom(ClotsegError):
    code = "malformed_dicom"


class MissingPixelData(ClotsegError):
    code = "missing_pixel_data"


class DimensionMismatch(ClotsegError):
    code = "dimension_mismatch"


class BadMagic(ClotsegError):
    code = "bad_magic"


class BadHeader(ClotsegError):
    code = "bad_header"


class TruncatedPixelData(ClotsegError):
    code = "truncated_pixel_data"


# --- ROI handling ------------------------------------------------------------

class EmptyMask(ClotsegError):
    code = "empty_mask"


class ClotNotContained(ClotsegError):
    code = "clot_not_contained"


class LumenEqualsClot(ClotsegError):
    code = "lumen_equals_clot"


class BadRoi(ClotsegError):
    code = "bad_roi"


# --- filtering / segmentation ------------------------------------------------

class TileGridTooFine(ClotsegError):
    code = "tile_grid_too_fine"


class DegenerateHistogram(ClotsegError):
    code = "degenerate_histogram"


# --- phantom -----------------------------------------------------------------

class InclusionOutsideLumen(ClotsegError):
    code = "inclusion_outside_lumen"
