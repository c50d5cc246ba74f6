"""Quantitative primitives: Otsu thresholding, binary morphology,
connected components and region properties.

Conventions (also recorded in report metadata):

* foreground is dark — binarize keeps pixels <= threshold;
* components use 8-connectivity;
* the closing structuring element is the discrete Euclidean disk
  {(dx, dy) : dx^2 + dy^2 <= r^2}, computed on a background-extended
  plane and cropped back, which keeps the closing extensive, increasing
  and idempotent up to the image border.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import DegenerateHistogram, DimensionMismatch, EmptyMask
from .roi import BinaryMask

OTSU_BINS = 256


@dataclass(frozen=True)
class Region:
    """One 8-connected component with its shape descriptors.

    ``coords`` is an (n, 2) array of (x, y) pixel coordinates; the
    central moments are sums over pixels (pixel^2 units).
    """

    coords: np.ndarray
    area: int
    centroid: tuple
    mu20: float
    mu02: float
    mu11: float
    eccentricity: float


def otsu_split_index(hist):
    """Index k of the last class-0 bin under Otsu's criterion.

    Maximizes the between-class variance in exact integer arithmetic
    (counts are integers), breaking ties toward the lowest k, so the
    result matches an exhaustive within-class-variance minimizer
    bin for bin.
    """
    counts = [int(c) for c in hist]
    if sum(1 for c in counts if c > 0) <= 1:
        raise DegenerateHistogram("histogram occupies a single bin")
    total_w = sum(counts)
    total_s = sum(i * c for i, c in enumerate(counts))
    w0 = 0
    s0 = 0
    best_k = -1
    best_num = -1
    best_den = 1
    for k in range(len(counts) - 1):
        w0 += counts[k]
        s0 += k * counts[k]
        if w0 == 0:
            continue
        w1 = total_w - w0
        if w1 == 0:
            break
        # between-class variance = (s0*w1 - s1*w0)^2 / (w0*w1*total^2);
        # the constant total^2 cancels in comparisons.
        num = (s0 * w1 - (total_s - s0) * w0) ** 2
        den = w0 * w1
        if num * best_den > best_num * den:
            best_num, best_den, best_k = num, den, k
    return best_k


def otsu_threshold(values, bins=OTSU_BINS):
    """Threshold in [0, 1] separating dark from bright intensities.

    The value returned is the largest double below the (k+1)/bins class
    boundary, so `pixel <= threshold` selects exactly the class-0 bins.
    """
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    if v.size == 0:
        raise EmptyMask("otsu_threshold needs at least one value")
    binned = np.minimum((v * bins).astype(np.int64), bins - 1)
    hist = np.bincount(binned, minlength=bins)
    k = otsu_split_index(hist)
    return math.nextafter((k + 1) / bins, 0.0)


def binarize(image, mask, threshold):
    """Keep masked pixels at or below the threshold (dark foreground)."""
    if image.pixels.shape != mask.bits.shape:
        raise DimensionMismatch("image and mask dimensions differ")
    return BinaryMask(mask.bits & (image.pixels <= threshold))


@lru_cache(maxsize=8)
def disk_offsets(radius):
    offs = [(dy, dx)
            for dy in range(-radius, radius + 1)
            for dx in range(-radius, radius + 1)
            if dy * dy + dx * dx <= radius * radius]
    dy = np.array([o[0] for o in offs], dtype=np.int64)
    dx = np.array([o[1] for o in offs], dtype=np.int64)
    return dy, dx


def morphological_close(mask, radius=5):
    """Dilation then erosion with the discrete disk of the given radius.

    Runs on a canvas padded with 2*radius background pixels so border
    foreground is treated exactly as on an unbounded plane; the crop
    back to the frame provably discards nothing.
    """
    if radius < 1:
        raise ValueError("closing radius must be >= 1")
    dy, dx = disk_offsets(radius)
    h, w = mask.bits.shape
    pad = 2 * radius
    work = np.zeros((h + 2 * pad, w + 2 * pad), dtype=np.uint8)
    work[pad:pad + h, pad:pad + w] = mask.bits
    dilated = kernels.binary_dilate(work, dy, dx)
    eroded = kernels.binary_erode(dilated, dy, dx)
    return BinaryMask(eroded[pad:pad + h, pad:pad + w].astype(bool))


def _region_from_coords(xs, ys):
    n = xs.size
    cx = float(xs.sum()) / n
    cy = float(ys.sum()) / n
    dx = xs - cx
    dy = ys - cy
    mu20 = float(np.dot(dx, dx))
    mu02 = float(np.dot(dy, dy))
    mu11 = float(np.dot(dx, dy))
    return Region(
        coords=np.column_stack([xs, ys]).astype(np.int64),
        area=int(n),
        centroid=(cx, cy),
        mu20=mu20,
        mu02=mu02,
        mu11=mu11,
        eccentricity=_eccentricity(mu20, mu02, mu11, n),
    )


def _eccentricity(mu20, mu02, mu11, area):
    a = mu20 / area
    c = mu02 / area
    b = mu11 / area
    mid = (a + c) / 2.0
    rad = math.hypot((a - c) / 2.0, b)
    lam1 = mid + rad
    lam2 = max(mid - rad, 0.0)
    if lam1 <= 0.0:
        return 0.0
    return math.sqrt(max(1.0 - lam2 / lam1, 0.0))


def connected_components(mask):
    """All 8-connected regions, largest first.

    Ties break on first raster appearance; an empty mask yields an
    empty list.
    """
    labels, count = kernels.label_components(mask.bits)
    if count == 0:
        return []
    h, w = labels.shape
    flat = labels.ravel()
    fg = np.flatnonzero(flat)
    labs = flat[fg]
    order = np.argsort(labs, kind="stable")
    sorted_idx = fg[order]
    sorted_labs = labs[order]
    bounds = np.searchsorted(sorted_labs, np.arange(1, count + 2))
    regions = []
    for lab in range(1, count + 1):
        idx = sorted_idx[bounds[lab - 1]:bounds[lab]]
        xs = (idx % w).astype(np.float64)
        ys = (idx // w).astype(np.float64)
        regions.append(_region_from_coords(xs, ys))
    regions.sort(key=lambda r: -r.area)
    return regions


def region_eccentricity(region):
    """Eccentricity from second central moments: 0 = circle, 1 = line."""
    return region.eccentricity


def mean_intensity(image, mask):
    if image.pixels.shape != mask.bits.shape:
        raise DimensionMismatch("image and mask dimensions differ")
    if not mask.bits.any():
        raise EmptyMask("mean over an empty mask")
    return float(image.pixels[mask.bits].mean())
