"""User-drawn regions of interest and their rasterized masks.

The shared JSON schema (used by the CLI, the service, and the UI) is::

    {"lumen": {"kind": "ellipse", "cx": .., "cy": .., "a": .., "b": .., "rot": ..},
     "clot":  {"kind": "polygon", "points": [[x, y], ...]}}

Coordinates are zero-based pixel units; a pixel's center sits at its
integer coordinate.  Rasterization is crisp (pixel-center inclusion, no
anti-aliasing) so downstream area ratios are exactly reproducible.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadRoi, ClotNotContained, EmptyMask, LumenEqualsClot


@dataclass(frozen=True)
class EllipseRoi:
    cx: float
    cy: float
    a: float
    b: float
    rot: float = 0.0

    kind = "ellipse"

    def validate(self):
        if not (self.a > 0 and self.b > 0):
            raise BadRoi("ellipse semi-axes must be positive")

    def to_json(self):
        return {"kind": "ellipse", "cx": self.cx, "cy": self.cy,
                "a": self.a, "b": self.b, "rot": self.rot}


@dataclass(frozen=True)
class PolygonRoi:
    points: tuple

    kind = "polygon"

    def validate(self):
        if len(self.points) < 3:
            raise BadRoi("polygon needs at least 3 vertices")

    def to_json(self):
        return {"kind": "polygon", "points": [[x, y] for x, y in self.points]}


def shape_from_json(obj):
    if not isinstance(obj, dict):
        raise BadRoi("ROI shape must be a JSON object")
    kind = obj.get("kind")
    try:
        if kind == "ellipse":
            shape = EllipseRoi(cx=float(obj["cx"]), cy=float(obj["cy"]),
                               a=float(obj["a"]), b=float(obj["b"]),
                               rot=float(obj.get("rot", 0.0)))
        elif kind == "polygon":
            pts = tuple((float(x), float(y)) for x, y in obj["points"])
            shape = PolygonRoi(points=pts)
        else:
            raise BadRoi(f"unknown ROI kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise BadRoi(f"malformed ROI shape: {exc}") from None
    shape.validate()
    return shape


def roi_pair_from_json(obj):
    """Parse the {"lumen": .., "clot": ..} document (or a phantom sidecar
    that nests it under a "roi" key)."""
    if isinstance(obj, dict) and "roi" in obj and "lumen" not in obj:
        obj = obj["roi"]
    if not isinstance(obj, dict) or "lumen" not in obj or "clot" not in obj:
        raise BadRoi('ROI document must contain "lumen" and "clot"')
    return shape_from_json(obj["lumen"]), shape_from_json(obj["clot"])


@dataclass(frozen=True)
class BinaryMask:
    bits: np.ndarray  # bool, shape (height, width)

    @property
    def width(self):
        return int(self.bits.shape[1])

    @property
    def height(self):
        return int(self.bits.shape[0])

    @property
    def popcount(self):
        return int(self.bits.sum())


@dataclass(frozen=True)
class MaskTriple:
    clot: BinaryMask
    lumen: BinaryMask
    lumen_only: BinaryMask


def _rasterize_ellipse(shape, width, height):
    cos_t = math.cos(shape.rot)
    sin_t = math.sin(shape.rot)
    x0 = max(0, int(math.floor(shape.cx - max(shape.a, shape.b))))
    x1 = min(width - 1, int(math.ceil(shape.cx + max(shape.a, shape.b))))
    y0 = max(0, int(math.floor(shape.cy - max(shape.a, shape.b))))
    y1 = min(height - 1, int(math.ceil(shape.cy + max(shape.a, shape.b))))
    bits = np.zeros((height, width), dtype=bool)
    if x1 < x0 or y1 < y0:
        return bits
    ys, xs = np.mgrid[y0:y1 + 1, x0:x1 + 1]
    dx = xs - shape.cx
    dy = ys - shape.cy
    u = (dx * cos_t + dy * sin_t) / shape.a
    v = (-dx * sin_t + dy * cos_t) / shape.b
    bits[y0:y1 + 1, x0:x1 + 1] = u * u + v * v <= 1.0
    return bits


def _rasterize_polygon(shape, width, height):
    pts = [(min(max(x, 0.0), width - 1.0), min(max(y, 0.0), height - 1.0))
           for x, y in shape.points]
    xs = np.arange(width, dtype=np.float64)[None, :]
    ys = np.arange(height, dtype=np.float64)[:, None]
    inside = np.zeros((height, width), dtype=bool)
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        if y0 == y1:
            continue  # horizontal edges never cross a scanline
        crosses = (y0 > ys) != (y1 > ys)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_at = (x1 - x0) * (ys - y0) / (y1 - y0) + x0
        inside ^= crosses & (xs < x_at)
    return inside


def rasterize(shape, width, height):
    """Rasterize a shape with the pixel-center inclusion convention."""
    shape.validate()
    if isinstance(shape, EllipseRoi):
        bits = _rasterize_ellipse(shape, width, height)
    else:
        bits = _rasterize_polygon(shape, width, height)
    if not bits.any():
        raise EmptyMask(f"{shape.kind} ROI covers no pixel center")
    return BinaryMask(bits)


def make_masks(lumen_shape, clot_shape, width, height):
    """Build the three classification masks, enforcing containment.

    The clot mask must be a pixelwise subset of the lumen mask; a single
    escaping pixel is the rejection branch surfaced as ClotNotContained.
    """
    lumen = rasterize(lumen_shape, width, height)
    clot = rasterize(clot_shape, width, height)
    outside = clot.bits & ~lumen.bits
    if outside.any():
        raise ClotNotContained(
            f"{int(outside.sum())} clot pixel(s) fall outside the lumen ROI")
    lumen_only_bits = lumen.bits & ~clot.bits
    if not lumen_only_bits.any():
        raise LumenEqualsClot("lumen ROI adds no pixels beyond the clot ROI")
    return MaskTriple(clot=clot, lumen=lumen,
                      lumen_only=BinaryMask(lumen_only_bits))
