"""The enhancement chain: unsharp sharpening, tiled contrast-limited
equalization, and the two superpositions consumed by the classifier.

All operations map [0, 1] images to [0, 1] images and are fully
deterministic; the heavy per-pixel work is delegated to the kernel
backend.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, TileGridTooFine
from .image_io import GrayImage


@dataclass(frozen=True)
class FilterParams:
    """Configuration of the enhancement chain.

    ``lambda_`` is the unsharp gain (0..1, default 0.21 for moderate
    sharpening); the tile grid / clip / bins drive both equalization
    passes.
    """

    lambda_: float = 0.21
    unsharp_sigma: float = 1.5
    clahe_tiles_x: int = 8
    clahe_tiles_y: int = 8
    clahe_clip: float = 0.01
    clahe_bins: int = 256

    def validate(self):
        if not 0.0 <= self.lambda_ <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")
        if self.unsharp_sigma <= 0:
            raise ValueError("unsharp_sigma must be positive")
        if self.clahe_tiles_x < 2 or self.clahe_tiles_y < 2:
            raise ValueError("tile grid must be at least 2x2")
        if self.clahe_bins < 16:
            raise ValueError("clahe_bins must be >= 16")
        if not 0.0 < self.clahe_clip <= 1.0:
            raise ValueError("clahe_clip must lie in (0, 1]")

    def to_json(self):
        return {
            "lambda": self.lambda_,
            "unsharp_sigma": self.unsharp_sigma,
            "clahe_tiles_x": self.clahe_tiles_x,
            "clahe_tiles_y": self.clahe_tiles_y,
            "clahe_clip": self.clahe_clip,
            "clahe_bins": self.clahe_bins,
        }

    @staticmethod
    def from_json(obj):
        base = FilterParams()
        params = FilterParams(
            lambda_=float(obj.get("lambda", base.lambda_)),
            unsharp_sigma=float(obj.get("unsharp_sigma", base.unsharp_sigma)),
            clahe_tiles_x=int(obj.get("clahe_tiles_x", base.clahe_tiles_x)),
            clahe_tiles_y=int(obj.get("clahe_tiles_y", base.clahe_tiles_y)),
            clahe_clip=float(obj.get("clahe_clip", base.clahe_clip)),
            clahe_bins=int(obj.get("clahe_bins", base.clahe_bins)),
        )
        params.validate()
        return params


@dataclass(frozen=True)
class FilteredSet:
    """The five images the characterization step works from."""

    original: GrayImage
    sharpened: GrayImage
    enhanced: GrayImage
    simple_enhanced: GrayImage
    weighted_enhanced: GrayImage
    params: FilterParams


def gaussian_weights(sigma):
    """Normalized 1-D Gaussian taps truncated at 3 sigma."""
    radius = max(1, int(math.floor(3.0 * sigma)))
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return w / w.sum()


def unsharp(image, params):
    """f + lambda * (f - blur(f)), clamped to [0, 1]."""
    params.validate()
    f = image.pixels
    blurred = kernels.conv_separable(f, gaussian_weights(params.unsharp_sigma))
    out = np.clip(f + params.lambda_ * (f - blurred), 0.0, 1.0)
    return GrayImage(out)


def _tile_edges(extent, tiles):
    return [extent * i // tiles for i in range(tiles + 1)]


def _blend_tables(edges, extent):
    """Per-coordinate tile pair and blend fraction.

    Coordinates outside the first/last tile centers clamp to the nearest
    mapping (border pixels blend 1-2 mappings instead of 4).
    """
    centers = np.array([(edges[i] + edges[i + 1] - 1) / 2.0
                        for i in range(len(edges) - 1)])
    coords = np.arange(extent, dtype=np.float64)
    i0 = np.searchsorted(centers, coords, side="right") - 1
    i0 = np.clip(i0, 0, len(centers) - 1)
    i1 = np.minimum(i0 + 1, len(centers) - 1)
    frac = np.zeros(extent, dtype=np.float64)
    interior = i1 > i0
    frac[interior] = (coords[interior] - centers[i0[interior]]) / (
        centers[i1[interior]] - centers[i0[interior]])
    below = coords <= centers[0]
    above = coords >= centers[-1]
    i0[below] = i1[below] = 0
    i0[above] = i1[above] = len(centers) - 1
    frac[below | above] = 0.0
    return i0.astype(np.int64), i1.astype(np.int64), frac


def _tile_mappings(pixels, edges_y, edges_x, bins, clip):
    """Clipped-histogram CDF nodes per tile plus degenerate-tile flags.

    A tile whose histogram occupies a single bin keeps the identity
    mapping, which makes uniform images exact fixed points.
    """
    ty = len(edges_y) - 1
    tx = len(edges_x) - 1
    nodes = np.empty((ty, tx, bins + 1), dtype=np.float64)
    identity = np.zeros((ty, tx), dtype=np.uint8)
    ramp = np.arange(bins + 1, dtype=np.float64) / bins
    for i in range(ty):
        for j in range(tx):
            tile = pixels[edges_y[i]:edges_y[i + 1], edges_x[j]:edges_x[j + 1]]
            n = tile.size
            binned = np.minimum((tile.reshape(-1) * bins).astype(np.int64),
                                bins - 1)
            hist = np.bincount(binned, minlength=bins).astype(np.float64)
            if np.count_nonzero(hist) <= 1:
                identity[i, j] = 1
                nodes[i, j] = ramp
                continue
            limit = clip * n
            excess = np.maximum(hist - limit, 0.0).sum()
            clipped = np.minimum(hist, limit) + excess / bins
            cdf = np.cumsum(clipped) / n
            nodes[i, j, 0] = 0.0
            nodes[i, j, 1:] = np.clip(cdf, 0.0, 1.0)
    return nodes, identity


def clahe(image, params):
    """Contrast-limited adaptive equalization with bilinear tile blending."""
    params.validate()
    h, w = image.height, image.width
    if w // params.clahe_tiles_x < 4 or h // params.clahe_tiles_y < 4:
        raise TileGridTooFine(
            f"{params.clahe_tiles_x}x{params.clahe_tiles_y} tiles need at "
            f"least 4x4 pixels each in a {w}x{h} image")
    edges_x = _tile_edges(w, params.clahe_tiles_x)
    edges_y = _tile_edges(h, params.clahe_tiles_y)
    nodes, identity = _tile_mappings(image.pixels, edges_y, edges_x,
                                     params.clahe_bins, params.clahe_clip)
    iy0, iy1, fy = _blend_tables(edges_y, h)
    ix0, ix1, fx = _blend_tables(edges_x, w)
    out = kernels.clahe_apply(image.pixels, nodes, identity,
                              iy0, iy1, fy, ix0, ix1, fx, params.clahe_bins)
    return GrayImage(out)


def superpose_linear(original, enhanced):
    """Pixelwise mean of the two images."""
    if original.pixels.shape != enhanced.pixels.shape:
        raise DimensionMismatch("superposed images must share dimensions")
    return GrayImage((original.pixels + enhanced.pixels) / 2.0)


def superpose_weighted(original, enhanced):
    """2:1 weighted mean favouring the enhanced image.

    Evaluated as e + (o - e)/3 so equal inputs are preserved exactly.
    """
    if original.pixels.shape != enhanced.pixels.shape:
        raise DimensionMismatch("superposed images must share dimensions")
    e = enhanced.pixels
    return GrayImage(e + (original.pixels - e) / 3.0)


def build_filtered_set(original, params=None):
    """Run the full chain and collect the five derived images.

    Both superpositions are re-equalized with the same parameters as the
    first pass.
    """
    params = params or FilterParams()
    sharpened = unsharp(original, params)
    enhanced = clahe(sharpened, params)
    simple_enhanced = clahe(superpose_linear(original, enhanced), params)
    weighted_enhanced = clahe(superpose_weighted(original, enhanced), params)
    return FilteredSet(
        original=original,
        sharpened=sharpened,
        enhanced=enhanced,
        simple_enhanced=simple_enhanced,
        weighted_enhanced=weighted_enhanced,
        params=params,
    )
