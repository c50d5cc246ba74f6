import numpy as np
import pytest

from clotseg import errors
from clotseg.filters import (
    FilterParams,
    build_filtered_set,
    clahe,
    gaussian_weights,
    superpose_linear,
    superpose_weighted,
    unsharp,
)
from clotseg.image_io import GrayImage

P = FilterParams()


def members(fset):
    return [fset.original, fset.sharpened, fset.enhanced,
            fset.simple_enhanced, fset.weighted_enhanced]


class TestUnsharp:
    def test_constant_is_fixed_point(self):
        img = GrayImage.from_array(np.full((32, 32), 0.42))
        assert np.array_equal(unsharp(img, P).pixels, img.pixels)

    def test_lambda_zero_identity(self, checker_image):
        p0 = FilterParams(lambda_=0.0)
        assert np.array_equal(unsharp(checker_image, p0).pixels,
                              checker_image.pixels)

    def test_step_edge_over_and_undershoot(self):
        # 1-D step 0.2 -> 0.8 replicated over rows; before clamping the
        # sharpened edge must dip below 0.2 and rise above 0.8.
        row = np.where(np.arange(64) < 32, 0.2, 0.8)
        img = GrayImage.from_array(np.tile(row, (16, 1)))
        p = FilterParams(lambda_=0.21, unsharp_sigma=1.5)
        out = unsharp(img, p).pixels[8]
        assert out[:32].min() < 0.2
        assert out[32:].max() > 0.8
        # hand-convolved oracle for the pixel just left of the edge
        w = gaussian_weights(1.5)
        r = len(w) // 2
        x = 31
        blur = sum(w[k] * row[min(max(x + k - r, 0), 63)]
                   for k in range(len(w)))
        expected = row[x] + 0.21 * (row[x] - blur)
        assert out[x] == pytest.approx(expected, abs=1e-12)

    def test_difference_bounded_by_lambda(self, checker_image):
        w = gaussian_weights(P.unsharp_sigma)
        from clotseg.kernels import conv_separable
        g = checker_image.pixels - conv_separable(checker_image.pixels, w)
        out = unsharp(checker_image, P).pixels
        assert np.max(np.abs(out - checker_image.pixels)) <= \
            P.lambda_ * np.max(np.abs(g)) + 1e-15


class TestClahe:
    def test_uniform_is_identity(self):
        img = GrayImage.from_array(np.full((64, 48), 0.637))
        assert np.array_equal(clahe(img, P).pixels, img.pixels)

    def test_ramp_half_stays_monotone(self):
        # left half: vertical ramp 0..1; right half constant 0.5
        n = 64
        col = np.linspace(0.0, 1.0, n)[:, None]
        pixels = np.concatenate([np.tile(col, (1, n // 2)),
                                 np.full((n, n // 2), 0.5)], axis=1)
        out = clahe(GrayImage.from_array(pixels), P).pixels
        for x in range(0, n // 2):
            assert np.all(np.diff(out[:, x]) >= -1e-12)

    def test_clip_bounds_tile_histogram(self, rng):
        # brute-force single-tile check on 16x16 tiles: no clipped bin
        # exceeds clip*tile_pixels plus the uniform redistribution share
        from clotseg.filters import _tile_mappings
        pixels = rng.random((16, 16))
        bins, clip = 64, 0.05
        tile = pixels
        binned = np.minimum((tile.reshape(-1) * bins).astype(np.int64),
                            bins - 1)
        hist = np.bincount(binned, minlength=bins).astype(float)
        limit = clip * tile.size
        excess = np.maximum(hist - limit, 0.0).sum()
        clipped = np.minimum(hist, limit) + excess / bins
        assert np.all(clipped <= limit + excess / bins + 1e-9)
        # and the mapping nodes derived from it are monotone in [0, 1]
        nodes, identity = _tile_mappings(pixels, [0, 16], [0, 16], bins, clip)
        assert not identity[0, 0]
        n = nodes[0, 0]
        assert n[0] == 0.0 and n[-1] <= 1.0
        assert np.all(np.diff(n) >= 0)

    def test_tile_grid_too_fine(self):
        img = GrayImage.from_array(np.full((16, 16), 0.5))
        with pytest.raises(errors.TileGridTooFine):
            clahe(img, FilterParams(clahe_tiles_x=8, clahe_tiles_y=8))

    def test_range_preserved(self, rng):
        img = GrayImage.from_array(rng.random((96, 80)))
        out = clahe(img, P).pixels
        assert out.min() >= 0.0 and out.max() <= 1.0
        assert np.isfinite(out).all()


class TestSuperpose:
    def test_linear_examples(self):
        a = GrayImage.from_array(np.full((8, 8), 0.2))
        b = GrayImage.from_array(np.full((8, 8), 0.6))
        assert superpose_linear(a, b).pixels[0, 0] == pytest.approx(0.4)
        zero = GrayImage.from_array(np.zeros((8, 8)))
        one = GrayImage.from_array(np.ones((8, 8)))
        assert superpose_linear(zero, one).pixels[3, 3] == 0.5

    def test_weighted_examples(self):
        o = GrayImage.from_array(np.full((8, 8), 0.3))
        e = GrayImage.from_array(np.full((8, 8), 0.6))
        assert superpose_weighted(o, e).pixels[0, 0] == pytest.approx(0.5)
        zero = GrayImage.from_array(np.zeros((8, 8)))
        e9 = GrayImage.from_array(np.full((8, 8), 0.9))
        assert superpose_weighted(zero, e9).pixels[0, 0] == pytest.approx(0.6)

    def test_equal_inputs_preserved_exactly(self, rng):
        img = GrayImage.from_array(rng.random((16, 16)))
        assert np.array_equal(superpose_linear(img, img).pixels, img.pixels)
        assert np.array_equal(superpose_weighted(img, img).pixels, img.pixels)

    def test_dimension_mismatch(self):
        a = GrayImage.from_array(np.zeros((8, 8)))
        b = GrayImage.from_array(np.zeros((8, 9)))
        with pytest.raises(errors.DimensionMismatch):
            superpose_linear(a, b)
        with pytest.raises(errors.DimensionMismatch):
            superpose_weighted(a, b)


class TestBuildFilteredSet:
    def test_constant_chain(self):
        img = GrayImage.from_array(np.full((64, 64), 0.8))
        fset = build_filtered_set(img, P)
        for member in members(fset):
            assert np.unique(member.pixels).size == 1

    def test_all_members_in_range(self, rng):
        img = GrayImage.from_array(rng.random((128, 128)))
        fset = build_filtered_set(img, P)
        for member in members(fset):
            assert member.pixels.min() >= 0.0
            assert member.pixels.max() <= 1.0

    def test_deterministic(self, rng):
        img = GrayImage.from_array(rng.random((96, 96)))
        a = build_filtered_set(img, P)
        b = build_filtered_set(img, P)
        for ma, mb in zip(members(a), members(b)):
            assert np.array_equal(ma.pixels, mb.pixels)

    def test_params_recorded(self, checker_image):
        fset = build_filtered_set(checker_image, P)
        assert fset.params.lambda_ == 0.21
        assert fset.params.to_json()["lambda"] == 0.21
