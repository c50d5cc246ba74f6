"""Backend equivalence: the compiled kernels must reproduce the numpy
fallback bit for bit."""

import numpy as np
import pytest

from clotseg.filters import _blend_tables, _tile_edges, _tile_mappings, gaussian_weights
from clotseg.kernels import _ops_py, backend_name, label_components

native = pytest.importorskip("clotseg.kernels._native",
                             reason="compiled extension not built")


def disk(radius):
    offs = [(dy, dx)
            for dy in range(-radius, radius + 1)
            for dx in range(-radius, radius + 1)
            if dy * dy + dx * dx <= radius * radius]
    return (np.array([o[0] for o in offs], dtype=np.int64),
            np.array([o[1] for o in offs], dtype=np.int64))


def test_backend_is_native_when_built():
    assert backend_name() in ("native", "python")


@pytest.mark.parametrize("shape", [(64, 64), (97, 53), (8, 200)])
def test_conv_bitwise_equal(rng, shape):
    img = rng.random(shape)
    w = gaussian_weights(1.5)
    assert np.array_equal(_ops_py.conv_separable(img, w),
                          native.conv_separable(img, w))


def test_clahe_bitwise_equal(rng):
    img = rng.random((128, 96))
    edges_y = _tile_edges(128, 8)
    edges_x = _tile_edges(96, 6)
    nodes, ident = _tile_mappings(img, edges_y, edges_x, 256, 0.01)
    iy0, iy1, fy = _blend_tables(edges_y, 128)
    ix0, ix1, fx = _blend_tables(edges_x, 96)
    args = (img, nodes, ident, iy0, iy1, fy, ix0, ix1, fx, 256)
    assert np.array_equal(_ops_py.clahe_apply(*args),
                          native.clahe_apply(*args))


def test_clahe_identity_tiles_bitwise_equal(rng):
    # force a mix of identity and LUT tiles
    img = rng.random((64, 64))
    img[:32] = 0.25
    edges = _tile_edges(64, 4)
    nodes, ident = _tile_mappings(img, edges, edges, 64, 0.02)
    assert ident.any() and not ident.all()
    i0, i1, f = _blend_tables(edges, 64)
    args = (img, nodes, ident, i0, i1, f, i0, i1, f, 64)
    assert np.array_equal(_ops_py.clahe_apply(*args),
                          native.clahe_apply(*args))


@pytest.mark.parametrize("radius", [1, 3, 5])
def test_morphology_bitwise_equal(rng, radius):
    dy, dx = disk(radius)
    for density in (0.1, 0.5, 0.9):
        mask = (rng.random((72, 64)) < density).astype(np.uint8)
        assert np.array_equal(_ops_py.binary_dilate(mask, dy, dx),
                              native.binary_dilate(mask, dy, dx))
        assert np.array_equal(_ops_py.binary_erode(mask, dy, dx),
                              native.binary_erode(mask, dy, dx))


def test_labeling_canonical_equal(rng, monkeypatch):
    import clotseg.kernels as K
    for density in (0.2, 0.45, 0.7):
        mask = rng.random((80, 90)) < density
        monkeypatch.setattr(K, "_impl", _ops_py)
        lab_py, n_py = label_components(mask)
        monkeypatch.setattr(K, "_impl", native)
        lab_nat, n_nat = label_components(mask)
        assert n_py == n_nat
        assert np.array_equal(lab_py, lab_nat)


def test_backend_env_override(monkeypatch):
    import importlib
    import clotseg.kernels as K
    monkeypatch.setenv("CLOTSEG_BACKEND", "python")
    mod = importlib.reload(K)
    assert mod.backend_name() == "python"
    monkeypatch.delenv("CLOTSEG_BACKEND")
    importlib.reload(mod)
