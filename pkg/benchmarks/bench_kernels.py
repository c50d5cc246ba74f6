"""Benchmark the compiled kernels against the pure-numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

Workloads mirror the pipeline's hot path on a 256x256 slice: separable
Gaussian blur, the CLAHE per-pixel blend, the radius-5 disk closing pair,
and 8-connected labeling.  The two backends produce bit-identical output
(verified here as well), so the comparison is purely about speed.
"""

import time

import numpy as np

from clotseg.filters import _blend_tables, _tile_edges, _tile_mappings, gaussian_weights
from clotseg.kernels import _ops_py

try:
    from clotseg.kernels import _native
except ImportError:
    _native = None


def timed(fn, repeats=5):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def workloads():
    rng = np.random.default_rng(0)
    img = rng.random((256, 256))
    weights = gaussian_weights(1.5)

    edges = _tile_edges(256, 8)
    nodes, ident = _tile_mappings(img, edges, edges, 256, 0.01)
    i0, i1, f = _blend_tables(edges, 256)

    mask = (rng.random((256, 256)) < 0.4).astype(np.uint8)
    offs = [(dy, dx) for dy in range(-5, 6) for dx in range(-5, 6)
            if dy * dy + dx * dx <= 25]
    dy = np.array([o[0] for o in offs], dtype=np.int64)
    dx = np.array([o[1] for o in offs], dtype=np.int64)

    return [
        ("gaussian blur 9x9 sep", lambda m: m.conv_separable(img, weights)),
        ("clahe blend 8x8 tiles",
         lambda m: m.clahe_apply(img, nodes, ident, i0, i1, f, i0, i1, f,
                                 256)),
        ("disk-5 dilate", lambda m: m.binary_dilate(mask, dy, dx)),
        ("disk-5 erode", lambda m: m.binary_erode(mask, dy, dx)),
        ("label 8-connected", lambda m: _canonical(m.label_raw(mask)[0])),
    ]


def _canonical(raw):
    """Renumber labels by first raster appearance so both backends'
    (equally valid) internal label choices compare equal."""
    flat = raw.ravel()
    fg = flat > 0
    if not fg.any():
        return raw
    uniq, first = np.unique(flat[fg], return_index=True)
    order = np.argsort(first, kind="stable")
    lut = np.zeros(int(uniq.max()) + 1, dtype=np.int32)
    lut[uniq[order]] = np.arange(1, len(uniq) + 1, dtype=np.int32)
    out = np.zeros_like(flat)
    out[fg] = lut[flat[fg]]
    return out.reshape(raw.shape)


def main():
    print(f"{'kernel':<24} {'python':>10} {'native':>10} {'speedup':>8}")
    print("-" * 56)
    for name, call in workloads():
        t_py, r_py = timed(lambda: call(_ops_py))
        if _native is None:
            print(f"{name:<24} {t_py * 1e3:>8.2f}ms {'n/a':>10}")
            continue
        t_nat, r_nat = timed(lambda: call(_native))
        identical = np.array_equal(np.asarray(r_py), np.asarray(r_nat))
        marker = "" if identical else "  !! outputs differ"
        print(f"{name:<24} {t_py * 1e3:>8.2f}ms {t_nat * 1e3:>8.2f}ms "
              f"{t_py / t_nat:>7.1f}x{marker}")
    if _native is None:
        print("\ncompiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
