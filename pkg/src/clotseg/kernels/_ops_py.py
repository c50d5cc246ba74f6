"""Pure-numpy implementations of the hot kernels.

These mirror the compiled extension in ``_native.pyx`` operation for
operation.  The arithmetic is arranged so that both backends execute the
same sequence of IEEE-754 double operations per output element, which
makes their results bit-identical; ``tests/test_kernels.py`` enforces
this whenever the extension is importable.
"""

import numpy as np

BACKEND = "python"


def conv_separable(img, weights):
    """Separable correlation with an odd symmetric kernel, replicated edges.

    Horizontal pass first, then vertical, accumulating taps in index order.
    """
    img = np.ascontiguousarray(img, dtype=np.float64)
    w = np.ascontiguousarray(weights, dtype=np.float64)
    h, wd = img.shape
    k = w.shape[0]
    r = k // 2

    pad = np.pad(img, ((0, 0), (r, r)), mode="edge")
    tmp = np.zeros_like(img)
    for i in range(k):
        tmp += w[i] * pad[:, i:i + wd]

    pad = np.pad(tmp, ((r, r), (0, 0)), mode="edge")
    out = np.zeros_like(img)
    for i in range(k):
        out += w[i] * pad[i:i + h, :]
    return out


def clahe_apply(img, nodes, identity, iy0, iy1, fy, ix0, ix1, fx, bins):
    """Blend per-tile piecewise-linear equalization mappings over the image.

    ``nodes`` holds, per tile, the mapping values at the ``bins + 1`` bin
    boundaries.  Tiles flagged in ``identity`` map each value to itself
    (the degenerate-histogram convention).  Blending uses the difference
    form of the lerp so equal corner mappings reproduce their value
    exactly.
    """
    img = np.ascontiguousarray(img, dtype=np.float64)
    t = img * bins
    kb = np.minimum(t.astype(np.int64), bins - 1)
    frac = t - kb

    ti0 = iy0[:, None]
    ti1 = iy1[:, None]
    tj0 = ix0[None, :]
    tj1 = ix1[None, :]

    def tile_map(ti, tj):
        n0 = nodes[ti, tj, kb]
        n1 = nodes[ti, tj, kb + 1]
        mapped = n0 + frac * (n1 - n0)
        return np.where(identity[ti, tj], img, mapped)

    m00 = tile_map(ti0, tj0)
    m01 = tile_map(ti0, tj1)
    m10 = tile_map(ti1, tj0)
    m11 = tile_map(ti1, tj1)

    fxr = fx[None, :]
    fyr = fy[:, None]
    top = m00 + fxr * (m01 - m00)
    bot = m10 + fxr * (m11 - m10)
    return top + fyr * (bot - top)


def _padded(mask, r):
    h, w = mask.shape
    pad = np.zeros((h + 2 * r, w + 2 * r), dtype=np.uint8)
    pad[r:r + h, r:r + w] = mask
    return pad


def binary_dilate(mask, dy, dx):
    """out[p] = 1 iff some offset lands on a set in-bounds pixel."""
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    h, w = mask.shape
    r = int(max(np.max(np.abs(dy)), np.max(np.abs(dx)), 1))
    pad = _padded(mask, r)
    out = np.zeros_like(mask)
    for oy, ox in zip(dy, dx):
        out |= pad[r + oy:r + oy + h, r + ox:r + ox + w]
    return out


def binary_erode(mask, dy, dx):
    """out[p] = 1 iff every offset lands on a set pixel; outside counts unset."""
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    h, w = mask.shape
    r = int(max(np.max(np.abs(dy)), np.max(np.abs(dx)), 1))
    pad = _padded(mask, r)
    out = np.ones_like(mask)
    for oy, ox in zip(dy, dx):
        out &= pad[r + oy:r + oy + h, r + ox:r + ox + w]
    return out


def label_raw(mask):
    """8-connected labeling via per-row runs and union-find.

    Returns an int32 label image (labels arbitrary but positive) and the
    number of components.  Canonicalization happens in the dispatcher.
    """
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    parent = [0]

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    prev_runs = []
    next_label = 1
    for y in range(h):
        row = mask[y]
        if not row.any():
            prev_runs = []
            continue
        padded = np.empty(w + 2, dtype=bool)
        padded[0] = padded[-1] = False
        padded[1:-1] = row
        edges = np.flatnonzero(padded[1:] != padded[:-1])
        runs = []
        for s, e in zip(edges[::2], edges[1::2]):
            lab = 0
            # 8-connectivity: the run [s, e) touches a previous-row run
            # [ps, pe) iff ps <= e and pe >= s.
            for ps, pe, plab in prev_runs:
                if ps <= e and pe >= s:
                    root = find(plab)
                    if lab == 0:
                        lab = root
                    elif root != lab:
                        parent[root] = find(lab)
                if ps > e:
                    break
            if lab == 0:
                lab = next_label
                parent.append(lab)
                next_label += 1
            labels[y, s:e] = lab
            runs.append((int(s), int(e), lab))
        prev_runs = runs

    if next_label == 1:
        return labels, 0

    roots = np.fromiter((find(i) for i in range(next_label)), dtype=np.int32,
                        count=next_label)
    labels = roots[labels]
    count = len(np.unique(roots[1:]))
    return labels, count
