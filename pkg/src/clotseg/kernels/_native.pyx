# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels.

Arithmetic matches ``_ops_py.py`` operation for operation so both
backends return bit-identical arrays (the build disables FP contraction
for the same reason).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "native"


def conv_separable(img, weights):
    cdef double[:, ::1] f = np.ascontiguousarray(img, dtype=np.float64)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t h = f.shape[0], wd = f.shape[1], k = w.shape[0], r = k // 2
    tmp_arr = np.empty((h, wd), dtype=np.float64)
    out_arr = np.empty((h, wd), dtype=np.float64)
    cdef double[:, ::1] tmp = tmp_arr
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t x, y, i, xx, yy
    cdef double s

    for y in range(h):
        for x in range(wd):
            s = 0.0
            for i in range(k):
                xx = x + i - r
                if xx < 0:
                    xx = 0
                elif xx >= wd:
                    xx = wd - 1
                s = s + w[i] * f[y, xx]
            tmp[y, x] = s

    for y in range(h):
        for x in range(wd):
            s = 0.0
            for i in range(k):
                yy = y + i - r
                if yy < 0:
                    yy = 0
                elif yy >= h:
                    yy = h - 1
                s = s + w[i] * tmp[yy, x]
            out[y, x] = s

    return out_arr


cdef inline double _tile_value(const double[:, :, ::1] nodes,
                               const unsigned char[:, ::1] identity,
                               Py_ssize_t ti, Py_ssize_t tj,
                               double v, Py_ssize_t kb, double frac) noexcept nogil:
    cdef double n0
    if identity[ti, tj]:
        return v
    n0 = nodes[ti, tj, kb]
    return n0 + frac * (nodes[ti, tj, kb + 1] - n0)


def clahe_apply(img, nodes, identity, iy0, iy1, fy, ix0, ix1, fx, int bins):
    cdef double[:, ::1] f = np.ascontiguousarray(img, dtype=np.float64)
    cdef double[:, :, ::1] nd = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef unsigned char[:, ::1] ident = np.ascontiguousarray(identity, dtype=np.uint8)
    cdef long[::1] ry0 = np.ascontiguousarray(iy0, dtype=np.int64)
    cdef long[::1] ry1 = np.ascontiguousarray(iy1, dtype=np.int64)
    cdef long[::1] cx0 = np.ascontiguousarray(ix0, dtype=np.int64)
    cdef long[::1] cx1 = np.ascontiguousarray(ix1, dtype=np.int64)
    cdef double[::1] wy = np.ascontiguousarray(fy, dtype=np.float64)
    cdef double[::1] wx = np.ascontiguousarray(fx, dtype=np.float64)
    cdef Py_ssize_t h = f.shape[0], wd = f.shape[1]
    out_arr = np.empty((h, wd), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t x, y, kb, t0, t1, u0, u1
    cdef double v, t, frac, m00, m01, m10, m11, top, bot

    with nogil:
        for y in range(h):
            t0 = ry0[y]
            t1 = ry1[y]
            for x in range(wd):
                u0 = cx0[x]
                u1 = cx1[x]
                v = f[y, x]
                t = v * bins
                kb = <Py_ssize_t>t
                if kb > bins - 1:
                    kb = bins - 1
                frac = t - kb
                m00 = _tile_value(nd, ident, t0, u0, v, kb, frac)
                m01 = _tile_value(nd, ident, t0, u1, v, kb, frac)
                m10 = _tile_value(nd, ident, t1, u0, v, kb, frac)
                m11 = _tile_value(nd, ident, t1, u1, v, kb, frac)
                top = m00 + wx[x] * (m01 - m00)
                bot = m10 + wx[x] * (m11 - m10)
                out[y, x] = top + wy[y] * (bot - top)

    return out_arr


def binary_dilate(mask, dy, dx):
    cdef unsigned char[:, ::1] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef long[::1] oy = np.ascontiguousarray(dy, dtype=np.int64)
    cdef long[::1] ox = np.ascontiguousarray(dx, dtype=np.int64)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1], n = oy.shape[0]
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t x, y, i, yy, xx

    with nogil:
        for y in range(h):
            for x in range(w):
                for i in range(n):
                    yy = y + oy[i]
                    xx = x + ox[i]
                    if 0 <= yy < h and 0 <= xx < w and m[yy, xx]:
                        out[y, x] = 1
                        break

    return out_arr


def binary_erode(mask, dy, dx):
    cdef unsigned char[:, ::1] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef long[::1] oy = np.ascontiguousarray(dy, dtype=np.int64)
    cdef long[::1] ox = np.ascontiguousarray(dx, dtype=np.int64)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1], n = oy.shape[0]
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    cdef Py_ssize_t x, y, i, yy, xx
    cdef bint ok

    with nogil:
        for y in range(h):
            for x in range(w):
                ok = 1
                for i in range(n):
                    yy = y + oy[i]
                    xx = x + ox[i]
                    if yy < 0 or yy >= h or xx < 0 or xx >= w or not m[yy, xx]:
                        ok = 0
                        break
                out[y, x] = ok

    return out_arr


def label_raw(mask):
    """Two-pass 8-connected labeling with union-find."""
    cdef unsigned char[:, ::1] m = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1]
    labels_arr = np.zeros((h, w), dtype=np.int32)
    cdef int[:, ::1] lab = labels_arr
    parent_arr = np.zeros(h * w // 2 + 2, dtype=np.int32)
    cdef int[::1] parent = parent_arr
    cdef Py_ssize_t x, y
    cdef int nxt = 1, a, b, best, root

    for y in range(h):
        for x in range(w):
            if not m[y, x]:
                continue
            best = 0
            # scan the four already-visited 8-neighbours
            if x > 0 and lab[y, x - 1]:
                best = _find(parent, lab[y, x - 1])
            if y > 0:
                if x > 0 and lab[y - 1, x - 1]:
                    root = _find(parent, lab[y - 1, x - 1])
                    best = _merge(parent, best, root)
                if lab[y - 1, x]:
                    root = _find(parent, lab[y - 1, x])
                    best = _merge(parent, best, root)
                if x + 1 < w and lab[y - 1, x + 1]:
                    root = _find(parent, lab[y - 1, x + 1])
                    best = _merge(parent, best, root)
            if best == 0:
                best = nxt
                parent[nxt] = nxt
                nxt += 1
            lab[y, x] = best

    if nxt == 1:
        return labels_arr, 0

    cdef Py_ssize_t i
    cdef int count = 0
    roots_arr = np.zeros(nxt, dtype=np.int32)
    cdef int[::1] roots = roots_arr
    for i in range(1, nxt):
        roots[i] = _find(parent, <int>i)
        if roots[i] == <int>i:
            count += 1

    for y in range(h):
        for x in range(w):
            if lab[y, x]:
                lab[y, x] = roots[lab[y, x]]

    return labels_arr, count


cdef inline int _find(int[::1] parent, int a) noexcept:
    cdef int root = a
    while parent[root] != root:
        root = parent[root]
    cdef int nxt
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


cdef inline int _merge(int[::1] parent, int a, int b) noexcept:
    if a == 0:
        return b
    if b == 0 or a == b:
        return a
    if a < b:
        parent[b] = a
        return a
    parent[a] = b
    return b
