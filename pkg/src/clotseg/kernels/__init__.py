"""Backend dispatch for the hot kernels.

The compiled extension (``clotseg.kernels._native``) is preferred when it
imported cleanly; otherwise the numpy fallback is used.  Both produce
bit-identical output.  Set ``CLOTSEG_BACKEND=python`` or ``native`` to
force one (forcing ``native`` raises if the extension is unavailable).
"""

import os

import numpy as np

from . import _ops_py

_requested = os.environ.get("CLOTSEG_BACKEND", "auto").lower()

if _requested == "python":
    _impl = _ops_py
elif _requested == "native":
    from . import _native as _impl
else:
    try:
        from . import _native as _impl
    except ImportError:
        _impl = _ops_py


def backend_name():
    return _impl.BACKEND


def conv_separable(img, weights):
    return _impl.conv_separable(img, weights)


def clahe_apply(img, nodes, identity, iy0, iy1, fy, ix0, ix1, fx, bins):
    return _impl.clahe_apply(img, nodes, identity, iy0, iy1, fy, ix0, ix1,
                             fx, bins)


def binary_dilate(mask, dy, dx):
    return _impl.binary_dilate(mask, dy, dx)


def binary_erode(mask, dy, dx):
    return _impl.binary_erode(mask, dy, dx)


def label_components(mask):
    """8-connected labeling, canonically numbered.

    Components are numbered 1..n in raster order of their first pixel, so
    the result is independent of the backend's internal label choices.
    """
    raw, count = _impl.label_raw(mask)
    if count == 0:
        return np.zeros_like(raw), 0
    flat = raw.ravel()
    fg = flat > 0
    vals = flat[fg]
    uniq, first = np.unique(vals, return_index=True)
    order = np.argsort(first, kind="stable")
    lut = np.zeros(int(uniq.max()) + 1, dtype=np.int32)
    lut[uniq[order]] = np.arange(1, len(uniq) + 1, dtype=np.int32)
    out = np.zeros_like(flat)
    out[fg] = lut[vals]
    return out.reshape(raw.shape), len(uniq)
