"""Minimal 8-bit grayscale PNG encoder (stdlib only).

Used by the HTTP service for slice renderings; fixed zlib settings keep
the bytes deterministic within a process.
"""

import struct
import zlib

import numpy as np


def _chunk(tag, payload):
    raw = tag + payload
    return struct.pack(">I", len(payload)) + raw + struct.pack(
        ">I", zlib.crc32(raw) & 0xFFFFFFFF)


def encode_gray8(array):
    """array: uint8, shape (height, width) -> PNG bytes."""
    a = np.ascontiguousarray(array, dtype=np.uint8)
    h, w = a.shape
    header = struct.pack(">IIBBBBB", w, h, 8, 0, 0, 0, 0)  # grayscale
    raw = b"".join(b"\x00" + a[y].tobytes() for y in range(h))
    return b"".join([
        b"\x89PNG\r\n\x1a\n",
        _chunk(b"IHDR", header),
        _chunk(b"IDAT", zlib.compress(raw, 9)),
        _chunk(b"IEND", b""),
    ])


def gray_image_to_png(image):
    """GrayImage -> 8-bit PNG by rounding value*255."""
    return encode_gray8(np.rint(image.pixels * 255.0).astype(np.uint8))
