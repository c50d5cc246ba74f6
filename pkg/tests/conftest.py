import struct

import numpy as np
import pytest

from clotseg.image_io import GrayImage

EXPLICIT_VR_LE = b"1.2.840.10008.1.2.1\x00"


def _element_short(group, elem, vr, value):
    if len(value) % 2:
        value += b"\x00"
    return struct.pack("<HH2sH", group, elem, vr, len(value)) + value


def _element_long(group, elem, vr, value):
    if len(value) % 2:
        value += b"\x00"
    return struct.pack("<HH2sHI", group, elem, vr, 0, len(value)) + value


def make_dicom(rows, cols, values, bits=16, transfer_syntax=EXPLICIT_VR_LE,
               photometric=b"MONOCHROME2"):
    """Reference Part-10 writer used as the independent oracle for the
    parser: elements are assembled by hand with struct.pack.
    """
    values = np.asarray(values).reshape(rows, cols)
    if bits == 16:
        pixels = values.astype("<u2").tobytes()
    else:
        pixels = values.astype("u1").tobytes()

    meta_body = _element_short(0x0002, 0x0010, b"UI", transfer_syntax)
    meta = _element_short(0x0002, 0x0000, b"UL",
                          struct.pack("<I", len(meta_body))) + meta_body

    dataset = b"".join([
        _element_short(0x0028, 0x0002, b"US", struct.pack("<H", 1)),
        _element_short(0x0028, 0x0004, b"CS", photometric),
        _element_short(0x0028, 0x0010, b"US", struct.pack("<H", rows)),
        _element_short(0x0028, 0x0011, b"US", struct.pack("<H", cols)),
        _element_short(0x0028, 0x0100, b"US", struct.pack("<H", bits)),
        _element_short(0x0028, 0x0103, b"US", struct.pack("<H", 0)),
        _element_long(0x7FE0, 0x0010, b"OW", pixels),
    ])
    return b"\x00" * 128 + b"DICM" + meta + dataset


def make_pgm(width, height, values, maxval=255):
    header = f"P5\n{width} {height}\n{maxval}\n".encode()
    arr = np.asarray(values).reshape(height, width)
    if maxval == 255:
        return header + arr.astype("u1").tobytes()
    return header + arr.astype(">u2").tobytes()


@pytest.fixture
def checker_image():
    """64x64 checkerboard-ish gradient, handy as a generic test image."""
    ys, xs = np.mgrid[0:64, 0:64]
    return GrayImage.from_array(((xs + ys) % 17) / 16.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
