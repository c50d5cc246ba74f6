"""Loading study slices into the canonical normalized representation.

Two sources are supported: a deliberately narrow DICOM Part-10 subset
(explicit-VR little-endian, uncompressed, single-frame monochrome) and
binary PGM (P5).  Both produce a :class:`StudySlice` whose pixels live in
[0, 1].

Normalization conventions, recorded per slice so reports stay
reproducible:

* DICOM: per-slice min-max of the stored values (a constant slice
  normalizes to all zeros).
* PGM: stored value / maxval.  Using the format's declared full range
  (instead of the observed min-max) makes the PGM-16 round trip exact
  for any image, which the test suite relies on.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadHeader,
    BadMagic,
    DimensionMismatch,
    MalformedDicom,
    MissingPixelData,
    MissingPreamble,
    TruncatedPixelData,
    UnsupportedPixelFormat,
    UnsupportedTransferSyntax,
)

EXPLICIT_VR_LITTLE_ENDIAN = "1.2.840.10008.1.2.1"

# VRs whose explicit encoding carries a 4-byte length after 2 reserved bytes
_LONG_VRS = {b"OB", b"OW", b"OF", b"OD", b"OL", b"SQ", b"UC", b"UR", b"UT", b"UN"}


@dataclass(frozen=True)
class GrayImage:
    """Normalized 2-D scalar field; pixels float64 in [0, 1], shape (h, w)."""

    pixels: np.ndarray

    @property
    def width(self):
        return int(self.pixels.shape[1])

    @property
    def height(self):
        return int(self.pixels.shape[0])

    @staticmethod
    def from_array(arr):
        a = np.ascontiguousarray(arr, dtype=np.float64)
        if a.ndim != 2 or a.size == 0:
            raise ValueError("GrayImage requires a non-empty 2-D array")
        if not np.isfinite(a).all():
            raise ValueError("GrayImage pixels must be finite")
        if a.min() < 0.0 or a.max() > 1.0:
            raise ValueError("GrayImage pixels must lie in [0, 1]")
        return GrayImage(a)


@dataclass(frozen=True)
class StudySlice:
    image: GrayImage
    source_id: str
    original_bit_depth: int
    raw_min: int
    raw_max: int


def _normalize_minmax(raw):
    lo = int(raw.min())
    hi = int(raw.max())
    if hi == lo:
        return np.zeros(raw.shape, dtype=np.float64), lo, hi
    return (raw.astype(np.float64) - lo) / float(hi - lo), lo, hi


# --- DICOM subset -------------------------------------------------------------


class _Reader:
    def __init__(self, data, pos=0):
        self.data = data
        self.pos = pos

    def take(self, n):
        if self.pos + n > len(self.data):
            raise MalformedDicom("element runs past end of file")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u16(self):
        b = self.take(2)
        return b[0] | (b[1] << 8)

    def u32(self):
        b = self.take(4)
        return b[0] | (b[1] << 8) | (b[2] << 16) | (b[3] << 24)

    def peek_group(self):
        if self.pos + 2 > len(self.data):
            return None
        b = self.data[self.pos:self.pos + 2]
        return b[0] | (b[1] << 8)

    def element(self):
        """Next explicit-VR little-endian element: (group, elem, vr, value)."""
        group = self.u16()
        elem = self.u16()
        vr = bytes(self.take(2))
        if vr in _LONG_VRS:
            self.take(2)
            length = self.u32()
        else:
            length = self.u16()
        if length == 0xFFFFFFFF:
            raise UnsupportedTransferSyntax(
                "undefined-length element (encapsulated/compressed data)")
        value = self.take(length)
        return group, elem, vr, value


def _us(value):
    if len(value) != 2:
        raise MalformedDicom("US element with bad length")
    return value[0] | (value[1] << 8)


def load_dicom(data, source_id=""):
    """Parse a Part-10 explicit-VR little-endian monochrome file.

    Returns a StudySlice with min-max normalized pixels.
    """
    data = bytes(data)
    if len(data) < 132 or data[128:132] != b"DICM":
        raise MissingPreamble("no DICM marker at offset 128")

    r = _Reader(data, 132)

    # File meta group (0002,xxxx) is always explicit little-endian.
    transfer_syntax = None
    while r.peek_group() == 0x0002:
        _, elem, _, value = r.element()
        if elem == 0x0010:
            transfer_syntax = value.rstrip(b"\x00 ").decode("ascii", "replace")
    if transfer_syntax is None:
        raise MalformedDicom("file meta lacks a TransferSyntaxUID")
    if transfer_syntax != EXPLICIT_VR_LITTLE_ENDIAN:
        raise UnsupportedTransferSyntax(transfer_syntax)

    rows = cols = bits = None
    photometric = None
    pixel_rep = 0
    samples = 1
    frames = 1
    pixel_data = None
    while r.peek_group() is not None:
        group, elem, _, value = r.element()
        if group == 0x0028:
            if elem == 0x0004:
                photometric = value.rstrip(b"\x00 ").decode("ascii", "replace")
            elif elem == 0x0002:
                samples = _us(value)
            elif elem == 0x0008:
                frames = int(value.rstrip(b"\x00 ") or b"1")
            elif elem == 0x0010:
                rows = _us(value)
            elif elem == 0x0011:
                cols = _us(value)
            elif elem == 0x0100:
                bits = _us(value)
            elif elem == 0x0103:
                pixel_rep = _us(value)
        elif group == 0x7FE0 and elem == 0x0010:
            pixel_data = value

    if pixel_data is None:
        raise MissingPixelData("no (7FE0,0010) element")
    if rows is None or cols is None or bits is None:
        raise BadHeader("missing Rows/Columns/BitsAllocated")
    if photometric not in ("MONOCHROME1", "MONOCHROME2"):
        raise UnsupportedPixelFormat(f"photometric {photometric!r}")
    if samples != 1 or frames != 1 or pixel_rep != 0 or bits not in (8, 16):
        raise UnsupportedPixelFormat(
            f"samples={samples} frames={frames} signed={pixel_rep} bits={bits}")

    bytes_per = bits // 8
    expected = rows * cols * bytes_per
    actual = len(pixel_data)
    if actual == expected + 1 and expected % 2 == 1:
        pixel_data = pixel_data[:expected]  # even-length padding byte
    elif actual != expected:
        raise DimensionMismatch(
            f"pixel data is {actual} bytes, expected {expected}")

    dtype = np.dtype("<u2") if bits == 16 else np.dtype("u1")
    raw = np.frombuffer(pixel_data, dtype=dtype).reshape(rows, cols)
    pixels, lo, hi = _normalize_minmax(raw)
    return StudySlice(
        image=GrayImage.from_array(pixels),
        source_id=source_id,
        original_bit_depth=bits,
        raw_min=lo,
        raw_max=hi,
    )


# --- PGM (P5) ------------------------------------------------------------------


def _pgm_tokens(data, count):
    """Read `count` whitespace-separated header tokens after the magic,
    honouring '#' comments.  Returns (tokens, offset just past the single
    whitespace byte that terminates the header)."""
    pos = 2
    tokens = []
    while len(tokens) < count:
        if pos >= len(data):
            raise BadHeader("truncated PGM header")
        c = data[pos:pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise BadHeader("unterminated comment")
            pos = nl + 1
        else:
            end = pos
            while end < len(data) and not data[end:end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise BadHeader("PGM header not terminated by whitespace")
    return tokens, pos + 1


def load_pgm(data, source_id=""):
    """Parse a binary PGM (P5) with maxval 255 or 65535."""
    data = bytes(data)
    if data[:2] != b"P5":
        raise BadMagic("not a binary PGM (P5) file")
    tokens, offset = _pgm_tokens(data, 3)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        raise BadHeader(f"non-numeric PGM header field: {exc}") from None
    if width < 1 or height < 1:
        raise BadHeader(f"bad dimensions {width}x{height}")
    if maxval not in (255, 65535):
        raise BadHeader(f"unsupported maxval {maxval}")

    bytes_per = 1 if maxval == 255 else 2
    need = width * height * bytes_per
    payload = data[offset:offset + need]
    if len(payload) < need:
        raise TruncatedPixelData(
            f"pixel payload is {len(payload)} bytes, expected {need}")

    dtype = np.dtype(">u2") if bytes_per == 2 else np.dtype("u1")
    raw = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    pixels = raw.astype(np.float64) / float(maxval)
    return StudySlice(
        image=GrayImage.from_array(pixels),
        source_id=source_id,
        original_bit_depth=8 * bytes_per,
        raw_min=0,
        raw_max=maxval,
    )


def write_pgm(image, maxval=65535):
    """Serialize a GrayImage as binary PGM; values are rounded to the grid."""
    if maxval not in (255, 65535):
        raise BadHeader(f"unsupported maxval {maxval}")
    header = f"P5\n{image.width} {image.height}\n{maxval}\n".encode("ascii")
    q = np.rint(image.pixels * maxval)
    if maxval == 255:
        body = q.astype(np.uint8).tobytes()
    else:
        body = q.astype(np.uint16).astype(">u2").tobytes()
    return header + body


def load_slice(path):
    """Load a slice from a file path, sniffing DICOM vs PGM content."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) >= 132 and data[128:132] == b"DICM":
        return load_dicom(data, source_id=str(path))
    return load_pgm(data, source_id=str(path))
