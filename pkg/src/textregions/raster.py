"""Grayscale raster handling: PGM/PNG codecs, contrast stretching, inversion.

Images are plain 2-D ``uint8`` numpy arrays (row-major, ``shape == (height,
width)``); binary masks are 2-D ``bool`` arrays of the same layout.  The
validators below are the single place where those conventions are enforced,
so every other module can assume well-formed input.
"""

from __future__ import annotations

import io
import re

import numpy as np
from PIL import Image, UnidentifiedImageError

# ITU-R BT.601 luma weights, applied with round-half-up.
_LUMA_R, _LUMA_G, _LUMA_B = 0.299, 0.587, 0.114

# Outline color used by encode_annotated.
BOX_COLOR = (255, 0, 0)

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class DecodeError(ValueError):
    """Raised for malformed image streams."""


class UnsupportedFormatError(DecodeError):
    """Raised for well-formed streams in an unsupported format or bit depth."""


class BoxBoundsError(ValueError):
    """Raised when a bounding box does not lie within the image frame."""


def validate_gray_image(img) -> np.ndarray:
    """Validate and return ``img`` as a 2-D uint8 grayscale array.

    Accepts any array-like of integers in [0, 255]; raises ``ValueError``
    otherwise.
    """
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D grayscale array, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"image dimensions must be >= 1, got {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"grayscale image must be integer-valued, got dtype {arr.dtype}")
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("grayscale intensities must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return np.ascontiguousarray(arr)


def validate_mask(mask) -> np.ndarray:
    """Validate and return ``mask`` as a 2-D bool array."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D mask, got shape {arr.shape}")
    if arr.dtype != bool:
        arr = arr.astype(bool)
    return np.ascontiguousarray(arr)


def rgb_to_gray(rgb: np.ndarray) -> np.ndarray:
    """Convert an (h, w, 3) uint8 RGB array to grayscale by BT.601 luma."""
    r = rgb[..., 0].astype(np.float64)
    g = rgb[..., 1].astype(np.float64)
    b = rgb[..., 2].astype(np.float64)
    luma = _LUMA_R * r + _LUMA_G * g + _LUMA_B * b
    return np.floor(luma + 0.5).astype(np.uint8)  # round half up


def _decode_pgm(data: bytes) -> np.ndarray:
    # Binary PGM (P5): "P5" <w> <h> <maxval> then w*h raw bytes.  Header
    # tokens are separated by whitespace; '#' starts a comment to end-of-line.
    pos = 2  # past "P5"
    tokens = []
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            nl = data.find(b"\n", pos)
            if nl == -1:
                raise DecodeError(f"PGM header comment unterminated at offset {pos}")
            pos = nl + 1
            continue
        m = re.match(rb"\d+", data[pos:])
        if not m:
            raise DecodeError(f"PGM header truncated or non-numeric at offset {pos}")
        tokens.append(int(m.group()))
        pos += m.end()
    width, height, maxval = tokens
    if width < 1 or height < 1:
        raise DecodeError(f"PGM dimensions must be positive, got {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormatError(f"PGM maxval {maxval} unsupported (only 8-bit, maxval 255)")
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise DecodeError(f"PGM header missing whitespace before pixel data at offset {pos}")
    pos += 1
    expected = width * height
    pixels = data[pos : pos + expected]
    if len(pixels) != expected:
        raise DecodeError(
            f"PGM pixel data truncated at offset {pos + len(pixels)}: "
            f"expected {expected} bytes, got {len(pixels)}"
        )
    return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width).copy()


def _decode_png(data: bytes) -> np.ndarray:
    try:
        with Image.open(io.BytesIO(data)) as im:
            im.load()
            mode = im.mode
            if mode == "L":
                return np.asarray(im, dtype=np.uint8).copy()
            if mode == "RGB":
                return rgb_to_gray(np.asarray(im, dtype=np.uint8))
            raise UnsupportedFormatError(
                f"PNG mode {mode!r} unsupported (only 8-bit grayscale or RGB)"
            )
    except UnidentifiedImageError as exc:
        raise DecodeError(f"malformed PNG stream: {exc}") from exc
    except OSError as exc:
        raise DecodeError(f"malformed PNG stream: {exc}") from exc


def decode_image(data: bytes) -> np.ndarray:
    """Decode PNG (8-bit gray or RGB) or binary PGM (P5) bytes to grayscale.

    RGB inputs are converted with BT.601 luma weights rounded half-up; gray
    inputs pass through untouched.
    """
    if data.startswith(_PNG_MAGIC):
        return _decode_png(data)
    if data.startswith(b"P5"):
        return _decode_pgm(data)
    head = data[:8]
    raise UnsupportedFormatError(f"unrecognized image format (leading bytes {head!r})")


def encode_pgm(img: np.ndarray) -> bytes:
    """Encode a grayscale image as binary PGM (P5, maxval 255)."""
    img = validate_gray_image(img)
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()


def encode_png(img: np.ndarray) -> bytes:
    """Encode a grayscale image as an 8-bit grayscale PNG."""
    img = validate_gray_image(img)
    buf = io.BytesIO()
    Image.fromarray(img, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def contrast_stretch(img: np.ndarray, k: float = 2.0) -> np.ndarray:
    """Stretch contrast so the window mean +/- k*stddev spans [0, 255].

    Uses the population standard deviation; a zero-variance image is returned
    unchanged.  The remapping is linear with clamping at both ends, so pixel
    ordering is preserved.
    """
    img = validate_gray_image(img)
    if k <= 0:
        raise ValueError(f"stretch multiplier k must be > 0, got {k}")
    values = img.astype(np.float64)
    mean = values.mean()
    std = values.std()
    if std == 0.0:
        return img.copy()
    lo = mean - k * std
    hi = mean + k * std
    stretched = (values - lo) * (255.0 / (hi - lo))
    return np.clip(np.floor(stretched + 0.5), 0.0, 255.0).astype(np.uint8)


def invert(img: np.ndarray) -> np.ndarray:
    """Map every pixel p to 255 - p."""
    img = validate_gray_image(img)
    return (255 - img.astype(np.int16)).astype(np.uint8)


def encode_annotated(img: np.ndarray, boxes) -> bytes:
    """Encode the image as RGB PNG with 1-pixel box outlines drawn on it.

    ``boxes`` is an iterable of (x, y, width, height) tuples; each must lie
    within the image frame or BoxBoundsError is raised naming the box.
    """
    img = validate_gray_image(img)
    h, w = img.shape
    rgb = np.repeat(img[:, :, None], 3, axis=2)
    for box in boxes:
        x, y, bw, bh = int(box[0]), int(box[1]), int(box[2]), int(box[3])
        if bw < 1 or bh < 1 or x < 0 or y < 0 or x + bw > w or y + bh > h:
            raise BoxBoundsError(
                f"box (x={x}, y={y}, width={bw}, height={bh}) outside {w}x{h} image"
            )
        rgb[y, x : x + bw] = BOX_COLOR
        rgb[y + bh - 1, x : x + bw] = BOX_COLOR
        rgb[y : y + bh, x] = BOX_COLOR
        rgb[y : y + bh, x + bw - 1] = BOX_COLOR
    buf = io.BytesIO()
    Image.fromarray(rgb, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()
