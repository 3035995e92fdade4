"""Image I/O and global statistics.

Every stage of the pipeline works on float64 RGB arrays of shape
(height, width, 3) with channel values in [0, 1]. Grayscale maps derived
from an image (luminance, saturation, texture, weights) are 2-D float64
arrays with the same height and width.
"""

from __future__ import annotations

import os

import cv2
import numpy as np

# Rec. 601 luma coefficients, used wherever a single intensity channel is
# needed (CLAHE, SSIM).
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

HISTOGRAM_BINS = 256

_CV2_READ_EXTENSIONS = {".png", ".jpg", ".jpeg"}
_PPM_EXTENSIONS = {".ppm", ".pnm"}


def validate_image(img) -> np.ndarray:
    """Check the RGB image invariants and return the data as float64.

    Raises ValueError for anything that is not a finite (H, W, 3) array
    with values in [0, 1] and at least one pixel.
    """
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an array of shape (height, width, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image must contain at least one pixel")
    if not np.isfinite(arr).all():
        raise ValueError("image contains NaN or Inf values")
    lo, hi = float(arr.min()), float(arr.max())
    if lo < 0.0 or hi > 1.0:
        raise ValueError(f"channel values must lie in [0, 1], got range [{lo}, {hi}]")
    return arr


def load_image(path) -> np.ndarray:
    """Load a PNG, JPEG, or binary PPM file as a normalized RGB array.

    Integer samples are divided by the maximum code value of their bit
    depth (255 or 65535), grayscale data is replicated to three channels,
    and an alpha channel, if present, is dropped.
    """
    path = str(path)
    if not os.path.isfile(path):
        raise IOError(f"no such file: {path}")
    ext = os.path.splitext(path)[1].lower()
    if ext in _PPM_EXTENSIONS:
        return _read_ppm(path)
    if ext not in _CV2_READ_EXTENSIONS:
        raise IOError(f"unsupported image format: {path}")
    raw = cv2.imread(path, cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise IOError(f"cannot decode image file: {path}")
    if raw.size == 0:
        raise IOError(f"image has zero dimension: {path}")
    if raw.dtype == np.uint8:
        scale = 255.0
    elif raw.dtype == np.uint16:
        scale = 65535.0
    else:
        raise IOError(f"unsupported sample type {raw.dtype}: {path}")
    arr = raw.astype(np.float64) / scale
    if arr.ndim == 2:
        arr = np.repeat(arr[:, :, None], 3, axis=2)
    elif arr.shape[2] == 4:
        arr = arr[:, :, :3][:, :, ::-1]  # BGRA -> RGB
    elif arr.shape[2] == 3:
        arr = arr[:, :, ::-1]  # BGR -> RGB
    else:
        raise IOError(f"unsupported channel count {arr.shape[2]}: {path}")
    return np.ascontiguousarray(arr)


def save_image(img, path) -> None:
    """Write an RGB image as an 8-bit PNG or binary PPM, chosen by extension.

    Channels are quantized with round(v * 255) (ties to even), so a
    save/load round trip is accurate to 1/510 per channel.
    """
    arr = validate_image(img)
    path = str(path)
    ext = os.path.splitext(path)[1].lower()
    codes = np.rint(arr * 255.0).astype(np.uint8)
    if ext in _PPM_EXTENSIONS:
        _write_ppm(codes, path)
    elif ext == ".png":
        if not cv2.imwrite(path, np.ascontiguousarray(codes[:, :, ::-1])):
            raise IOError(f"cannot write image file: {path}")
    else:
        raise ValueError(f"unsupported output extension: {path}")


def luminance(img) -> np.ndarray:
    """Rec. 601 luminance plane of an RGB image, same (H, W) shape."""
    arr = np.asarray(img, dtype=np.float64)
    r, g, b = LUMA_WEIGHTS
    # G + r*(R-G) + b*(B-G) equals the weighted sum but is exact on gray
    # pixels, where coefficient rounding would otherwise shift the value.
    return arr[:, :, 1] + r * (arr[:, :, 0] - arr[:, :, 1]) + b * (arr[:, :, 2] - arr[:, :, 1])


def mean_intensity(img) -> float:
    """Arithmetic mean over all pixels and all three channels."""
    return float(np.mean(np.asarray(img, dtype=np.float64)))


def intensity_stddev(img) -> float:
    """Population standard deviation over all channel samples."""
    return float(np.std(np.asarray(img, dtype=np.float64)))


def channel_histogram(img) -> np.ndarray:
    """256-bin histogram per channel, returned as an int64 (3, 256) array.

    Bin index is floor(v * 256) with the top edge folded into bin 255, so
    v == 1.0 lands in the last bin. Each row sums to the pixel count.
    """
    arr = np.asarray(img, dtype=np.float64)
    idx = np.minimum((arr * HISTOGRAM_BINS).astype(np.int64), HISTOGRAM_BINS - 1)
    hist = np.empty((3, HISTOGRAM_BINS), dtype=np.int64)
    for c in range(3):
        hist[c] = np.bincount(idx[:, :, c].ravel(), minlength=HISTOGRAM_BINS)
    return hist


_PPM_WHITESPACE = b" \t\r\n\x0b\x0c"


def _ppm_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        if data[pos:pos + 1] in (b"#",):
            while pos < n and data[pos:pos + 1] != b"\n":
                pos += 1
        elif data[pos] in _PPM_WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _PPM_WHITESPACE:
        pos += 1
    if start == pos:
        raise IOError("truncated PPM header")
    return data[start:pos], pos


def _read_ppm(path: str) -> np.ndarray:
    with open(path, "rb") as f:
        data = f.read()
    try:
        magic, pos = _ppm_token(data, 0)
        if magic != b"P6":
            raise IOError(f"not a binary PPM (P6) file: {path}")
        fields = []
        for _ in range(3):
            tok, pos = _ppm_token(data, pos)
            fields.append(int(tok))
        width, height, maxval = fields
    except (ValueError, IOError) as exc:
        raise IOError(f"cannot parse PPM header: {path}") from exc
    if width < 1 or height < 1:
        raise IOError(f"image has zero dimension: {path}")
    if not 0 < maxval < 65536:
        raise IOError(f"PPM maxval {maxval} out of range: {path}")
    pos += 1  # single whitespace byte separates header and samples
    count = width * height * 3
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
    if len(data) - pos < count * dtype.itemsize:
        raise IOError(f"truncated PPM pixel data: {path}")
    samples = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
    return samples.reshape(height, width, 3).astype(np.float64) / maxval


def _write_ppm(codes: np.ndarray, path: str) -> None:
    height, width = codes.shape[:2]
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as f:
            f.write(header)
            f.write(codes.tobytes())
    except OSError as exc:
        raise IOError(f"cannot write image file: {path}") from exc
