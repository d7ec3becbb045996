"""Image decoding, grayscale conversion, noise filtering and fidelity metrics.

Rasters are thin immutable wrappers around uint8 numpy arrays. All functions
are pure; none mutate their inputs.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy import ndimage

from .errors import DecodeError, InvalidArgumentError, UnsupportedFormatError

SUPPORTED_FORMATS = ("PNG", "JPEG")

# BT.601 luma weights; the conventional 8-bit grayscale conversion.
_LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class RgbRaster:
    """8-bit RGB image plane, shape (height, width, 3)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidArgumentError(
                f"RgbRaster requires shape (h, w, 3) with h, w >= 1, got {arr.shape}"
            )
        if arr.dtype != np.uint8:
            if arr.min() < 0 or arr.max() > 255:
                raise InvalidArgumentError("channel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class GrayRaster:
    """8-bit single-plane luminance image, shape (height, width)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidArgumentError(
                f"GrayRaster requires shape (h, w) with h, w >= 1, got {arr.shape}"
            )
        if arr.dtype != np.uint8:
            if arr.min() < 0 or arr.max() > 255:
                raise InvalidArgumentError("gray values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


def decode_image(data: bytes) -> RgbRaster:
    """Decode a PNG or JPEG byte stream into an RgbRaster."""
    try:
        img = Image.open(io.BytesIO(data))
    except UnidentifiedImageError:
        raise DecodeError(
            f"cannot identify image data (read {len(data)} bytes)"
        ) from None
    except OSError as exc:
        raise DecodeError(f"cannot read image data: {exc}") from exc

    if img.format not in SUPPORTED_FORMATS:
        raise UnsupportedFormatError(
            f"unsupported container {img.format!r}; supported: {', '.join(SUPPORTED_FORMATS)}"
        )
    if img.mode in ("I", "I;16", "I;16B", "I;16L", "I;16N", "F"):
        raise UnsupportedFormatError(f"unsupported pixel depth (mode {img.mode!r})")

    try:
        rgb = img.convert("RGB")
        arr = np.asarray(rgb, dtype=np.uint8)
    except OSError as exc:
        # Pillow raises on truncated payloads only once pixel data is pulled.
        raise DecodeError(
            f"truncated or malformed image after byte {len(data)}: {exc}"
        ) from exc
    return RgbRaster(arr)


def encode_png(img: RgbRaster | GrayRaster) -> bytes:
    """Losslessly encode a raster as an 8-bit PNG."""
    if isinstance(img, RgbRaster):
        pil = Image.fromarray(img.data, mode="RGB")
    else:
        pil = Image.fromarray(img.data, mode="L")
    buf = io.BytesIO()
    pil.save(buf, format="PNG")
    return buf.getvalue()


def to_gray(img: RgbRaster) -> GrayRaster:
    """Collapse RGB to luminance: round(0.299 R + 0.587 G + 0.114 B)."""
    lum = img.data.astype(np.float64) @ _LUMA_WEIGHTS
    return GrayRaster(np.clip(np.rint(lum), 0, 255).astype(np.uint8))


def _check_window(img: GrayRaster, window: int) -> None:
    if window % 2 == 0 or window < 3:
        raise InvalidArgumentError(f"filter window must be odd and >= 3, got {window}")
    limit = 2 * min(img.width, img.height) + 1
    if window > limit:
        raise InvalidArgumentError(
            f"filter window {window} exceeds limit {limit} for a "
            f"{img.width}x{img.height} raster"
        )


def median_filter(img: GrayRaster, window: int = 3) -> GrayRaster:
    """Median filter with replicate (edge-clamp) padding.

    Window sizes are odd, so the median over the clamped neighborhood is
    always a member of the window's value multiset.
    """
    _check_window(img, window)
    out = ndimage.median_filter(img.data, size=window, mode="nearest")
    return GrayRaster(out)


def averaging_filter(img: GrayRaster, window: int = 3) -> GrayRaster:
    """Box filter with replicate padding; each output pixel is the rounded mean."""
    _check_window(img, window)
    kernel = np.ones((window, window), dtype=np.int64)
    sums = ndimage.correlate(img.data.astype(np.int64), kernel, mode="nearest")
    # Integer window sums divided once in float: the true mean is never an
    # exact .5 for odd windows, so rounding is unambiguous.
    out = np.rint(sums / (window * window)).astype(np.uint8)
    return GrayRaster(out)


def add_salt_pepper(img: GrayRaster, density: float, seed: int) -> GrayRaster:
    """Corrupt each pixel to 0 or 255 (equal odds) with probability `density`."""
    if not 0.0 <= density <= 1.0:
        raise InvalidArgumentError(f"noise density must lie in [0, 1], got {density}")
    rng = np.random.default_rng(seed)
    shape = img.data.shape
    corrupt = rng.random(shape) < density
    salt = rng.random(shape) < 0.5
    noise = np.where(salt, 255, 0).astype(np.uint8)
    return GrayRaster(np.where(corrupt, noise, img.data))


def psnr(a: GrayRaster, b: GrayRaster) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical rasters."""
    if a.data.shape != b.data.shape:
        raise InvalidArgumentError(
            f"dimension mismatch: {a.data.shape} vs {b.data.shape}"
        )
    diff = a.data.astype(np.float64) - b.data.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)
