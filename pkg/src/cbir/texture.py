"""GLCM texture statistics, patch-energy activity index, and the
Low/Average/High texture classifier.

The co-occurrence matrix is built at a fixed displacement, symmetrized by
adding its transpose, and normalized to sum 1. Image-level features average
the four unit-distance offsets (0, 90, 45, 135 degrees).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import Enum

import numpy as np

from .errors import (
    EmptyGlcmError,
    ImageTooSmallError,
    InsufficientDataError,
    InvalidArgumentError,
    InvariantViolationError,
)
from .imaging import GrayRaster

# Unit-distance displacements at 0, 90, 45 and 135 degrees; with
# symmetrization these cover all eight neighbor directions.
DEFAULT_OFFSETS = ((1, 0), (0, 1), (1, 1), (1, -1))

DEFAULT_LEVELS = 16
DEFAULT_PATCH = 16

_NORMALIZATION_TOL = 1e-6


@dataclass(frozen=True)
class QuantizedRaster:
    """Gray raster reduced to `levels` uniform bins: level = floor(g * L / 256)."""

    data: np.ndarray
    levels: int

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class GlcmMatrix:
    """Normalized symmetric co-occurrence matrix for one displacement."""

    levels: int
    cells: np.ndarray
    offset: tuple[int, int]


@dataclass(frozen=True)
class TextureFeature:
    entropy: float
    contrast: float
    dissimilarity: float
    homogeneity: float
    energy: float
    correlation: float
    mean: float
    variance: float
    std_dev: float

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))


TEXTURE_FIELD_NAMES = tuple(f.name for f in fields(TextureFeature))


class TextureClass(str, Enum):
    LOW = "Low"
    AVERAGE = "Average"
    HIGH = "High"


@dataclass(frozen=True)
class TextureClassifierModel:
    """Activity-index thresholds plus the exponential-MLE rate fitted on the corpus."""

    t_low: float
    t_high: float
    lambda_hat: float


def quantize(img: GrayRaster, levels: int) -> QuantizedRaster:
    """Uniformly map 8-bit gray values onto `levels` bins."""
    if not 2 <= levels <= 256:
        raise InvalidArgumentError(f"levels must lie in [2, 256], got {levels}")
    data = (img.data.astype(np.int32) * levels) >> 8
    return QuantizedRaster(data.astype(np.uint8), levels)


def glcm_counts(q: QuantizedRaster, offset: tuple[int, int]) -> np.ndarray:
    """Raw ordered pair counts at displacement (dx, dy), before symmetrization.

    dx steps along columns, dy along rows; counts[i, j] is the number of
    in-bounds pixel pairs (p, p+offset) with level i at p and j at p+offset.
    """
    dx, dy = offset
    if dx == 0 and dy == 0:
        raise InvalidArgumentError("offset (0, 0) pairs every pixel with itself")
    h, w = q.data.shape
    rows_a = slice(max(0, -dy), h - max(0, dy))
    cols_a = slice(max(0, -dx), w - max(0, dx))
    rows_b = slice(max(0, dy), h + min(0, dy))
    cols_b = slice(max(0, dx), w + min(0, dx))
    a = q.data[rows_a, cols_a]
    b = q.data[rows_b, cols_b]
    if a.size == 0:
        raise EmptyGlcmError(
            f"no pixel pairs at offset ({dx}, {dy}) for a {w}x{h} raster"
        )
    joint = a.astype(np.int64) * q.levels + b.astype(np.int64)
    counts = np.bincount(joint.ravel(), minlength=q.levels * q.levels)
    return counts.reshape(q.levels, q.levels).astype(np.float64)


def glcm(q: QuantizedRaster, offset: tuple[int, int]) -> GlcmMatrix:
    """Symmetrized, normalized co-occurrence matrix at the given displacement."""
    counts = glcm_counts(q, offset)
    sym = counts + counts.T
    cells = sym / sym.sum()
    cells.setflags(write=False)
    return GlcmMatrix(q.levels, cells, (offset[0], offset[1]))


def glcm_features(m: GlcmMatrix) -> TextureFeature:
    """Scalar texture statistics of a normalized GLCM.

    With p(i, j) the cells and mu / sigma^2 the (equal) marginal mean and
    variance: entropy uses log base 2, correlation is defined as 0 when the
    marginal variance vanishes.
    """
    p = np.asarray(m.cells, dtype=np.float64)
    if p.shape != (m.levels, m.levels):
        raise InvariantViolationError(
            f"cells shape {p.shape} does not match levels {m.levels}"
        )
    if np.any(p < 0):
        raise InvariantViolationError("GLCM cells must be nonnegative")
    total = float(p.sum())
    if abs(total - 1.0) > _NORMALIZATION_TOL:
        raise InvariantViolationError(f"GLCM cells must sum to 1, got {total!r}")

    i = np.arange(m.levels, dtype=np.float64)[:, None]
    j = np.arange(m.levels, dtype=np.float64)[None, :]
    diff = i - j

    nz = p[p > 0]
    entropy = float(-(nz * np.log2(nz)).sum())
    contrast = float((diff**2 * p).sum())
    dissimilarity = float((np.abs(diff) * p).sum())
    homogeneity = float((p / (1.0 + diff**2)).sum())
    energy = float((p * p).sum())
    mean = float((i * p).sum())
    variance = float(((i - mean) ** 2 * p).sum())
    std_dev = math.sqrt(variance)
    if variance > 0:
        correlation = float(((i - mean) * (j - mean) * p).sum() / variance)
    else:
        correlation = 0.0
    return TextureFeature(
        entropy=entropy,
        contrast=contrast,
        dissimilarity=dissimilarity,
        homogeneity=homogeneity,
        energy=energy,
        correlation=correlation,
        mean=mean,
        variance=variance,
        std_dev=std_dev,
    )


def image_texture_features(
    img: GrayRaster,
    levels: int = DEFAULT_LEVELS,
    offsets: tuple[tuple[int, int], ...] = DEFAULT_OFFSETS,
) -> TextureFeature:
    """Per-image texture feature: GLCM statistics averaged over `offsets`.

    std_dev is recomputed as sqrt of the averaged variance so the
    std_dev**2 == variance invariant survives averaging.
    """
    q = quantize(img, levels)
    feats = [glcm_features(glcm(q, off)) for off in offsets]
    avg = {
        name: sum(getattr(f, name) for f in feats) / len(feats)
        for name in TEXTURE_FIELD_NAMES
    }
    avg["std_dev"] = math.sqrt(avg["variance"])
    return TextureFeature(**avg)


def texture_activity(img: GrayRaster, patch: int = DEFAULT_PATCH) -> tuple[list[float], float]:
    """Patch energies and their mean, the texture activity index.

    The raster is tiled into non-overlapping patch x patch blocks (ragged
    remainders discarded). Per tile, energy is the mean of
    ((delta gray) / 255)^2 over all horizontal and vertical adjacent in-tile
    pairs; the index is the mean tile energy. Both lie in [0, 1].
    """
    if patch < 2:
        raise InvalidArgumentError(f"patch side must be >= 2, got {patch}")
    th, tw = img.height // patch, img.width // patch
    if th == 0 or tw == 0:
        raise ImageTooSmallError(
            f"raster {img.width}x{img.height} is smaller than one {patch}x{patch} patch"
        )
    g = img.data[: th * patch, : tw * patch].astype(np.float64) / 255.0
    blocks = g.reshape(th, patch, tw, patch)
    horiz = np.diff(blocks, axis=3) ** 2
    vert = np.diff(blocks, axis=1) ** 2
    pairs = 2 * patch * (patch - 1)
    energies = (horiz.sum(axis=(1, 3)) + vert.sum(axis=(1, 3))) / pairs
    flat = [float(e) for e in energies.ravel()]
    return flat, float(np.mean(energies))


def fit_classifier(corpus_indices: list[float]) -> TextureClassifierModel:
    """Calibrate the three-way texture classifier from corpus activity indices.

    lambda_hat is the exponential-distribution MLE 1/mean (inf when the mean
    is 0); the class boundaries are the corpus tertiles (linear-interpolation
    percentiles at 100/3 and 200/3), splitting the corpus into three
    near-equal groups.
    """
    arr = np.asarray(corpus_indices, dtype=np.float64)
    if arr.size < 3:
        raise InsufficientDataError(
            f"classifier calibration needs >= 3 activity indices, got {arr.size}"
        )
    if np.any(arr < 0) or np.any(arr > 1) or not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("activity indices must lie in [0, 1]")
    mean = float(arr.mean())
    lambda_hat = math.inf if mean == 0.0 else 1.0 / mean
    t_low, t_high = np.percentile(arr, [100.0 / 3.0, 200.0 / 3.0])
    return TextureClassifierModel(float(t_low), float(t_high), lambda_hat)


def classify_texture(index: float, model: TextureClassifierModel) -> TextureClass:
    """Three-way split: below t_low is Low, above t_high is High, else Average."""
    if index < model.t_low:
        return TextureClass.LOW
    if index <= model.t_high:
        return TextureClass.AVERAGE
    return TextureClass.HIGH
