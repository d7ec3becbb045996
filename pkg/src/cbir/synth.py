"""Synthetic test corpus: 3 color groups x 3 texture bands.

Each cell combines a dominant-channel base color with a texture overlay whose
patch-energy band is well separated from the other two:

  low      gentle linear gradient (activity ~1e-6)
  average  smooth sinusoidal stripes (activity ~1e-4..1e-2)
  high     two-valued checkerboard (activity ~0.2..0.45)

Amplitudes are chosen so no channel clips, which keeps the channel averages
(and therefore the dominant-channel grouping) exact, and the checkerboard is
a fixed point of 3x3 median filtering, so the bands survive preprocessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .color import ColorGroup
from .errors import InvalidArgumentError, IoError
from .imaging import RgbRaster, encode_png
from .texture import TextureClass

GROUND_TRUTH_FILENAME = "ground_truth.tsv"
IMAGES_SUBDIR = "images"

_GROUP_CHANNEL = {ColorGroup.RED: 0, ColorGroup.GREEN: 1, ColorGroup.BLUE: 2}
_CLASS_ORDER = (TextureClass.LOW, TextureClass.AVERAGE, TextureClass.HIGH)


@dataclass(frozen=True)
class CorpusImage:
    image_id: str
    color_group: ColorGroup
    texture_class: TextureClass


@dataclass(frozen=True)
class CorpusManifest:
    root: Path
    images_dir: Path
    ground_truth_path: Path
    images: tuple[CorpusImage, ...]


def _texture_overlay(tclass: TextureClass, size: int, rng: np.random.Generator) -> np.ndarray:
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    if tclass is TextureClass.LOW:
        ax = rng.uniform(3.0, 8.0)
        ay = rng.uniform(3.0, 8.0)
        ramp_x = 2.0 * x / (size - 1) - 1.0
        ramp_y = 2.0 * y / (size - 1) - 1.0
        # faint wave on top of the ramp: its continuous parameters spread the
        # (tiny) activity indices of smooth images apart
        amplitude = rng.uniform(2.0, 5.0)
        period = rng.uniform(10.0, 18.0)
        theta = rng.uniform(0.0, np.pi)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        wave = (x * np.cos(theta) + y * np.sin(theta)) * (2.0 * np.pi / period)
        return ax * ramp_x + ay * ramp_y + amplitude * np.sin(wave + phase)
    if tclass is TextureClass.AVERAGE:
        amplitude = rng.uniform(25.0, 40.0)
        period = rng.uniform(12.0, 20.0)
        theta = rng.uniform(0.0, np.pi)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        wave = (x * np.cos(theta) + y * np.sin(theta)) * (2.0 * np.pi / period)
        return amplitude * np.sin(wave + phase)
    amplitude = rng.uniform(55.0, 83.0)
    parity = (x.astype(np.int64) + y.astype(np.int64) + int(rng.integers(0, 2))) % 2
    return amplitude * (1.0 - 2.0 * parity)


def make_cell_image(
    group: ColorGroup,
    tclass: TextureClass,
    size: int,
    rng: np.random.Generator,
) -> RgbRaster:
    """One synthetic raster for a (color group, texture class) cell."""
    dominant = _GROUP_CHANNEL[group]
    base = np.empty(3, dtype=np.float64)
    others = [c for c in range(3) if c != dominant]
    base[dominant] = float(rng.integers(140, 171))
    base[others[0]] = float(rng.integers(85, 111))
    base[others[1]] = float(rng.integers(85, 111))

    overlay = _texture_overlay(tclass, size, rng)
    # Small per-image luminance jitter keeps activity indices distinct across
    # the corpus; applied equally to all channels so dominance is unaffected.
    jitter = rng.integers(-2, 3, size=(size, size)).astype(np.float64)
    img = base[None, None, :] + (overlay + jitter)[:, :, None]
    # Base/overlay/jitter ranges guarantee [0, 255] already; the clip is a guard.
    return RgbRaster(np.clip(np.rint(img), 0, 255).astype(np.uint8))


def generate_corpus(
    out_dir: str | Path,
    per_cell: int = 30,
    seed: int = 7,
    size: int = 128,
) -> CorpusManifest:
    """Write the synthetic corpus and its ground-truth file.

    Images land in ``out_dir/images`` as PNG; ground truth maps every image
    to its cell mates (same color group and texture class, self excluded).
    Deterministic for a fixed (per_cell, seed, size).
    """
    if per_cell < 1:
        raise InvalidArgumentError(f"per-cell count must be >= 1, got {per_cell}")
    if size < 32:
        raise InvalidArgumentError(f"image side must be >= 32, got {size}")
    root = Path(out_dir)
    images_dir = root / IMAGES_SUBDIR
    try:
        images_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create corpus directory {images_dir}: {exc}") from exc

    images: list[CorpusImage] = []
    cells: dict[tuple[ColorGroup, TextureClass], list[str]] = {}
    for gi, group in enumerate(ColorGroup):
        for ci, tclass in enumerate(_CLASS_ORDER):
            ids = []
            for i in range(per_cell):
                rng = np.random.default_rng([seed, gi, ci, i])
                raster = make_cell_image(group, tclass, size, rng)
                image_id = f"{group.value.lower()}_{tclass.value.lower()}_{i:03d}.png"
                try:
                    (images_dir / image_id).write_bytes(encode_png(raster))
                except OSError as exc:
                    raise IoError(f"cannot write corpus image {image_id}: {exc}") from exc
                ids.append(image_id)
                images.append(CorpusImage(image_id, group, tclass))
            cells[(group, tclass)] = ids

    gt_path = root / GROUND_TRUTH_FILENAME
    lines = [
        "# synthetic corpus ground truth",
        "# query_id<TAB>comma-separated relevant ids (same color group + texture class)",
    ]
    for image in images:
        mates = [i for i in cells[(image.color_group, image.texture_class)] if i != image.image_id]
        if mates:
            lines.append(f"{image.image_id}\t{','.join(mates)}")
    try:
        gt_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write ground-truth file {gt_path}: {exc}") from exc

    return CorpusManifest(
        root=root,
        images_dir=images_dir,
        ground_truth_path=gt_path,
        images=tuple(images),
    )
