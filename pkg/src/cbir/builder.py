"""Two-pass corpus ingestion: extract raw features, fit the corpus models,
then materialize index entries."""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .color import ColorFeature, ColorGroup, channel_averages, dominant_channel
from .config import EngineConfig
from .errors import CbirError, InsufficientCorpusError, IoError
from .fcm import fcm_fit
from .imaging import decode_image, median_filter, to_gray
from .retrieval import (
    FcmGroupModel,
    Index,
    IndexEntry,
    fit_normalizer,
    normalize,
    raw_feature_vector,
)
from .texture import (
    TextureFeature,
    classify_texture,
    fit_classifier,
    image_texture_features,
    texture_activity,
)


@dataclass(frozen=True)
class SkippedFile:
    path: str
    reason: str


@dataclass(frozen=True)
class BuildResult:
    index: Index
    skipped: tuple[SkippedFile, ...]


@dataclass(frozen=True)
class _RawImage:
    image_id: str
    source_path: str
    color: ColorFeature
    color_group: ColorGroup
    texture: TextureFeature
    activity_index: float
    raw_vector: np.ndarray


def _extract(path: Path, image_id: str, config: EngineConfig) -> _RawImage:
    raster = decode_image(path.read_bytes())
    color = channel_averages(raster)
    group = dominant_channel(color)
    gray = to_gray(raster)
    if config.preprocess_enabled:
        gray = median_filter(gray, config.preprocess_window)
    texture = image_texture_features(gray, levels=config.glcm_levels)
    _, activity = texture_activity(gray, patch=config.glcm_patch)
    return _RawImage(
        image_id=image_id,
        source_path=str(path),
        color=color,
        color_group=group,
        texture=texture,
        activity_index=activity,
        raw_vector=raw_feature_vector(color, texture),
    )


def build_index(image_dir: str | Path, config: EngineConfig) -> BuildResult:
    """Build an index over every decodable image under `image_dir`.

    Pass 1 extracts per-image raw features and activity indices; the texture
    classifier, feature normalizer and per-color-group FCM models are then
    fitted; pass 2 materializes the entries. Files that cannot be decoded or
    are too small to featurize are skipped and reported, not fatal.
    Deterministic for fixed (files, config) apart from the build timestamp.
    """
    root = Path(image_dir)
    if not root.is_dir():
        raise IoError(f"image directory {root} does not exist or is not a directory")
    try:
        paths = sorted(
            (p for p in root.rglob("*") if p.is_file()),
            key=lambda p: p.relative_to(root).as_posix(),
        )
    except OSError as exc:
        raise IoError(f"cannot read image directory {root}: {exc}") from exc

    raws: list[_RawImage] = []
    skipped: list[SkippedFile] = []
    for path in paths:
        image_id = path.relative_to(root).as_posix()
        try:
            raws.append(_extract(path, image_id, config))
        except CbirError as exc:
            skipped.append(SkippedFile(path=str(path), reason=f"{exc.code}: {exc}"))
        except OSError as exc:
            skipped.append(SkippedFile(path=str(path), reason=f"io: {exc}"))

    if len(raws) < 3:
        raise InsufficientCorpusError(
            f"need >= 3 decodable images to build an index, found {len(raws)} "
            f"in {root} ({len(skipped)} skipped)"
        )
    raws.sort(key=lambda r: r.image_id)

    classifier = fit_classifier([r.activity_index for r in raws])
    normalizer = fit_normalizer(np.stack([r.raw_vector for r in raws]))
    vectors = {r.image_id: normalize(r.raw_vector, normalizer) for r in raws}

    fcm_models: dict[ColorGroup, FcmGroupModel] = {}
    assignments: dict[str, tuple[int, np.ndarray]] = {}
    for group in ColorGroup:
        members = [r for r in raws if r.color_group == group]
        if not members:
            continue
        points = np.stack([vectors[r.image_id] for r in members])
        c = min(config.fcm_c, len(members))
        model = fcm_fit(
            points,
            c=c,
            m=config.fcm_m,
            eps=config.fcm_eps,
            max_iter=config.fcm_max_iter,
            seed=config.fcm_seed,
        )
        fcm_models[group] = FcmGroupModel(
            centroids=model.centroids,
            m=model.m,
            objective=model.objective,
            iterations=model.iterations,
            converged=model.converged,
        )
        for row, raw in zip(model.memberships, members):
            assignments[raw.image_id] = (int(np.argmax(row)), row)

    entries = []
    for raw in raws:
        cluster, memberships = assignments[raw.image_id]
        entries.append(
            IndexEntry(
                image_id=raw.image_id,
                source_path=raw.source_path,
                color=raw.color,
                color_group=raw.color_group,
                texture=raw.texture,
                texture_class=classify_texture(raw.activity_index, classifier),
                activity_index=raw.activity_index,
                fcm_cluster=cluster,
                fcm_memberships=memberships,
                vector=vectors[raw.image_id],
            )
        )

    index = Index(
        config=config,
        normalizer=normalizer,
        classifier=classifier,
        fcm_models=fcm_models,
        entries=tuple(entries),
        build_timestamp=int(time.time()),
    )
    return BuildResult(index=index, skipped=tuple(skipped))
