"""Canonical index-file persistence.

The index serializes to human-readable JSON with sorted keys and a fixed
layout, so rebuilding from identical inputs is byte-identical apart from the
build timestamp, and load followed by save is the identity.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .color import ColorFeature, ColorGroup
from .config import config_from_dict, config_to_dict
from .errors import (
    CbirError,
    CorruptIndexError,
    IncompatibleVersionError,
    InvariantViolationError,
    IoError,
)
from .retrieval import (
    FEATURE_NAMES,
    INDEX_FORMAT_VERSION,
    FcmGroupModel,
    Index,
    IndexEntry,
    NormStats,
)
from .texture import TextureClass, TextureClassifierModel, TextureFeature

_MEMBERSHIP_TOL = 1e-9


def _floats(values) -> list[float]:
    return [float(v) for v in values]


def index_to_dict(index: Index) -> dict:
    return {
        "format_version": index.format_version,
        "build_timestamp": int(index.build_timestamp),
        "config_echo": config_to_dict(index.config),
        "feature_order": list(FEATURE_NAMES),
        "normalizer": {
            "mean": _floats(index.normalizer.mean),
            "std": _floats(index.normalizer.std),
        },
        "classifier": {
            "t_low": float(index.classifier.t_low),
            "t_high": float(index.classifier.t_high),
            "lambda_hat": float(index.classifier.lambda_hat),
        },
        "fcm_models": {
            group.value: {
                "centroids": [_floats(row) for row in model.centroids],
                "m": float(model.m),
                "objective": float(model.objective),
                "iterations": int(model.iterations),
                "converged": bool(model.converged),
            }
            for group, model in sorted(index.fcm_models.items(), key=lambda kv: kv[0].value)
        },
        "entries": [
            {
                "image_id": e.image_id,
                "source_path": e.source_path,
                "color": _floats(e.color.as_tuple()),
                "color_group": e.color_group.value,
                "texture": {
                    "entropy": float(e.texture.entropy),
                    "contrast": float(e.texture.contrast),
                    "dissimilarity": float(e.texture.dissimilarity),
                    "homogeneity": float(e.texture.homogeneity),
                    "energy": float(e.texture.energy),
                    "correlation": float(e.texture.correlation),
                    "mean": float(e.texture.mean),
                    "variance": float(e.texture.variance),
                    "std_dev": float(e.texture.std_dev),
                },
                "texture_class": e.texture_class.value,
                "activity_index": float(e.activity_index),
                "fcm_cluster": int(e.fcm_cluster),
                "fcm_memberships": _floats(e.fcm_memberships),
                "vector": _floats(e.vector),
            }
            for e in index.entries
        ],
    }


def index_to_json(index: Index) -> str:
    return json.dumps(index_to_dict(index), sort_keys=True, indent=2) + "\n"


def save_index(index: Index, path: str | Path) -> None:
    if not index.entries:
        raise InvariantViolationError("refusing to save an index with no entries")
    try:
        Path(path).write_text(index_to_json(index), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write index file {path}: {exc}") from exc


def _need(doc: dict, field: str, context: str = "index"):
    if field not in doc:
        raise CorruptIndexError(f"{context} is missing field {field!r}")
    return doc[field]


def _check_finite(values, field: str):
    try:
        arr = np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError):
        raise CorruptIndexError(f"field {field!r} is not a numeric array") from None
    if not np.all(np.isfinite(arr)):
        raise CorruptIndexError(f"field {field!r} contains non-finite values")
    return arr


def _parse_entry(raw: dict, position: int, n_clusters: dict) -> IndexEntry:
    ctx = f"entries[{position}]"
    image_id = _need(raw, "image_id", ctx)
    if not isinstance(image_id, str) or not image_id:
        raise CorruptIndexError(f"{ctx}: image_id must be a non-empty string")

    color_values = _check_finite(_need(raw, "color", ctx), f"{ctx}.color")
    if color_values.shape != (3,) or color_values.min() < 0 or color_values.max() > 255:
        raise CorruptIndexError(f"{ctx}: color averages must be 3 values in [0, 255]")

    try:
        group = ColorGroup(_need(raw, "color_group", ctx))
    except ValueError:
        raise CorruptIndexError(f"{ctx}: invalid color_group {raw.get('color_group')!r}") from None
    try:
        tclass = TextureClass(_need(raw, "texture_class", ctx))
    except ValueError:
        raise CorruptIndexError(f"{ctx}: invalid texture_class {raw.get('texture_class')!r}") from None

    texture_raw = _need(raw, "texture", ctx)
    try:
        texture = TextureFeature(**{k: float(texture_raw[k]) for k in texture_raw})
    except TypeError:
        raise CorruptIndexError(f"{ctx}: texture block has wrong fields") from None

    memberships = _check_finite(_need(raw, "fcm_memberships", ctx), f"{ctx}.fcm_memberships")
    if abs(float(memberships.sum()) - 1.0) > _MEMBERSHIP_TOL:
        raise CorruptIndexError(
            f"{ctx}: fcm_memberships must sum to 1 within {_MEMBERSHIP_TOL}, "
            f"got {float(memberships.sum())!r}"
        )
    expected_c = n_clusters.get(group)
    if expected_c is not None and memberships.shape != (expected_c,):
        raise CorruptIndexError(
            f"{ctx}: fcm_memberships has {memberships.shape[0]} clusters, "
            f"group model has {expected_c}"
        )
    cluster = _need(raw, "fcm_cluster", ctx)
    if not isinstance(cluster, int) or not 0 <= cluster < memberships.shape[0]:
        raise CorruptIndexError(f"{ctx}: fcm_cluster {cluster!r} out of range")

    vector = _check_finite(_need(raw, "vector", ctx), f"{ctx}.vector")
    if vector.shape != (len(FEATURE_NAMES),):
        raise CorruptIndexError(
            f"{ctx}: vector must have {len(FEATURE_NAMES)} dimensions, got {vector.shape[0]}"
        )

    activity = float(_need(raw, "activity_index", ctx))
    if not 0.0 <= activity <= 1.0:
        raise CorruptIndexError(f"{ctx}: activity_index must lie in [0, 1], got {activity!r}")

    memberships.setflags(write=False)
    vector.setflags(write=False)
    return IndexEntry(
        image_id=image_id,
        source_path=str(_need(raw, "source_path", ctx)),
        color=ColorFeature(*[float(v) for v in color_values]),
        color_group=group,
        texture=texture,
        texture_class=tclass,
        activity_index=activity,
        fcm_cluster=cluster,
        fcm_memberships=memberships,
        vector=vector,
    )


def index_from_dict(doc: dict) -> Index:
    version = _need(doc, "format_version")
    if version != INDEX_FORMAT_VERSION:
        raise IncompatibleVersionError(
            f"index format_version {version!r} is not supported "
            f"(expected {INDEX_FORMAT_VERSION})"
        )
    feature_order = _need(doc, "feature_order")
    if tuple(feature_order) != FEATURE_NAMES:
        raise CorruptIndexError(
            f"feature_order {feature_order!r} does not match the engine's fixed order"
        )
    config = config_from_dict(_need(doc, "config_echo"))

    norm_raw = _need(doc, "normalizer")
    mean = _check_finite(_need(norm_raw, "mean", "normalizer"), "normalizer.mean")
    std = _check_finite(_need(norm_raw, "std", "normalizer"), "normalizer.std")
    if mean.shape != (len(FEATURE_NAMES),) or std.shape != (len(FEATURE_NAMES),):
        raise CorruptIndexError("normalizer mean/std must be 12-dimensional")
    if std.min() < 0:
        raise CorruptIndexError("normalizer.std must be nonnegative")
    mean.setflags(write=False)
    std.setflags(write=False)

    cls_raw = _need(doc, "classifier")
    t_low = float(_need(cls_raw, "t_low", "classifier"))
    t_high = float(_need(cls_raw, "t_high", "classifier"))
    lambda_hat = float(_need(cls_raw, "lambda_hat", "classifier"))
    if math.isnan(t_low) or math.isnan(t_high) or not 0.0 <= t_low <= t_high:
        raise CorruptIndexError(
            f"classifier thresholds must satisfy 0 <= t_low <= t_high, "
            f"got ({t_low!r}, {t_high!r})"
        )

    fcm_models = {}
    for name, raw in _need(doc, "fcm_models").items():
        try:
            group = ColorGroup(name)
        except ValueError:
            raise CorruptIndexError(f"fcm_models: invalid color group {name!r}") from None
        centroids = _check_finite(_need(raw, "centroids", f"fcm_models.{name}"),
                                  f"fcm_models.{name}.centroids")
        if centroids.ndim != 2 or centroids.shape[1] != len(FEATURE_NAMES):
            raise CorruptIndexError(f"fcm_models.{name}: centroids must be c x 12")
        m = float(_need(raw, "m", f"fcm_models.{name}"))
        if m <= 1.0:
            raise CorruptIndexError(f"fcm_models.{name}: fuzzifier must be > 1, got {m!r}")
        centroids.setflags(write=False)
        fcm_models[group] = FcmGroupModel(
            centroids=centroids,
            m=m,
            objective=float(_need(raw, "objective", f"fcm_models.{name}")),
            iterations=int(_need(raw, "iterations", f"fcm_models.{name}")),
            converged=bool(_need(raw, "converged", f"fcm_models.{name}")),
        )

    entries_raw = _need(doc, "entries")
    if not entries_raw:
        raise CorruptIndexError("entries must be non-empty in a saved index")
    n_clusters = {g: model.centroids.shape[0] for g, model in fcm_models.items()}
    entries = [_parse_entry(raw, i, n_clusters) for i, raw in enumerate(entries_raw)]
    ids = [e.image_id for e in entries]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise CorruptIndexError(f"duplicate image_id values: {dupes[:5]}")

    return Index(
        config=config,
        normalizer=NormStats(mean=mean, std=std),
        classifier=TextureClassifierModel(t_low=t_low, t_high=t_high, lambda_hat=lambda_hat),
        fcm_models=fcm_models,
        entries=tuple(entries),
        build_timestamp=int(_need(doc, "build_timestamp")),
        format_version=version,
    )


def load_index(path: str | Path) -> Index:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read index file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptIndexError(f"index file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CorruptIndexError("index file must hold a JSON object")
    try:
        return index_from_dict(doc)
    except CbirError:
        raise
    except (TypeError, ValueError, KeyError, AttributeError) as exc:
        raise CorruptIndexError(f"malformed index content: {exc}") from exc
