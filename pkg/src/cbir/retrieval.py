"""Feature assembly, Euclidean ranking, and the cluster-pruned query path.

A built index is an immutable snapshot: per-image entries plus the three
fitted models (texture classifier, feature normalizer, per-color-group FCM).
Queries re-run the identical extraction pipeline, prune candidates through
the texture-class / color-group / fuzzy-cluster cascade, and rank by
Euclidean distance in z-scored feature space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .color import ColorFeature, ColorGroup, channel_averages, dominant_channel
from .config import EngineConfig
from .errors import (
    EmptyIndexError,
    InsufficientDataError,
    InvalidArgumentError,
)
from .fcm import fcm_assign
from .imaging import GrayRaster, RgbRaster, median_filter, to_gray
from .texture import (
    TextureClass,
    TextureClassifierModel,
    TextureFeature,
    classify_texture,
    image_texture_features,
    texture_activity,
)

INDEX_FORMAT_VERSION = 1

# Fixed 12-D feature order; versioned in the index file.
FEATURE_NAMES = (
    "r_avg",
    "g_avg",
    "b_avg",
    "entropy",
    "contrast",
    "dissimilarity",
    "homogeneity",
    "energy",
    "correlation",
    "mean",
    "variance",
    "std_dev",
)
FEATURE_DIM = len(FEATURE_NAMES)

MODES = ("exhaustive", "clustered")


@dataclass(frozen=True)
class NormStats:
    """Per-dimension corpus mean and population standard deviation."""

    mean: np.ndarray
    std: np.ndarray


@dataclass(frozen=True)
class FcmGroupModel:
    """Persisted FCM metadata for one color group: enough to assign queries."""

    centroids: np.ndarray  # (c, 12)
    m: float
    objective: float
    iterations: int
    converged: bool

    @property
    def n_clusters(self) -> int:
        return self.centroids.shape[0]


@dataclass(frozen=True)
class IndexEntry:
    image_id: str
    source_path: str
    color: ColorFeature
    color_group: ColorGroup
    texture: TextureFeature
    texture_class: TextureClass
    activity_index: float
    fcm_cluster: int
    fcm_memberships: np.ndarray
    vector: np.ndarray  # z-scored 12-D feature vector


@dataclass(frozen=True)
class ResultEntry:
    image_id: str
    distance: float
    rank: int


@dataclass(frozen=True)
class RetrievalResult:
    entries: tuple[ResultEntry, ...]
    mode: str
    candidates_examined: int


@dataclass(frozen=True)
class Index:
    """Immutable in-memory index snapshot."""

    config: EngineConfig
    normalizer: NormStats
    classifier: TextureClassifierModel
    fcm_models: dict[ColorGroup, FcmGroupModel]
    entries: tuple[IndexEntry, ...]
    build_timestamp: int
    format_version: int = INDEX_FORMAT_VERSION
    _by_id: dict = field(init=False, default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {e.image_id: e for e in self.entries})

    def entry(self, image_id: str) -> IndexEntry | None:
        return self._by_id.get(image_id)


@dataclass(frozen=True)
class QueryFeatures:
    """Everything the pruning cascade and ranker need to know about a query."""

    color: ColorFeature
    color_group: ColorGroup
    texture: TextureFeature
    texture_class: TextureClass
    activity_index: float
    vector: np.ndarray
    fcm_memberships: np.ndarray | None  # None when the query's group has no model


def raw_feature_vector(color: ColorFeature, texture: TextureFeature) -> np.ndarray:
    """Assemble the unnormalized 12-D vector in FEATURE_NAMES order."""
    return np.array(color.as_tuple() + texture.as_tuple(), dtype=np.float64)


def fit_normalizer(vectors) -> NormStats:
    """Per-dimension mean / population std over the full indexing corpus."""
    arr = np.asarray(vectors, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise InsufficientDataError(
            f"normalizer needs >= 2 vectors, got shape {arr.shape}"
        )
    mean = arr.mean(axis=0)
    std = arr.std(axis=0)
    mean.setflags(write=False)
    std.setflags(write=False)
    return NormStats(mean=mean, std=std)


def normalize(raw: np.ndarray, stats: NormStats) -> np.ndarray:
    """Z-score `raw`; dimensions with zero corpus spread map to 0.0."""
    arr = np.asarray(raw, dtype=np.float64)
    if arr.shape != stats.mean.shape:
        raise InvalidArgumentError(
            f"vector shape {arr.shape} does not match normalizer {stats.mean.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("feature vector contains non-finite values")
    out = np.zeros_like(arr)
    nonzero = stats.std != 0.0
    out[nonzero] = (arr[nonzero] - stats.mean[nonzero]) / stats.std[nonzero]
    out.setflags(write=False)
    return out


def euclidean(a: np.ndarray, b: np.ndarray) -> float:
    if np.shape(a) != np.shape(b):
        raise InvalidArgumentError(
            f"dimension mismatch: {np.shape(a)} vs {np.shape(b)}"
        )
    diff = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    return math.sqrt(float((diff * diff).sum()))


def extract_query_features(raster: RgbRaster, index: Index) -> QueryFeatures:
    """Run the indexing pipeline on a query image using the index's models.

    Color features come from the unfiltered RGB raster; texture features from
    the (optionally median-filtered) luminance plane — the same path every
    indexed image went through, so self-queries land at distance exactly 0.
    """
    config = index.config
    color = channel_averages(raster)
    group = dominant_channel(color)
    gray = to_gray(raster)
    if config.preprocess_enabled:
        gray = median_filter(gray, config.preprocess_window)
    texture = image_texture_features(gray, levels=config.glcm_levels)
    _, activity = texture_activity(gray, patch=config.glcm_patch)
    tclass = classify_texture(activity, index.classifier)
    vector = normalize(raw_feature_vector(color, texture), index.normalizer)
    model = index.fcm_models.get(group)
    memberships = fcm_assign(model, vector) if model is not None else None
    return QueryFeatures(
        color=color,
        color_group=group,
        texture=texture,
        texture_class=tclass,
        activity_index=activity,
        vector=vector,
        fcm_memberships=memberships,
    )


def _widen_by_cluster(entries, memberships, k_min):
    """Keep entries from the query's fuzzy clusters, adding clusters in
    decreasing query-membership order until at least k_min survive."""
    if memberships is None or not entries:
        return list(entries)
    order = sorted(range(len(memberships)), key=lambda c: (-memberships[c], c))
    chosen: set[int] = set()
    candidates: list = []
    for cluster in order:
        chosen.add(cluster)
        candidates = [e for e in entries if e.fcm_cluster in chosen]
        if len(candidates) >= k_min:
            return candidates
    return candidates


def select_neighborhood(
    query_group: ColorGroup,
    query_class: TextureClass,
    query_memberships: np.ndarray | None,
    entries,
    k_min: int,
) -> list[IndexEntry]:
    """Candidate pruning cascade: texture class, then color group, then FCM cluster.

    When a stage leaves fewer than k_min candidates its filter is skipped,
    innermost first (cluster, then group, then class), so a non-empty index
    never yields an empty candidate set.
    """
    entries = list(entries)
    if not entries:
        raise EmptyIndexError("cannot select a neighborhood from an empty index")
    if k_min < 1:
        raise InvalidArgumentError(f"k_min must be >= 1, got {k_min}")
    by_class = [e for e in entries if e.texture_class == query_class]
    by_group = [e for e in by_class if e.color_group == query_group]
    by_cluster = _widen_by_cluster(by_group, query_memberships, k_min)
    for candidates in (by_cluster, by_group, by_class):
        if len(candidates) >= k_min:
            return candidates
    return entries


def _rank(query_vector, candidates, k, mode) -> RetrievalResult:
    scored = sorted(
        ((euclidean(query_vector, e.vector), e.image_id) for e in candidates),
        key=lambda pair: (pair[0], pair[1]),
    )
    top = scored[: min(k, len(scored))]
    return RetrievalResult(
        entries=tuple(
            ResultEntry(image_id=image_id, distance=dist, rank=i + 1)
            for i, (dist, image_id) in enumerate(top)
        ),
        mode=mode,
        candidates_examined=len(candidates),
    )


def _candidates_for(index: Index, features: QueryFeatures, mode: str):
    if mode not in MODES:
        raise InvalidArgumentError(f"mode must be one of {MODES}, got {mode!r}")
    if not index.entries:
        raise EmptyIndexError("index contains no entries")
    if mode == "exhaustive":
        return list(index.entries)
    return select_neighborhood(
        features.color_group,
        features.texture_class,
        features.fcm_memberships,
        index.entries,
        index.config.retrieval_k_min,
    )


def query(index: Index, query_image: RgbRaster, k: int, mode: str = "clustered") -> RetrievalResult:
    """Rank index entries against a query image.

    Runs preprocessing, feature extraction, classification, normalization and
    FCM assignment on the query, prunes candidates (clustered mode) or takes
    the whole index (exhaustive), and returns the top min(k, candidates)
    entries by ascending distance, ties broken by image_id.
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    features = extract_query_features(query_image, index)
    candidates = _candidates_for(index, features, mode)
    return _rank(features.vector, candidates, k, mode)


def query_by_id(index: Index, image_id: str, k: int, mode: str = "clustered") -> RetrievalResult:
    """Query using an indexed image's stored features.

    Equivalent to re-submitting the original file: the pipeline is
    deterministic, so the stored features are what extraction would produce.
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    entry = index.entry(image_id)
    if entry is None:
        raise InvalidArgumentError(f"unknown image id {image_id!r}")
    features = QueryFeatures(
        color=entry.color,
        color_group=entry.color_group,
        texture=entry.texture,
        texture_class=entry.texture_class,
        activity_index=entry.activity_index,
        vector=entry.vector,
        fcm_memberships=entry.fcm_memberships,
    )
    candidates = _candidates_for(index, features, mode)
    return _rank(features.vector, candidates, k, mode)
