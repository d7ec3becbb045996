"""Content-based image retrieval engine: color + GLCM texture features,
three-way texture classification, fuzzy C-means pre-clustering, and
Euclidean query-by-example ranking."""

from .builder import BuildResult, SkippedFile, build_index
from .color import ColorFeature, ColorGroup, channel_averages, dominant_channel
from .config import EngineConfig, load_config, parse_config
from .errors import CbirError
from .evaluation import (
    EvalReport,
    PrPoint,
    evaluate_corpus,
    load_ground_truth,
    pr_curve,
    precision_recall,
)
from .fcm import FcmModel, fcm_assign, fcm_fit, fcm_objective
from .imaging import (
    GrayRaster,
    RgbRaster,
    add_salt_pepper,
    averaging_filter,
    decode_image,
    encode_png,
    median_filter,
    psnr,
    to_gray,
)
from .retrieval import (
    FEATURE_NAMES,
    Index,
    IndexEntry,
    NormStats,
    RetrievalResult,
    euclidean,
    fit_normalizer,
    normalize,
    query,
    query_by_id,
    select_neighborhood,
)
from .store import load_index, save_index
from .synth import generate_corpus
from .texture import (
    GlcmMatrix,
    TextureClass,
    TextureClassifierModel,
    TextureFeature,
    classify_texture,
    fit_classifier,
    glcm,
    glcm_counts,
    glcm_features,
    image_texture_features,
    quantize,
    texture_activity,
)

__version__ = "0.1.0"

__all__ = [
    "BuildResult",
    "CbirError",
    "ColorFeature",
    "ColorGroup",
    "EngineConfig",
    "EvalReport",
    "FEATURE_NAMES",
    "FcmModel",
    "GlcmMatrix",
    "GrayRaster",
    "Index",
    "IndexEntry",
    "NormStats",
    "PrPoint",
    "RetrievalResult",
    "RgbRaster",
    "SkippedFile",
    "TextureClass",
    "TextureClassifierModel",
    "TextureFeature",
    "add_salt_pepper",
    "averaging_filter",
    "build_index",
    "channel_averages",
    "classify_texture",
    "decode_image",
    "dominant_channel",
    "encode_png",
    "euclidean",
    "evaluate_corpus",
    "fcm_assign",
    "fcm_fit",
    "fcm_objective",
    "fit_classifier",
    "fit_normalizer",
    "generate_corpus",
    "glcm",
    "glcm_counts",
    "glcm_features",
    "image_texture_features",
    "load_config",
    "load_ground_truth",
    "load_index",
    "median_filter",
    "normalize",
    "parse_config",
    "pr_curve",
    "precision_recall",
    "psnr",
    "quantize",
    "query",
    "query_by_id",
    "save_index",
    "select_neighborhood",
    "texture_activity",
    "to_gray",
]
