"""Engine configuration: defaults, flat key-value file parsing, validation.

The config file is plain text, one ``key = value`` per line, keys exactly as
the dotted field paths below. Unknown keys are a load error so typos surface
immediately.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError


@dataclass(frozen=True)
class EngineConfig:
    preprocess_enabled: bool = True
    preprocess_window: int = 3
    glcm_levels: int = 16
    glcm_patch: int = 16
    fcm_c: int = 3
    fcm_m: float = 2.0
    fcm_eps: float = 1e-5
    fcm_max_iter: int = 100
    fcm_seed: int = 0
    retrieval_k_min: int = 10

    def validate(self) -> "EngineConfig":
        if self.preprocess_window % 2 == 0 or self.preprocess_window < 3:
            raise ConfigError(
                f"preprocess.window must be odd and >= 3, got {self.preprocess_window}"
            )
        if not 2 <= self.glcm_levels <= 256:
            raise ConfigError(f"glcm.levels must lie in [2, 256], got {self.glcm_levels}")
        if self.glcm_patch < 2:
            raise ConfigError(f"glcm.patch must be >= 2, got {self.glcm_patch}")
        if self.fcm_c < 1:
            raise ConfigError(f"fcm.c must be >= 1, got {self.fcm_c}")
        if self.fcm_m <= 1.0:
            raise ConfigError(f"fcm.m must be > 1, got {self.fcm_m}")
        if self.fcm_eps <= 0.0:
            raise ConfigError(f"fcm.eps must be > 0, got {self.fcm_eps}")
        if self.fcm_max_iter < 1:
            raise ConfigError(f"fcm.max_iter must be >= 1, got {self.fcm_max_iter}")
        if self.retrieval_k_min < 1:
            raise ConfigError(f"retrieval.k_min must be >= 1, got {self.retrieval_k_min}")
        return self


# dotted config key -> (dataclass field, parser)
_KEYS = {
    "preprocess.enabled": ("preprocess_enabled", "bool"),
    "preprocess.window": ("preprocess_window", "int"),
    "glcm.levels": ("glcm_levels", "int"),
    "glcm.patch": ("glcm_patch", "int"),
    "fcm.c": ("fcm_c", "int"),
    "fcm.m": ("fcm_m", "float"),
    "fcm.eps": ("fcm_eps", "float"),
    "fcm.max_iter": ("fcm_max_iter", "int"),
    "fcm.seed": ("fcm_seed", "int"),
    "retrieval.k_min": ("retrieval_k_min", "int"),
}


def _parse_value(key: str, raw: str, kind: str):
    try:
        if kind == "bool":
            lowered = raw.lower()
            if lowered in ("true", "false"):
                return lowered == "true"
            raise ValueError(raw)
        if kind == "int":
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"cannot parse {key} value {raw!r} as {kind}") from None


def parse_config(text: str) -> EngineConfig:
    """Parse flat key-value config text; '#' starts a comment line."""
    values = {}
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate config key {key!r}")
        seen.add(key)
        field, kind = _KEYS[key]
        values[field] = _parse_value(key, raw, kind)
    return EngineConfig(**values).validate()


def load_config(path: str | Path) -> EngineConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text)


def config_to_dict(config: EngineConfig) -> dict:
    """Config echo keyed by the dotted field paths, for reports and the index file."""
    return {key: getattr(config, field) for key, (field, _) in _KEYS.items()}


def config_from_dict(data: dict) -> EngineConfig:
    values = {}
    for key, raw in data.items():
        if key not in _KEYS:
            raise ConfigError(f"unknown config key {key!r} in config echo")
        field, kind = _KEYS[key]
        if kind == "bool" and not isinstance(raw, bool):
            raise ConfigError(f"config key {key!r} must be boolean, got {raw!r}")
        values[field] = raw
    return EngineConfig(**values).validate()
