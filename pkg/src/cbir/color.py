"""Per-channel average intensities and the dominant-channel color group."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .imaging import RgbRaster


class ColorGroup(str, Enum):
    RED = "Red"
    GREEN = "Green"
    BLUE = "Blue"


@dataclass(frozen=True)
class ColorFeature:
    """Mean red/green/blue intensities over every pixel, kept at full precision."""

    r_avg: float
    g_avg: float
    b_avg: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.r_avg, self.g_avg, self.b_avg)


def channel_averages(img: RgbRaster) -> ColorFeature:
    """Mean of each channel over all width*height pixels."""
    sums = img.data.reshape(-1, 3).sum(axis=0, dtype=np.int64)
    n = img.width * img.height
    return ColorFeature(float(sums[0]) / n, float(sums[1]) / n, float(sums[2]) / n)


def dominant_channel(feature: ColorFeature) -> ColorGroup:
    """Argmax channel; ties break by fixed priority Red > Green > Blue."""
    r, g, b = feature.as_tuple()
    if r >= g and r >= b:
        return ColorGroup.RED
    if g >= b:
        return ColorGroup.GREEN
    return ColorGroup.BLUE
