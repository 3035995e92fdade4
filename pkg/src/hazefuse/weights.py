"""Per-pixel fusion weights from local ternary texture and color saturation.

Each exposure variant is scored pixel by pixel: a 3x3 ternary pattern
counts how many neighbor channels differ perceptibly from the center
(local contrast), and the channel spread measures saturation. The product
of the two is the raw fusion weight; weights are then normalized across
the stack so they sum to one at every pixel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exposure import ExposureStack

# 3x3 neighborhood positions in row-major order, center excluded.
NEIGHBOR_OFFSETS = ((-1, -1), (-1, 0), (-1, 1),
                    (0, -1), (0, 1),
                    (1, -1), (1, 0), (1, 1))

# 8 neighbors x 3 channels: the label count that normalizes the texture
# feature to [0, 1].
PATTERN_SLOTS = len(NEIGHBOR_OFFSETS) * 3


@dataclass(frozen=True)
class ConfidenceParams:
    """Just-noticeable channel difference, expressed in decibels."""

    d_min: float = 0.5

    def __post_init__(self):
        if self.d_min <= 0:
            raise ValueError("d_min must be positive")

    @property
    def alpha(self) -> float:
        """Relative lower-bound margin: (f - 1) / f with f = 10**(d_min/20)."""
        factor = 10.0 ** (self.d_min / 20.0)
        return (factor - 1.0) / factor

    @property
    def beta(self) -> float:
        """Relative upper-bound margin: 10**(d_min/20) - 1."""
        return 10.0 ** (self.d_min / 20.0) - 1.0


def confidence_interval(c0: float, params: ConfidenceParams = ConfidenceParams()):
    """Perceptual tolerance band around a center channel value.

    Returns (c0 - alpha*c0, c0 + beta*c0). Both margins are multiplicative
    in c0, so the band is scale-equivariant and degenerates to (0, 0) at
    c0 = 0.
    """
    if c0 < 0:
        raise ValueError("channel value must be non-negative")
    return c0 * (1.0 - params.alpha), c0 * (1.0 + params.beta)


def code_pattern(img, position, params: ConfidenceParams = ConfidenceParams()) -> np.ndarray:
    """Ternary labels of the 3x3 neighborhood at one pixel.

    Returns an (8, 3) int8 array over (neighbor, channel): 0 if the
    neighbor channel falls inside the center's tolerance band, +1 above
    it, -1 below it. Borders replicate edge pixels.
    """
    arr = np.asarray(img, dtype=np.float64)
    height, width = arr.shape[:2]
    y, x = position
    if not (0 <= y < height and 0 <= x < width):
        raise ValueError(f"position {position} outside {width}x{height} image")
    center = arr[y, x]
    lo = center * (1.0 - params.alpha)
    hi = center * (1.0 + params.beta)
    labels = np.zeros((len(NEIGHBOR_OFFSETS), 3), dtype=np.int8)
    for i, (dy, dx) in enumerate(NEIGHBOR_OFFSETS):
        n = arr[min(max(y + dy, 0), height - 1), min(max(x + dx, 0), width - 1)]
        labels[i] = (n > hi).astype(np.int8) - (n < lo).astype(np.int8)
    return labels


def texture_feature(labels) -> float:
    """Fraction of nonzero labels in a ternary pattern, in [0, 1]."""
    grid = np.asarray(labels)
    if grid.size != PATTERN_SLOTS:
        raise ValueError(f"pattern must hold {PATTERN_SLOTS} labels")
    return float(np.count_nonzero(grid)) / PATTERN_SLOTS


def texture_map(img, params: ConfidenceParams = ConfidenceParams()) -> np.ndarray:
    """Texture feature at every pixel, as an (H, W) map in [0, 1].

    Vectorized equivalent of texture_feature(code_pattern(...)) per pixel.
    """
    arr = np.asarray(img, dtype=np.float64)
    height, width = arr.shape[:2]
    lo = arr * (1.0 - params.alpha)
    hi = arr * (1.0 + params.beta)
    padded = np.pad(arr, ((1, 1), (1, 1), (0, 0)), mode="edge")
    count = np.zeros((height, width), dtype=np.float64)
    for dy, dx in NEIGHBOR_OFFSETS:
        n = padded[1 + dy:1 + dy + height, 1 + dx:1 + dx + width]
        count += ((n > hi) | (n < lo)).sum(axis=2)
    return count / PATTERN_SLOTS


def saturation_map(img) -> np.ndarray:
    """Channel spread at every pixel: sqrt of the summed squared deviations
    of R, G, B from their mean. Zero exactly where R = G = B."""
    arr = np.asarray(img, dtype=np.float64)
    dev = arr - arr.mean(axis=2, keepdims=True)
    return np.sqrt((dev * dev).sum(axis=2))


def raw_weight(img, params: ConfidenceParams = ConfidenceParams()) -> np.ndarray:
    """Unnormalized fusion weight of one exposure: texture times saturation."""
    return texture_map(img, params) * saturation_map(img)


def weight_maps(stack: ExposureStack, params: ConfidenceParams = ConfidenceParams(),
                eps: float = 1e-12) -> np.ndarray:
    """Normalized fusion weights for a stack, shaped (K, H, W).

    At every pixel the K weights sum to one. Pixels where the raw weights
    sum below eps (constant or fully desaturated content) fall back to the
    uniform weight 1/K.
    """
    raw = np.stack([raw_weight(entry, params) for entry in stack])
    total = raw.sum(axis=0)
    k = len(stack)
    degenerate = total < eps
    total = np.where(degenerate, 1.0, total)
    return np.where(degenerate[None, :, :], 1.0 / k, raw / total[None, :, :])
