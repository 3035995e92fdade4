"""Construction of the five-image multi-exposure stack.

A single input is expanded into four gamma-corrected variants plus one
contrast-limited adaptive histogram equalization (CLAHE) variant. The
gamma factors are chosen adaptively: images darker than a mean-intensity
threshold get a moderate set, brighter images get a stronger one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import luminance, mean_intensity, validate_image

STACK_SIZE = 5


@dataclass(frozen=True)
class GammaSchedule:
    """Adaptive gamma sets and the mean-intensity threshold that picks one."""

    dark_set: tuple = (1.2, 1.4, 1.6, 1.8)
    bright_set: tuple = (2.0, 3.0, 4.0, 5.0)
    threshold: float = 0.5

    def __post_init__(self):
        for name in ("dark_set", "bright_set"):
            factors = tuple(float(g) for g in getattr(self, name))
            if len(factors) != 4:
                raise ValueError(f"{name} must contain exactly 4 gamma factors")
            if any(g <= 0 for g in factors):
                raise ValueError(f"{name} gamma factors must be positive")
            if any(a >= b for a, b in zip(factors, factors[1:])):
                raise ValueError(f"{name} must be strictly increasing")
            object.__setattr__(self, name, factors)
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")


@dataclass(frozen=True)
class ClaheParams:
    """Tile grid, relative clip factor, and histogram resolution for CLAHE."""

    tiles_x: int = 8
    tiles_y: int = 8
    clip_limit: float = 2.0
    bins: int = 256

    def __post_init__(self):
        if self.tiles_x < 1 or self.tiles_y < 1:
            raise ValueError("tile counts must be at least 1")
        if self.clip_limit <= 0:
            raise ValueError("clip_limit must be positive")
        if self.bins < 2:
            raise ValueError("bins must be at least 2")


@dataclass(frozen=True, eq=False)
class ExposureStack:
    """Ordered stack of exactly five exposure variants of one source image.

    Entries 0-3 are the gamma variants in ascending gamma order, entry 4
    is the CLAHE variant. All entries share the source dimensions.
    """

    images: tuple
    width: int
    height: int

    def __post_init__(self):
        if len(self.images) != STACK_SIZE:
            raise ValueError(f"stack must hold exactly {STACK_SIZE} images")
        for img in self.images:
            if img.shape != (self.height, self.width, 3):
                raise ValueError("stack entries must all match the source dimensions")

    def __len__(self):
        return len(self.images)

    def __iter__(self):
        return iter(self.images)

    def __getitem__(self, k):
        return self.images[k]


def gamma_correct(img, gamma: float) -> np.ndarray:
    """Power-law intensity transform: each channel v becomes v**gamma."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return np.power(validate_image(img), gamma)


def select_gamma_set(mean: float, schedule: GammaSchedule) -> tuple:
    """Pick the gamma set for an image mean: dark set below the threshold,
    bright set at or above it."""
    return schedule.dark_set if mean < schedule.threshold else schedule.bright_set


def clahe(img, params: ClaheParams = ClaheParams()) -> np.ndarray:
    """Contrast-limited adaptive histogram equalization of an RGB image.

    Equalization runs on the luminance plane: the image is split into a
    tile grid (padded by edge replication so the grid divides evenly),
    each tile's histogram is clipped at clip_limit times the uniform bin
    count with the excess spread uniformly over all bins, and the per-tile
    mappings are blended by bilinear interpolation between tile centers.
    Each RGB channel is then rescaled by the per-pixel luminance gain and
    clamped to [0, 1], which preserves hue.
    """
    arr = validate_image(img)
    height, width = arr.shape[:2]
    if width < params.tiles_x or height < params.tiles_y:
        raise ValueError(
            f"image {width}x{height} is smaller than the {params.tiles_x}x{params.tiles_y} tile grid")
    lum = luminance(arr)
    lum_eq = _clahe_gray(lum, params)
    out = np.where(lum[:, :, None] > 1e-12,
                   arr * (lum_eq / np.maximum(lum, 1e-12))[:, :, None],
                   lum_eq[:, :, None])
    return np.clip(out, 0.0, 1.0)


def _clahe_gray(plane: np.ndarray, params: ClaheParams) -> np.ndarray:
    height, width = plane.shape
    tiles_y, tiles_x, bins = params.tiles_y, params.tiles_x, params.bins
    tile_h = -(-height // tiles_y)
    tile_w = -(-width // tiles_x)
    padded = np.pad(plane, ((0, tiles_y * tile_h - height), (0, tiles_x * tile_w - width)),
                    mode="edge")

    bin_idx = np.minimum((padded * bins).astype(np.int64), bins - 1)
    tiled = bin_idx.reshape(tiles_y, tile_h, tiles_x, tile_w).transpose(0, 2, 1, 3)
    hist = np.zeros((tiles_y, tiles_x, bins), dtype=np.float64)
    for ty in range(tiles_y):
        for tx in range(tiles_x):
            hist[ty, tx] = np.bincount(tiled[ty, tx].ravel(), minlength=bins)

    # Clip at clip_limit times the uniform bin count; redistribute the
    # excess uniformly in a single pass.
    tile_pixels = tile_h * tile_w
    clip = params.clip_limit * tile_pixels / bins
    excess = np.maximum(hist - clip, 0.0).sum(axis=2, keepdims=True)
    hist = np.minimum(hist, clip) + excess / bins

    # Mid-bin CDF mapping keeps a constant tile fixed instead of pushing it
    # to an extreme.
    cdf = np.cumsum(hist, axis=2)
    lut = (cdf - hist / 2.0) / tile_pixels

    ty0, ty1, wy = _tile_blend_axis(padded.shape[0], tile_h, tiles_y)
    tx0, tx1, wx = _tile_blend_axis(padded.shape[1], tile_w, tiles_x)
    wy = wy[:, None]
    wx = wx[None, :]
    top = (1 - wx) * lut[ty0[:, None], tx0[None, :], bin_idx] + wx * lut[ty0[:, None], tx1[None, :], bin_idx]
    bot = (1 - wx) * lut[ty1[:, None], tx0[None, :], bin_idx] + wx * lut[ty1[:, None], tx1[None, :], bin_idx]
    out = (1 - wy) * top + wy * bot
    return np.clip(out[:height, :width], 0.0, 1.0)


def _tile_blend_axis(size: int, tile: int, count: int):
    """Neighbor tile indices and blend weights along one axis.

    Pixels beyond the first/last tile centers clamp to the border tile.
    """
    pos = (np.arange(size) + 0.5) / tile - 0.5
    pos = np.clip(pos, 0.0, count - 1.0)
    if count == 1:
        i0 = np.zeros(size, dtype=np.int64)
        return i0, i0, np.zeros(size)
    i0 = np.minimum(pos.astype(np.int64), count - 2)
    return i0, i0 + 1, pos - i0


def build_stack(img, schedule: GammaSchedule = GammaSchedule(),
                clahe_params: ClaheParams = ClaheParams()) -> ExposureStack:
    """Expand one image into its five-exposure stack.

    Entries 0-3 apply the adaptively selected gamma set in ascending
    order, entry 4 is the CLAHE variant of the original.
    """
    arr = validate_image(img)
    gammas = select_gamma_set(mean_intensity(arr), schedule)
    images = tuple(gamma_correct(arr, g) for g in gammas) + (clahe(arr, clahe_params),)
    return ExposureStack(images=images, width=arr.shape[1], height=arr.shape[0])
