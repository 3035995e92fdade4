"""Multi-scale decomposition and weighted fusion of the exposure stack.

Images are decomposed into Laplacian pyramids, weights into Gaussian
pyramids; each band is blended as a weighted sum across the stack and the
fused pyramid is collapsed back, which blends the exposures seamlessly
across scales. All smoothing uses the fixed 5-tap binomial kernel
(1, 4, 6, 4, 1)/16 with edge replication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exposure import ClaheParams, ExposureStack, GammaSchedule, build_stack
from .image import validate_image
from .weights import ConfidenceParams, weight_maps

BINOMIAL_TAPS = (1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16)


@dataclass(frozen=True)
class FusionParams:
    """Pyramid depth; None selects a size-based default.

    A sensible depth keeps the coarsest level at least a few pixels on a
    side; the default uses floor(log2(min dim)) - 2 clamped to [3, 8].
    """

    levels: Optional[int] = None

    def __post_init__(self):
        if self.levels is not None and self.levels < 1:
            raise ValueError("levels must be at least 1")

    def resolve(self, height: int, width: int) -> int:
        if self.levels is not None:
            return self.levels
        return default_levels(height, width)


@dataclass
class LaplacianPyramid:
    """Band-pass detail levels plus the coarsest low-pass residual."""

    details: list = field(default_factory=list)
    residual: np.ndarray = None


def default_levels(height: int, width: int) -> int:
    """Size-based pyramid depth: floor(log2(min dim)) - 2, clamped to [3, 8]
    and never deeper than the dimensions allow."""
    smallest = min(height, width)
    depth = max(3, min(8, int(math.log2(smallest)) - 2)) if smallest >= 2 else 1
    return min(depth, max_levels(height, width))


def max_levels(height: int, width: int) -> int:
    """Deepest pyramid the dimensions support (coarsest side stays >= 2)."""
    return int(math.log2(min(height, width))) + 1 if min(height, width) >= 2 else 1


def _check_levels(shape, levels: int) -> None:
    if levels < 1:
        raise ValueError("levels must be at least 1")
    if levels > max_levels(shape[0], shape[1]):
        raise ValueError(f"{levels} pyramid levels is too deep for a "
                         f"{shape[1]}x{shape[0]} image")


def _blur_axis(arr: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(arr, axis, 0)
    p = np.concatenate([moved[:1], moved[:1], moved, moved[-1:], moved[-1:]], axis=0)
    t0, t1, t2, t3, t4 = BINOMIAL_TAPS
    out = t0 * p[:-4] + t1 * p[1:-3] + t2 * p[2:-2] + t3 * p[3:-1] + t4 * p[4:]
    return np.moveaxis(out, 0, axis)


def _blur(arr: np.ndarray) -> np.ndarray:
    return _blur_axis(_blur_axis(arr, 0), 1)


def _downsample(arr: np.ndarray) -> np.ndarray:
    return _blur(arr)[::2, ::2]


def _upsample_axis(arr: np.ndarray, size: int, axis: int) -> np.ndarray:
    moved = np.moveaxis(arr, axis, 0)
    p = np.concatenate([moved[:1], moved, moved[-1:]], axis=0)
    out = np.empty((2 * moved.shape[0],) + moved.shape[1:], dtype=np.float64)
    # Polyphase interpolation with the doubled binomial kernel: even output
    # samples sit on the coarse grid, odd ones halfway between.
    out[0::2] = (p[:-2] + 6.0 * p[1:-1] + p[2:]) / 8.0
    out[1::2] = (p[1:-1] + p[2:]) / 2.0
    return np.moveaxis(out[:size], 0, axis)


def _upsample(arr: np.ndarray, shape) -> np.ndarray:
    return _upsample_axis(_upsample_axis(arr, shape[0], 0), shape[1], 1)


def gaussian_pyramid(arr, params: FusionParams = FusionParams()) -> list:
    """Low-pass pyramid: level i+1 is level i blurred and halved (ceil).

    Works on 2-D maps and (H, W, 3) images alike; level 0 is the input.
    """
    arr = np.asarray(arr, dtype=np.float64)
    levels = params.resolve(arr.shape[0], arr.shape[1])
    _check_levels(arr.shape, levels)
    pyr = [arr]
    for _ in range(levels - 1):
        pyr.append(_downsample(pyr[-1]))
    return pyr


def laplacian_pyramid(arr, params: FusionParams = FusionParams()) -> LaplacianPyramid:
    """Band-pass pyramid: detail i is Gaussian level i minus the upsampled
    next-coarser level; the residual is the coarsest Gaussian level."""
    gauss = gaussian_pyramid(arr, params)
    details = [g - _upsample(g_next, g.shape[:2])
               for g, g_next in zip(gauss[:-1], gauss[1:])]
    return LaplacianPyramid(details=details, residual=gauss[-1])


def collapse(pyr: LaplacianPyramid, clamp: bool = True) -> np.ndarray:
    """Rebuild the full-resolution array by upsampling the residual and
    adding detail levels from coarse to fine."""
    out = pyr.residual
    for detail in reversed(pyr.details):
        up = _upsample(out, detail.shape[:2])
        if up.ndim != detail.ndim:
            raise ValueError("pyramid level dimensionality mismatch")
        out = up + detail
    return np.clip(out, 0.0, 1.0) if clamp else out


def fuse(stack: ExposureStack, weights: np.ndarray,
         params: FusionParams = FusionParams(), clamp: bool = True) -> np.ndarray:
    """Blend a stack under per-pixel weights across pyramid scales.

    weights is a (K, H, W) array that sums to one at every pixel. Image
    details are weighted by the Gaussian-smoothed weights level by level,
    the residual by the coarsest weight level, and the fused pyramid is
    collapsed. The result is clamped to [0, 1] unless clamp is False.
    """
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (len(stack), stack.height, stack.width):
        raise ValueError(f"weights shape {weights.shape} does not match a "
                         f"{len(stack)}-entry {stack.width}x{stack.height} stack")
    fused = None
    for entry, wmap in zip(stack, weights):
        img_pyr = laplacian_pyramid(entry, params)
        w_pyr = gaussian_pyramid(wmap, params)
        if fused is None:
            fused = LaplacianPyramid(
                details=[w[:, :, None] * d for w, d in zip(w_pyr, img_pyr.details)],
                residual=w_pyr[-1][:, :, None] * img_pyr.residual)
        else:
            for i, (w, d) in enumerate(zip(w_pyr, img_pyr.details)):
                fused.details[i] += w[:, :, None] * d
            fused.residual += w_pyr[-1][:, :, None] * img_pyr.residual
    return collapse(fused, clamp=clamp)


def enhance(img, schedule: GammaSchedule = GammaSchedule(),
            clahe_params: ClaheParams = ClaheParams(),
            confidence: ConfidenceParams = ConfidenceParams(),
            fusion: FusionParams = FusionParams()) -> np.ndarray:
    """Full enhancement pipeline: exposure stack, fusion weights, pyramid
    blend. Deterministic for a fixed configuration."""
    arr = validate_image(img)
    stack = build_stack(arr, schedule, clahe_params)
    weights = weight_maps(stack, confidence)
    return fuse(stack, weights, fusion)
