"""Synthetic haze from the atmospheric scattering model.

Degrades a clear image as hazy = clear*t + A*(1 - t), where t is the
transmission (scalar or per-pixel map) and A the airlight color. Used to
build self-contained (clear, hazy) evaluation pairs without external
datasets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .image import validate_image


@dataclass(frozen=True)
class HazeParams:
    """Transmission (uniform value or (H, W) map in (0, 1]) and airlight
    RGB triple in [0, 1]."""

    transmission: Union[float, np.ndarray] = 0.6
    airlight: tuple = (1.0, 1.0, 1.0)

    def __post_init__(self):
        t = np.asarray(self.transmission, dtype=np.float64)
        if t.ndim not in (0, 2):
            raise ValueError("transmission must be a scalar or an (H, W) map")
        if not np.isfinite(t).all() or t.min() <= 0.0 or t.max() > 1.0:
            raise ValueError("transmission must lie in (0, 1]")
        airlight = tuple(float(a) for a in self.airlight)
        if len(airlight) != 3 or any(not 0.0 <= a <= 1.0 for a in airlight):
            raise ValueError("airlight must be an RGB triple in [0, 1]")
        object.__setattr__(self, "airlight", airlight)


def apply_haze(clear, params: HazeParams) -> np.ndarray:
    """Scatter a clear image toward the airlight color.

    Per pixel and channel: hazy = clear*t + A*(1 - t). A per-pixel
    transmission map must match the image dimensions.
    """
    arr = validate_image(clear)
    t = np.asarray(params.transmission, dtype=np.float64)
    if t.ndim == 2:
        if t.shape != arr.shape[:2]:
            raise ValueError(f"transmission map {t.shape} does not match "
                             f"image {arr.shape[:2]}")
        t = t[:, :, None]
    airlight = np.asarray(params.airlight, dtype=np.float64)
    return np.clip(arr * t + airlight * (1.0 - t), 0.0, 1.0)


def transmission_from_depth(depth, beta: float) -> np.ndarray:
    """Depth-driven transmission t = exp(-beta * depth) in (0, 1]."""
    if beta <= 0:
        raise ValueError("scattering coefficient beta must be positive")
    d = np.asarray(depth, dtype=np.float64)
    if not np.isfinite(d).all() or d.min() < 0:
        raise ValueError("depth values must be finite and non-negative")
    return np.exp(-beta * d)


def ramp_depth(height: int, width: int, near: float = 0.0, far: float = 1.0,
               axis: int = 0) -> np.ndarray:
    """Linear depth ramp from near to far along rows (axis 0) or columns."""
    if height < 1 or width < 1:
        raise ValueError("depth map needs positive dimensions")
    if axis not in (0, 1):
        raise ValueError("axis must be 0 or 1")
    n = height if axis == 0 else width
    ramp = np.linspace(near, far, n)
    if axis == 0:
        return np.repeat(ramp[:, None], width, axis=1)
    return np.repeat(ramp[None, :], height, axis=0)
