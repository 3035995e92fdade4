"""Full-reference image quality metrics: MSE, PSNR, SSIM.

All metrics compare a reference image against a test image of the same
dimensions and accept an optional binary region-of-interest mask. SSIM is
computed over local sliding windows and averaged; by default it runs on
the luminance plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import load_image, luminance


@dataclass(frozen=True)
class SsimParams:
    """Structural-similarity settings.

    Parameters
    ----------
    k1, k2 : float
      Stabilizing constants; C1 = (k1*range)**2 and C2 = (k2*range)**2.
    dynamic_range : float
      Value range of the images; 1.0 for normalized data.
    window : str
      'uniform' for a flat sliding window, 'gaussian' for a Gaussian
      weighted one.
    window_size : int
      Side length of the window (8 for uniform, 11 is customary for
      gaussian).
    gaussian_sigma : float
      Standard deviation of the gaussian window.
    per_channel : bool
      Average SSIM over R, G, B planes instead of using luminance.
    """

    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 1.0
    window: str = "uniform"
    window_size: int = 8
    gaussian_sigma: float = 1.5
    per_channel: bool = False

    def __post_init__(self):
        if self.k1 <= 0 or self.k2 <= 0:
            raise ValueError("k1 and k2 must be positive")
        if self.dynamic_range <= 0:
            raise ValueError("dynamic_range must be positive")
        if self.window not in ("uniform", "gaussian"):
            raise ValueError("window must be 'uniform' or 'gaussian'")
        if self.window_size < 1:
            raise ValueError("window_size must be at least 1")
        if self.gaussian_sigma <= 0:
            raise ValueError("gaussian_sigma must be positive")


@dataclass(frozen=True)
class IqaReport:
    """MSE/PSNR/SSIM triple for one (reference, test) pair."""

    mse: float
    psnr: float
    ssim: float
    roi_applied: bool


def _check_pair(ref, est):
    ref = np.asarray(ref, dtype=np.float64)
    est = np.asarray(est, dtype=np.float64)
    if ref.shape != est.shape:
        raise ValueError(f"image dimensions differ: {ref.shape} vs {est.shape}")
    return ref, est


def _check_mask(mask, shape):
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != shape[:2]:
        raise ValueError(f"mask shape {mask.shape} does not match image {shape[:2]}")
    if not mask.any():
        raise ValueError("mask selects no pixels")
    return mask


def mse(ref, est, mask=None) -> float:
    """Mean squared difference over (masked) pixels, averaged across the
    three channels.

    Parameters
    ----------
    ref, est : array_like
      Images of identical shape (H, W, 3).
    mask : array_like of bool, optional
      (H, W) region of interest; metric is restricted to true pixels.
    """
    ref, est = _check_pair(ref, est)
    sq = (ref - est) ** 2
    if mask is None:
        return float(sq.mean())
    mask = _check_mask(mask, ref.shape)
    return float(sq[mask].mean())


def psnr(ref, est, mask=None, dynamic_range: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB: 10*log10(range**2 / MSE).

    A zero MSE (identical inputs) is reported as math.inf rather than an
    error; callers should treat the sentinel as maximal quality.
    """
    err = mse(ref, est, mask)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(dynamic_range * dynamic_range / err)


def _gaussian_kernel(size: int, sigma: float) -> np.ndarray:
    half = (size - 1) / 2.0
    g = np.exp(-((np.arange(size) - half) ** 2) / (2.0 * sigma * sigma))
    kernel = np.outer(g, g)
    return kernel / kernel.sum()


def _window_means(plane: np.ndarray, size: int) -> np.ndarray:
    """Mean of every size x size window fully inside the plane (integral image)."""
    s = np.zeros((plane.shape[0] + 1, plane.shape[1] + 1), dtype=np.float64)
    np.cumsum(np.cumsum(plane, axis=0), axis=1, out=s[1:, 1:])
    total = (s[size:, size:] - s[:-size, size:] - s[size:, :-size] + s[:-size, :-size])
    return total / (size * size)


def _weighted_means(plane: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    windows = np.lib.stride_tricks.sliding_window_view(plane, kernel.shape)
    return np.einsum("ijkl,kl->ij", windows, kernel)


def _ssim_plane(ref: np.ndarray, est: np.ndarray, params: SsimParams, mask) -> float:
    size = params.window_size
    if ref.shape[0] < size or ref.shape[1] < size:
        raise ValueError(f"image {ref.shape[1]}x{ref.shape[0]} is smaller than "
                         f"the {size}x{size} SSIM window")
    if params.window == "uniform":
        stats = lambda p: _window_means(p, size)
    else:
        kernel = _gaussian_kernel(size, params.gaussian_sigma)
        stats = lambda p: _weighted_means(p, kernel)
    mu_r = stats(ref)
    mu_e = stats(est)
    var_r = stats(ref * ref) - mu_r * mu_r
    var_e = stats(est * est) - mu_e * mu_e
    cov = stats(ref * est) - mu_r * mu_e
    rng = params.dynamic_range
    c1 = (params.k1 * rng) ** 2
    c2 = (params.k2 * rng) ** 2
    ssim_map = ((2.0 * mu_r * mu_e + c1) * (2.0 * cov + c2) /
                ((mu_r * mu_r + mu_e * mu_e + c1) * (var_r + var_e + c2)))
    if mask is None:
        return float(ssim_map.mean())
    # Keep windows whose center pixel lies in the mask.
    off = (size - 1) // 2
    centers = mask[off:off + ssim_map.shape[0], off:off + ssim_map.shape[1]]
    if not centers.any():
        raise ValueError("mask contains no window centers")
    return float(ssim_map[centers].mean())


def ssim(ref, est, params: SsimParams = SsimParams(), mask=None) -> float:
    """Mean structural similarity between two images.

    Local means, variances, and covariance are computed per window with
    population normalization, combined by the standard SSIM formula, and
    averaged over all windows (or those whose centers fall in the mask).
    """
    ref, est = _check_pair(ref, est)
    if mask is not None:
        mask = _check_mask(mask, ref.shape)
    if params.per_channel:
        return float(np.mean([_ssim_plane(ref[:, :, c], est[:, :, c], params, mask)
                              for c in range(3)]))
    return _ssim_plane(luminance(ref), luminance(est), params, mask)


def evaluate_pair(ref, est, mask=None, params: SsimParams = SsimParams()) -> IqaReport:
    """All three metrics for one pair, with identical masking."""
    return IqaReport(
        mse=mse(ref, est, mask),
        psnr=psnr(ref, est, mask, dynamic_range=params.dynamic_range),
        ssim=ssim(ref, est, params, mask),
        roi_applied=mask is not None,
    )


def load_roi_mask(path) -> np.ndarray:
    """Read a region-of-interest mask image: any nonzero channel marks a
    pixel as inside the region. Returns an (H, W) bool array."""
    arr = load_image(path)
    mask = arr.max(axis=2) > 0.0
    if not mask.any():
        raise ValueError(f"ROI mask selects no pixels: {path}")
    return mask
