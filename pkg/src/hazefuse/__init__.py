"""Multi-exposure fusion enhancement for hazy and low-contrast images.

One input image is expanded into five exposure variants (four adaptive
gamma corrections plus CLAHE), scored per pixel by local ternary texture
and color saturation, and blended across Laplacian pyramid scales into a
single enhanced image. The package also ships full-reference quality
metrics (MSE, PSNR, SSIM) with optional ROI masking and a synthetic haze
generator for self-contained evaluation.
"""

from .image import (
    channel_histogram,
    intensity_stddev,
    load_image,
    luminance,
    mean_intensity,
    save_image,
    validate_image,
)
from .exposure import (
    ClaheParams,
    ExposureStack,
    GammaSchedule,
    build_stack,
    clahe,
    gamma_correct,
    select_gamma_set,
)
from .weights import (
    ConfidenceParams,
    code_pattern,
    confidence_interval,
    raw_weight,
    saturation_map,
    texture_feature,
    texture_map,
    weight_maps,
)
from .pyramid import (
    FusionParams,
    LaplacianPyramid,
    collapse,
    default_levels,
    enhance,
    fuse,
    gaussian_pyramid,
    laplacian_pyramid,
)
from .iqa import (
    IqaReport,
    SsimParams,
    evaluate_pair,
    load_roi_mask,
    mse,
    psnr,
    ssim,
)
from .synth import HazeParams, apply_haze, ramp_depth, transmission_from_depth
from .config import RunConfig

__version__ = "0.1.0"

__all__ = [
    "ClaheParams", "ConfidenceParams", "ExposureStack", "FusionParams",
    "GammaSchedule", "HazeParams", "IqaReport", "LaplacianPyramid",
    "RunConfig", "SsimParams",
    "apply_haze", "build_stack", "channel_histogram", "clahe",
    "code_pattern", "collapse", "confidence_interval", "default_levels",
    "enhance", "evaluate_pair", "fuse", "gamma_correct", "gaussian_pyramid",
    "intensity_stddev", "laplacian_pyramid", "load_image", "load_roi_mask",
    "luminance", "mean_intensity", "mse", "psnr", "ramp_depth", "raw_weight",
    "saturation_map", "save_image", "select_gamma_set", "ssim",
    "texture_feature", "texture_map", "transmission_from_depth",
    "validate_image", "weight_maps",
]
