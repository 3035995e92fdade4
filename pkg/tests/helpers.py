"""Shared test content: structured clear images and low-contrast variants."""

import numpy as np


def random_image(rng, height, width):
    return rng.random((height, width, 3))


def gradient(size, c0, c1, axis=0):
    ramp = np.linspace(0.0, 1.0, size)
    ramp = np.broadcast_to(ramp[:, None] if axis == 0 else ramp[None, :], (size, size))
    return (1 - ramp[..., None]) * np.asarray(c0) + ramp[..., None] * np.asarray(c1)


def checkerboard(size, ca, cb, cells=16):
    n = max(size // cells, 1)
    yy, xx = np.indices((size, size))
    m = ((yy // n + xx // n) % 2).astype(float)[..., None]
    return (1 - m) * np.asarray(ca) + m * np.asarray(cb)


def radial(size, c0, c1):
    yy, xx = np.indices((size, size))
    r = np.hypot(yy - size / 2, xx - size / 2)
    r /= r.max()
    return (1 - r[..., None]) * np.asarray(c0) + r[..., None] * np.asarray(c1)


def waves(size, seed, components=4):
    """Smooth colorful interference pattern, each channel normalized to [0, 1]."""
    rng = np.random.default_rng(seed)
    yy, xx = np.indices((size, size)) / size
    img = np.zeros((size, size, 3))
    for c in range(3):
        for _ in range(components):
            fx, fy = rng.uniform(1, 9, 2)
            phase = rng.uniform(0, 2 * np.pi)
            img[:, :, c] += np.sin(2 * np.pi * (fx * xx + fy * yy) + phase)
        img[:, :, c] -= img[:, :, c].min()
        img[:, :, c] /= img[:, :, c].max()
    return img


def bundled_photos(size):
    """Bundled test photographs resized to size x size, at two dim exposures.

    Dim renditions are used on purpose: washed-out capture hurts most in
    dim scenes, and that is where fusion toward darker exposures helps.
    """
    import cv2
    from skimage import data

    out = {}
    for name, photo in (("astronaut", data.astronaut()),
                        ("chelsea", data.chelsea()),
                        ("coffee", data.coffee())):
        resized = cv2.resize(photo.astype(np.float64) / 255.0, (size, size),
                             interpolation=cv2.INTER_AREA)
        out[f"{name}_dim"] = resized * 0.55
        out[f"{name}_mid"] = resized * 0.7
    return out


def clear_suite(size=512):
    """Twenty structured clear images: photos, gradients, checkers, waves."""
    suite = bundled_photos(size)
    suite.update({
        "grad_rg": gradient(size, (0.30, 0.05, 0.05), (0.05, 0.35, 0.10)),
        "grad_bg": gradient(size, (0.05, 0.10, 0.40), (0.30, 0.30, 0.05), axis=1),
        "grad_dark": gradient(size, (0.02, 0.02, 0.10), (0.35, 0.25, 0.15)),
        "check_8": checkerboard(size, (0.25, 0.05, 0.30), (0.10, 0.30, 0.08), 8),
        "check_16": checkerboard(size, (0.35, 0.10, 0.10), (0.05, 0.25, 0.30), 16),
        "check_32": checkerboard(size, (0.30, 0.25, 0.05), (0.08, 0.08, 0.25), 32),
        "waves_0": waves(size, 0) * 0.45,
        "waves_1": waves(size, 1) * 0.40,
        "waves_2": waves(size, 2) * 0.50,
        "waves_3": waves(size, 3) * 0.35,
        "radial_a": radial(size, (0.40, 0.30, 0.10), (0.05, 0.10, 0.25)),
        "radial_b": radial(size, (0.08, 0.30, 0.25), (0.30, 0.05, 0.12)),
        "grad_mix": (gradient(size, (0.3, 0.1, 0.05), (0.05, 0.3, 0.2))
                     + checkerboard(size, (0.1, 0, 0), (0, 0.1, 0.1), 32)) / 2,
        "waves_chk": (waves(size, 4) * 0.5
                      + checkerboard(size, (0.2, 0.05, 0.1), (0.05, 0.2, 0.15), 16)) / 2,
    })
    return {name: np.clip(img, 0.0, 1.0) for name, img in sorted(suite.items())}


def compress_band(img, lo=0.4, hi=0.6, skew=1.35):
    """Squeeze an image into the [lo, hi] intensity band.

    skew > 1 pushes mass toward the bottom of the band, keeping the mean
    below the band midpoint.
    """
    a, b = img.min(), img.max()
    unit = (img - a) / (b - a) if b > a else np.zeros_like(img)
    return lo + (hi - lo) * unit ** skew


def low_contrast_suite(size=256):
    """Diverse content compressed into the [0.4, 0.6] band."""
    import cv2
    from skimage import data

    rng = np.random.default_rng(3)
    photo = cv2.resize(data.astronaut().astype(np.float64) / 255.0, (size, size),
                       interpolation=cv2.INTER_AREA)
    cat = cv2.resize(data.chelsea().astype(np.float64) / 255.0, (size, size),
                     interpolation=cv2.INTER_AREA)
    yy, xx = np.indices((size, size)) / size
    cases = {
        "photo": photo,
        "cat": cat,
        "grad": np.dstack([xx, yy, 1 - xx]),
        "noise": cv2.GaussianBlur(rng.random((size, size, 3)), (0, 0), 3),
        "waves": waves(size, 7),
        "check": checkerboard(size, (0.9, 0.2, 0.3), (0.1, 0.7, 0.6), 8) * 0.7
                 + np.dstack([xx, 0.5 * np.ones_like(xx), yy]) * 0.3,
    }
    return {name: compress_band(np.clip(img, 0.0, 1.0)) for name, img in sorted(cases.items())}
