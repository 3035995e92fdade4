"""Synthetic test scene shared by the demo scripts.

Builds a colorful landscape-like composition (sky gradient, checkered
ground, a few structures) so every demo runs without any external image
files.
"""

import numpy as np


def make_scene(size=256):
    yy, xx = np.indices((size, size)) / size
    img = np.zeros((size, size, 3))

    # dusk sky gradient
    sky = np.clip(1.4 * (0.55 - yy), 0, 1)
    img[:, :, 0] = 0.30 * sky + 0.05
    img[:, :, 1] = 0.18 * sky + 0.06
    img[:, :, 2] = 0.38 * sky + 0.10

    # checkered ground plane
    ground = yy > 0.55
    cells = ((yy * 24).astype(int) + (xx * 24).astype(int)) % 2
    img[ground & (cells == 0)] = (0.32, 0.22, 0.08)
    img[ground & (cells == 1)] = (0.10, 0.16, 0.10)

    # two buildings and a sun disk
    img[(yy > 0.25) & (yy < 0.58) & (xx > 0.12) & (xx < 0.30)] = (0.25, 0.10, 0.12)
    img[(yy > 0.35) & (yy < 0.58) & (xx > 0.62) & (xx < 0.85)] = (0.12, 0.20, 0.28)
    sun = (yy - 0.18) ** 2 + (xx - 0.75) ** 2 < 0.004
    img[sun] = (0.95, 0.80, 0.35)

    # mild texture so local contrast varies
    rng = np.random.default_rng(12)
    img += rng.normal(0, 0.015, img.shape)
    return np.clip(img, 0.0, 1.0)


def output_dir(name):
    import os

    path = os.path.join(os.path.dirname(__file__), "output", name)
    os.makedirs(path, exist_ok=True)
    return path
