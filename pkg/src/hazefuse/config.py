"""Run configuration: every pipeline tunable plus batch I/O settings.

Configs serialize to a flat "key = value" text format. Values from a
config file override the defaults; command-line flags override the file.
Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Optional

from .exposure import ClaheParams, GammaSchedule
from .iqa import SsimParams
from .pyramid import FusionParams
from .weights import ConfidenceParams


@dataclass(frozen=True)
class RunConfig:
    gamma_threshold: float = 0.5
    dark_gammas: tuple = (1.2, 1.4, 1.6, 1.8)
    bright_gammas: tuple = (2.0, 3.0, 4.0, 5.0)
    tiles_x: int = 8
    tiles_y: int = 8
    clip_limit: float = 2.0
    clahe_bins: int = 256
    dmin: float = 0.5
    levels: Optional[int] = None  # None selects the size-based default
    ssim_window: str = "uniform"
    ssim_window_size: int = 8
    ssim_sigma: float = 1.5
    ssim_per_channel: bool = False
    synth_t_min: float = 0.4
    synth_t_max: float = 0.8
    synth_a_min: float = 0.7
    synth_a_max: float = 1.0
    jobs: int = 1
    input: Optional[str] = None
    output: Optional[str] = None

    def __post_init__(self):
        # Constructing the per-module parameter objects runs their own
        # validation; synth ranges and jobs are checked here.
        self.gamma_schedule()
        self.clahe_params()
        self.confidence_params()
        self.fusion_params()
        self.ssim_params()
        if not (0.0 < self.synth_t_min <= self.synth_t_max <= 1.0):
            raise ValueError("synth transmission range must satisfy 0 < min <= max <= 1")
        if not (0.0 <= self.synth_a_min <= self.synth_a_max <= 1.0):
            raise ValueError("synth airlight range must satisfy 0 <= min <= max <= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    def gamma_schedule(self) -> GammaSchedule:
        return GammaSchedule(dark_set=self.dark_gammas, bright_set=self.bright_gammas,
                             threshold=self.gamma_threshold)

    def clahe_params(self) -> ClaheParams:
        return ClaheParams(tiles_x=self.tiles_x, tiles_y=self.tiles_y,
                           clip_limit=self.clip_limit, bins=self.clahe_bins)

    def confidence_params(self) -> ConfidenceParams:
        return ConfidenceParams(d_min=self.dmin)

    def fusion_params(self) -> FusionParams:
        return FusionParams(levels=self.levels)

    def ssim_params(self) -> SsimParams:
        return SsimParams(window=self.ssim_window, window_size=self.ssim_window_size,
                          gaussian_sigma=self.ssim_sigma,
                          per_channel=self.ssim_per_channel)


def _format_value(value) -> str:
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize(config: RunConfig) -> str:
    """Render a config as one "key = value" line per field."""
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if value is None and f.name in ("input", "output"):
            continue
        lines.append(f"{f.name} = {_format_value(value)}")
    return "\n".join(lines) + "\n"


_PARSERS = {
    "gamma_threshold": float,
    "dark_gammas": lambda s: tuple(float(v) for v in s.split(",")),
    "bright_gammas": lambda s: tuple(float(v) for v in s.split(",")),
    "tiles_x": int,
    "tiles_y": int,
    "clip_limit": float,
    "clahe_bins": int,
    "dmin": float,
    "levels": lambda s: None if s.lower() == "auto" else int(s),
    "ssim_window": str,
    "ssim_window_size": int,
    "ssim_sigma": float,
    "ssim_per_channel": lambda s: {"true": True, "false": False}[s.lower()],
    "synth_t_min": float,
    "synth_t_max": float,
    "synth_a_min": float,
    "synth_a_max": float,
    "jobs": int,
    "input": str,
    "output": str,
}


def parse(text: str) -> RunConfig:
    """Parse the flat key-value format back into a RunConfig.

    Blank lines and '#' comments are ignored; unknown keys and malformed
    values raise ValueError.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _PARSERS:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        if key in values:
            raise ValueError(f"line {lineno}: duplicate config key {key!r}")
        try:
            values[key] = _PARSERS[key](value.strip())
        except (ValueError, KeyError) as exc:
            raise ValueError(f"line {lineno}: bad value for {key!r}: {value.strip()!r}") from exc
    return RunConfig(**values)


def load(path) -> RunConfig:
    """Read and parse a config file."""
    with open(path, "r", encoding="utf-8") as f:
        return parse(f.read())


def override(config: RunConfig, **changes) -> RunConfig:
    """New config with the non-None keyword values applied."""
    effective = {k: v for k, v in changes.items() if v is not None}
    return replace(config, **effective) if effective else config
