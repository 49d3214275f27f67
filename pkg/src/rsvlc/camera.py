"""Rolling-shutter camera simulator.

Pixel rows are exposed one after another: every pixel of row ``r`` samples
the scene at the single instant ``t0 + r * row_period``, so temporal
modulation of the lighting turns into horizontal stripes.  Columns map to
the surface X axis, rows to the Y axis (and to time).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import LedSource, led_radiance
from .errors import ConfigError
from .protocol import FRAME_LEN


@dataclass(frozen=True)
class CameraConfig:
    """Sensor geometry and sampling of the simulated camera.

    ``row_period`` is the time between consecutive row exposures (s) and
    ``pixel_pitch`` the surface extent of one pixel (mm).  ``origin`` is the
    surface coordinate of pixel (0, 0).
    """

    rows: int
    cols: int
    row_period: float
    pixel_pitch: float
    origin_u: float = 0.0
    origin_v: float = 0.0
    noise_sigma: float = 0.0
    seed: int = 0

    def validate(self):
        if self.rows < 1 or self.cols < 1:
            raise ConfigError(f"image must have at least 1x1 pixels, got {self.rows}x{self.cols}")
        if self.row_period <= 0:
            raise ConfigError(f"row sampling period must be positive, got {self.row_period}")
        if self.pixel_pitch <= 0:
            raise ConfigError(f"pixel pitch must be positive, got {self.pixel_pitch}")
        if self.noise_sigma < 0:
            raise ConfigError(f"noise sigma must be >= 0, got {self.noise_sigma}")


def surface_point(r: int, c: int, cfg: CameraConfig) -> tuple[float, float]:
    """Surface coordinate (u, v) seen by pixel (row r, column c)."""
    if not 0 <= r < cfg.rows:
        raise IndexError(f"row {r} out of range 0..{cfg.rows - 1}")
    if not 0 <= c < cfg.cols:
        raise IndexError(f"column {c} out of range 0..{cfg.cols - 1}")
    return (cfg.origin_u + c * cfg.pixel_pitch, cfg.origin_v + r * cfg.pixel_pitch)


def pixel_grid(cfg: CameraConfig) -> tuple[np.ndarray, np.ndarray]:
    """Surface coordinates of every pixel as broadcastable (u, v) arrays."""
    uu = cfg.origin_u + np.arange(cfg.cols) * cfg.pixel_pitch
    vv = cfg.origin_v + np.arange(cfg.rows) * cfg.pixel_pitch
    return uu[np.newaxis, :], vv[:, np.newaxis]


def peak_intensity(leds: Sequence[LedSource], ambient: float, cfg: CameraConfig) -> float:
    """Brightest possible noiseless intensity over the frame (all LEDs on).

    Used as the normalization divisor, emulating an exposure fixed to the
    scene's dynamic range; it makes the rendered image invariant to a common
    scale on every c1 and the ambient level.
    """
    uu, vv = pixel_grid(cfg)
    total = np.zeros((cfg.rows, cfg.cols))
    for led in leds:
        total += led_radiance(led, uu, vv)
    return float(np.max(total) + ambient)


def render(
    leds: Sequence[LedSource],
    ambient: float,
    cfg: CameraConfig,
    t0: float | None = None,
) -> np.ndarray:
    """Render one rolling-shutter frame as a (rows, cols) float array in [0, 1].

    Row ``r`` samples every LED waveform at ``t0 + r * row_period``
    (instantaneous exposure).  Gaussian pixel noise of ``cfg.noise_sigma``
    (in raw intensity units) is added before normalization by the scene's
    peak noiseless intensity, then values are clamped to [0, 1].

    When ``t0`` is None a capture phase is drawn uniformly from one full
    frame repetition, using ``cfg.seed``; an explicit value makes the
    render fully deterministic.
    """
    cfg.validate()
    if not leds:
        raise ConfigError("scene needs at least one LED")
    if ambient < 0:
        raise ConfigError(f"ambient level must be >= 0, got {ambient}")

    rng = np.random.default_rng(cfg.seed)
    if t0 is None:
        longest = max(led.period for led in leds)
        t0 = float(rng.uniform(0.0, FRAME_LEN * longest))

    uu, vv = pixel_grid(cfg)
    t = t0 + np.arange(cfg.rows) * cfg.row_period
    img = np.full((cfg.rows, cfg.cols), float(ambient))
    for led in leds:
        field = led_radiance(led, uu, vv)
        img += field * np.asarray(led.signal()(t))[:, np.newaxis]

    if cfg.noise_sigma > 0:
        img += rng.normal(0.0, cfg.noise_sigma, size=img.shape)

    img /= peak_intensity(leds, ambient, cfg)
    np.clip(img, 0.0, 1.0, out=img)
    return img
