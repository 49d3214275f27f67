"""Lambertian reflection model of modulated LEDs on a flat surface.

Geometry is in millimetres.  Each LED sits at height ``h`` above the surface
with its beam axis perpendicular to it, so the irradiation and incidence
angles coincide and the radiance at surface offset (dx, dy) reduces to

    c1 * h**2 / (h**2 + dx**2 + dy**2)**2          (order m = 1)

with the general-order form ``(c1 / d**2) * cos(phi)**(m + 1)``.  Intensities
are relative; ``c1`` defaults to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .protocol import BitFrame, Parity, waveform


@dataclass(frozen=True)
class LedSource:
    """One modulated LED: position, beam shape, and the frame it repeats.

    ``frame`` may be None for an unmodulated (always-on) source, which is
    convenient for static test scenes.
    """

    x: float
    y: float
    h: float
    m: float = 1.0
    c1: float = 1.0
    parity: Parity = Parity.EVEN
    frame: BitFrame | None = None
    period: float = 1.0

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError(f"LED height must be positive, got {self.h}")
        if self.m < 0:
            raise ValueError(f"Lambertian order must be >= 0, got {self.m}")
        if self.c1 <= 0:
            raise ValueError(f"gain constant must be positive, got {self.c1}")
        if self.period <= 0:
            raise ValueError(f"modulation period must be positive, got {self.period}")

    def signal(self):
        """Time -> {0, 1} waveform of this LED (constant 1 when unmodulated)."""
        if self.frame is None:
            return lambda t: np.ones_like(np.asarray(t, dtype=float)) if not np.isscalar(t) else 1.0
        return waveform(self.frame, self.period)


def order_from_cutoff(half_angle_deg: float) -> float:
    """Lambertian order for a given cutoff semi-angle (60 degrees -> m = 1)."""
    if not 0 < half_angle_deg < 90:
        raise ValueError(f"cutoff semi-angle must be in (0, 90) degrees, got {half_angle_deg}")
    return -math.log(2.0) / math.log(math.cos(math.radians(half_angle_deg)))


def radiance(led: LedSource, u, v):
    """Surface radiance of an order-1 LED at surface point(s) (u, v)."""
    dx = np.asarray(u, dtype=float) - led.x
    dy = np.asarray(v, dtype=float) - led.y
    h2 = led.h * led.h
    denom = h2 + dx * dx + dy * dy
    value = led.c1 * h2 / (denom * denom)
    return float(value) if np.isscalar(u) and np.isscalar(v) else value


def radiance_general(led: LedSource, u, v):
    """General-order Lambertian radiance ``(c1/d^2) cos(phi)^(m+1)``.

    Agrees with :func:`radiance` when ``led.m == 1``.
    """
    dx = np.asarray(u, dtype=float) - led.x
    dy = np.asarray(v, dtype=float) - led.y
    d2 = led.h * led.h + dx * dx + dy * dy
    cos_phi = led.h / np.sqrt(d2)
    value = led.c1 / d2 * cos_phi ** (led.m + 1)
    return float(value) if np.isscalar(u) and np.isscalar(v) else value


def led_radiance(led: LedSource, u, v):
    """Radiance of an LED at (u, v), using the order-1 closed form when it applies."""
    if led.m == 1.0:
        return radiance(led, u, v)
    return radiance_general(led, u, v)


def composite_intensity(leds: Sequence[LedSource], u, v, t, ambient: float = 0.0):
    """Total surface intensity at time ``t``: sum of each LED's radiance
    gated by its waveform, plus the constant ambient level."""
    if not leds:
        raise ValueError("scene needs at least one LED")
    if ambient < 0:
        raise ValueError(f"ambient level must be >= 0, got {ambient}")
    total = None
    for led in leds:
        contribution = led_radiance(led, u, v) * led.signal()(t)
        total = contribution if total is None else total + contribution
    return total + ambient
