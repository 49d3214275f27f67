"""Shared rendered fixtures, session scoped because rendering dominates runtime."""

import numpy as np
import pytest

from rsvlc.acceptance import two_led_scene
from rsvlc.camera import render
from rsvlc.channel import LedSource
from rsvlc.protocol import Parity, assemble_message


@pytest.fixture(scope="session")
def two_led_image():
    """Noiseless medium-ratio capture carrying payloads A5, 5A."""
    leds, cfg = two_led_scene((0xA5, 0x5A))
    return render(leds, 0.0, cfg, t0=0.0)


@pytest.fixture(scope="session")
def four_led_image():
    """Noiseless four-LED capture (message CA FE BA BE), widely spaced."""
    from rsvlc.camera import CameraConfig

    layout = assemble_message(bytes((0xCA, 0xFE, 0xBA, 0xBE)))
    leds = tuple(
        LedSource(x=x, y=0.0, h=100.0, m=12.0, parity=slot.parity,
                  frame=slot.frame, period=8.0)
        for x, slot in zip((-105.0, -35.0, 35.0, 105.0), layout.assignments)
    )
    cfg = CameraConfig(
        rows=1024, cols=1664, row_period=1.0, pixel_pitch=0.18,
        origin_u=-1664 * 0.18 / 2.0, origin_v=-1024 * 0.18 / 2.0,
    )
    return render(leds, 0.0, cfg, t0=0.0)


@pytest.fixture(scope="session")
def ratio2_pair_image():
    """The geometry-study fixture: complementary payloads at ratio 2."""
    from rsvlc.analysis import pair_scene

    leds, cfg = pair_scene(50.0, 25.0, (0xA5, 0x5A))
    return render(leds, 0.0, cfg, t0=0.0)
