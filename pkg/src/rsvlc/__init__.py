"""Spatially parallel visible light communication through rolling shutter cameras.

An LED array blinks on-off keyed frames; a rolling shutter camera turns the
blinking into horizontal stripes; this package simulates that capture and
decodes the stripes back into bytes, including the interference region where
neighbouring LEDs overlap.

The pieces compose left to right:

    protocol -> channel -> camera        (simulate a capture)
    detector -> demod -> decoder         (read it back)
    analysis                             (when does the geometry allow it?)

`FrameDecoder` wraps the receive side behind a fit/predict estimator API.
"""

from .analysis import (
    GeometrySweepPoint,
    Regime,
    classify_regime,
    pair_scene,
    sweep_grid,
    sweep_point,
    sweep_to_csv,
)
from .camera import CameraConfig, peak_intensity, render
from .channel import LedSource, composite_intensity, radiance, radiance_general
from .decoder import DecodeReport, FrameDecoder, analyze_image, decode_image
from .demod import (
    ClockEstimate,
    RegionResult,
    decode_region,
    parse_stream,
    recover_clock,
)
from .detector import (
    EnergyProfile,
    LitArea,
    Region,
    RegionMap,
    energy_profile,
    find_lit_areas,
    split_regions,
)
from .errors import (
    AmbiguousParity,
    ConfigError,
    LengthError,
    NoLightSource,
    NoTransitions,
    OddLedCount,
    ParityOrderError,
    PreambleMismatch,
    RegionTooShort,
    SceneError,
    SyncNotFound,
    VlcError,
    WindowTooLarge,
)
from .pgm import read_pgm, write_pgm
from .protocol import (
    FRAME_LEN,
    BitFrame,
    MessageLayout,
    Parity,
    assemble_message,
    decode_frame,
    encode_frame,
    waveform,
)
from .scene import SceneSpec, load_scene, parse_scene

__version__ = "0.1.0"

__all__ = [
    "AmbiguousParity",
    "BitFrame",
    "CameraConfig",
    "ClockEstimate",
    "ConfigError",
    "DecodeReport",
    "EnergyProfile",
    "FRAME_LEN",
    "FrameDecoder",
    "GeometrySweepPoint",
    "LengthError",
    "LedSource",
    "LitArea",
    "MessageLayout",
    "NoLightSource",
    "NoTransitions",
    "OddLedCount",
    "Parity",
    "ParityOrderError",
    "PreambleMismatch",
    "Regime",
    "Region",
    "RegionMap",
    "RegionResult",
    "RegionTooShort",
    "SceneError",
    "SceneSpec",
    "SyncNotFound",
    "VlcError",
    "WindowTooLarge",
    "analyze_image",
    "assemble_message",
    "classify_regime",
    "composite_intensity",
    "decode_frame",
    "decode_image",
    "decode_region",
    "encode_frame",
    "energy_profile",
    "find_lit_areas",
    "load_scene",
    "pair_scene",
    "parse_scene",
    "parse_stream",
    "peak_intensity",
    "radiance",
    "radiance_general",
    "read_pgm",
    "recover_clock",
    "render",
    "split_regions",
    "sweep_grid",
    "sweep_point",
    "sweep_to_csv",
    "waveform",
    "write_pgm",
]
