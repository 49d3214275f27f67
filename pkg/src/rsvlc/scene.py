"""Plain-text scene files describing an LED array and the camera watching it.

The format is line oriented and diff friendly.  Global settings are
``key = value`` lines, each light source is one ``led:`` record with
space-separated ``key=value`` tokens, ``#`` starts a comment:

    # two sources, narrow beams
    period = 8
    rows = 1024
    cols = 512
    pixel_pitch = 0.18
    m = 12
    led: x=-25 y=0 h=100 payload=0xA5
    led: x=25  y=0 h=100 payload=0x5A

Payload bytes are assigned to sources in left-to-right order along the X
axis and parities alternate starting Even, so a scene file never states a
parity explicitly.  Payloads accept any integer literal Python does
(decimal, ``0x``, ``0b``).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .camera import CameraConfig
from .channel import LedSource
from .errors import SceneError
from .protocol import FRAME_LEN, assemble_message

MIN_SAMPLES_PER_BIT = 4

_GLOBAL_DEFAULTS = {
    "row_period": 1.0,
    "ambient": 0.0,
    "noise_sigma": 0.0,
    "seed": 0,
    "m": 1.0,
    "c1": 1.0,
}
_GLOBAL_REQUIRED = ("period", "rows", "cols", "pixel_pitch")
_GLOBAL_OPTIONAL = ("origin_u", "origin_v", "t0")
_GLOBAL_KEYS = set(_GLOBAL_DEFAULTS) | set(_GLOBAL_REQUIRED) | set(_GLOBAL_OPTIONAL)
_INT_KEYS = {"rows", "cols", "seed"}
_LED_REQUIRED = ("x", "h", "payload")
_LED_KEYS = {"x", "y", "h", "payload", "m", "c1"}


@dataclass(frozen=True)
class SceneSpec:
    """A fully validated scene: modulated sources plus the camera watching them."""

    leds: tuple[LedSource, ...]
    camera: CameraConfig
    ambient: float = 0.0
    t0: float | None = None

    @property
    def samples_per_bit(self) -> int:
        return int(round(self.leds[0].period / self.camera.row_period))

    @property
    def rows_per_frame(self) -> int:
        return FRAME_LEN * self.samples_per_bit

    @property
    def capture_bits(self) -> int:
        """Bit slots one captured image spans."""
        return self.camera.rows // self.samples_per_bit

    @property
    def message(self) -> bytes:
        return bytes(led.frame.payload for led in self.leds)


def _parse_value(key: str, raw: str, line_no: int):
    try:
        if key in _INT_KEYS:
            return int(raw, 0)
        return float(raw)
    except ValueError:
        raise SceneError(f"line {line_no}: {key} needs a number, got {raw!r}") from None


def _parse_led_record(rest: str, line_no: int) -> dict:
    record: dict = {}
    for token in rest.split():
        if "=" not in token:
            raise SceneError(
                f"line {line_no}: led fields are key=value tokens, got {token!r}"
            )
        key, _, raw = token.partition("=")
        if key not in _LED_KEYS:
            raise SceneError(f"line {line_no}: unknown led field {key!r}")
        if key in record:
            raise SceneError(f"line {line_no}: duplicate led field {key!r}")
        if key == "payload":
            try:
                record[key] = int(raw, 0)
            except ValueError:
                raise SceneError(
                    f"line {line_no}: payload needs an integer, got {raw!r}"
                ) from None
        else:
            record[key] = _parse_value(key, raw, line_no)
    missing = [k for k in _LED_REQUIRED if k not in record]
    if missing:
        raise SceneError(f"line {line_no}: led record missing {', '.join(missing)}")
    if not 0 <= record["payload"] <= 255:
        raise SceneError(
            f"line {line_no}: payload must fit one byte, got {record['payload']}"
        )
    return record


def parse_scene(text: str) -> SceneSpec:
    """Parse and validate a scene file's contents."""
    settings: dict = {}
    led_records: list[dict] = []
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("led:"):
            led_records.append(_parse_led_record(line[4:], line_no))
            continue
        if "=" not in line:
            raise SceneError(f"line {line_no}: expected key = value, got {line!r}")
        key, _, raw = (part.strip() for part in line.partition("="))
        if key not in _GLOBAL_KEYS:
            raise SceneError(f"line {line_no}: unknown setting {key!r}")
        if key in settings:
            raise SceneError(f"line {line_no}: duplicate setting {key!r}")
        settings[key] = _parse_value(key, raw, line_no)

    missing = [k for k in _GLOBAL_REQUIRED if k not in settings]
    if missing:
        raise SceneError(f"scene file missing required settings: {', '.join(missing)}")
    for key, default in _GLOBAL_DEFAULTS.items():
        settings.setdefault(key, default)
    if not led_records:
        raise SceneError("scene file has no led records")

    period = settings["period"]
    row_period = settings["row_period"]
    if row_period <= 0:
        raise SceneError(f"row_period must be positive, got {row_period}")
    samples = period / row_period
    if abs(samples - round(samples)) > 1e-9 or round(samples) < MIN_SAMPLES_PER_BIT:
        raise SceneError(
            "period over row_period must be an integer of at least "
            f"{MIN_SAMPLES_PER_BIT} samples per bit, got {samples:g}"
        )
    samples_per_bit = int(round(samples))
    rows = int(settings["rows"])
    frame_rows = FRAME_LEN * samples_per_bit
    if rows < frame_rows:
        raise SceneError(
            f"camera rows={rows} cannot capture one frame: "
            f"{FRAME_LEN} bits at {samples_per_bit} rows per bit need "
            f"{frame_rows} rows"
        )

    led_records.sort(key=lambda r: r["x"])
    layout = assemble_message([r["payload"] for r in led_records])
    try:
        leds = tuple(
            LedSource(
                x=record["x"],
                y=record.get("y", 0.0),
                h=record["h"],
                m=record.get("m", settings["m"]),
                c1=record.get("c1", settings["c1"]),
                parity=slot.parity,
                frame=slot.frame,
                period=float(period),
            )
            for record, slot in zip(led_records, layout.assignments)
        )
    except ValueError as exc:
        raise SceneError(str(exc)) from exc

    cols = int(settings["cols"])
    pitch = settings["pixel_pitch"]
    camera = CameraConfig(
        rows=rows,
        cols=cols,
        row_period=row_period,
        pixel_pitch=pitch,
        origin_u=settings.get("origin_u", -cols * pitch / 2.0),
        origin_v=settings.get("origin_v", -rows * pitch / 2.0),
        noise_sigma=settings["noise_sigma"],
        seed=int(settings["seed"]),
    )
    try:
        camera.validate()
    except Exception as exc:
        raise SceneError(str(exc)) from exc

    return SceneSpec(
        leds=leds,
        camera=camera,
        ambient=settings["ambient"],
        t0=settings.get("t0"),
    )


def load_scene(path: str | Path) -> SceneSpec:
    """Read and parse a scene file from disk."""
    return parse_scene(Path(path).read_text())
