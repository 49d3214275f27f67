"""Scene file parsing and validation."""

from pathlib import Path

import pytest

from rsvlc.errors import OddLedCount, SceneError
from rsvlc.protocol import Parity
from rsvlc.scene import load_scene, parse_scene

GOOD = """\
# two narrow-beam sources; right one listed first on purpose
period = 8
rows = 1024
cols = 512
pixel_pitch = 0.18
m = 12
led: x=25 y=0 h=100 payload=0x5A
led: x=-25 y=0 h=100 payload=0xA5
"""

MINIMAL = """\
period = 8
rows = 448
cols = 64
pixel_pitch = 0.5
led: x=-10 h=40 payload=1
led: x=10 h=40 payload=2
"""


def test_parse_good_scene():
    spec = parse_scene(GOOD)
    assert spec.message == bytes([0xA5, 0x5A])  # sorted by x, not file order
    assert spec.samples_per_bit == 8
    assert spec.rows_per_frame == 224
    assert spec.capture_bits == 128
    assert [led.x for led in spec.leds] == [-25.0, 25.0]
    assert [led.parity for led in spec.leds] == [Parity.EVEN, Parity.ODD]
    assert all(led.m == 12.0 for led in spec.leds)
    assert spec.camera.origin_u == pytest.approx(-46.08)
    assert spec.camera.origin_v == pytest.approx(-92.16)
    assert spec.t0 is None
    assert spec.ambient == 0.0


def test_led_m_overrides_global():
    text = MINIMAL.replace("led: x=10 h=40 payload=2", "led: x=10 h=40 payload=2 m=3")
    spec = parse_scene(text)
    assert [led.m for led in spec.leds] == [1.0, 3.0]


def test_explicit_exposure_start():
    spec = parse_scene(MINIMAL + "t0 = 16\n")
    assert spec.t0 == 16.0


def test_odd_led_count_rejected():
    text = MINIMAL.replace("led: x=10 h=40 payload=2\n", "")
    with pytest.raises(OddLedCount):
        parse_scene(text)


def test_rows_too_small():
    with pytest.raises(SceneError, match="cannot capture one frame"):
        parse_scene(MINIMAL.replace("rows = 448", "rows = 200"))


def test_fractional_samples_per_bit():
    with pytest.raises(SceneError, match="integer of at least 4"):
        parse_scene(MINIMAL + "row_period = 3\n")


def test_too_few_samples_per_bit():
    with pytest.raises(SceneError, match="integer of at least 4"):
        parse_scene(MINIMAL.replace("period = 8", "period = 2"))


def test_unknown_setting_reports_line():
    with pytest.raises(SceneError, match="line 2: unknown setting 'zoom'"):
        parse_scene("period = 8\nzoom = 2\n")


def test_duplicate_setting_rejected():
    with pytest.raises(SceneError, match="duplicate setting"):
        parse_scene(MINIMAL + "period = 8\n")


def test_non_numeric_value():
    with pytest.raises(SceneError, match="needs a number"):
        parse_scene(MINIMAL.replace("rows = 448", "rows = many"))


def test_line_without_equals():
    with pytest.raises(SceneError, match="expected key = value"):
        parse_scene("period\n")


def test_payload_out_of_range():
    with pytest.raises(SceneError, match="fit one byte"):
        parse_scene(MINIMAL.replace("payload=2", "payload=300"))


def test_led_record_missing_field():
    with pytest.raises(SceneError, match="led record missing"):
        parse_scene(MINIMAL.replace("led: x=10 h=40 payload=2", "led: x=10 h=40"))


def test_no_leds():
    with pytest.raises(SceneError, match="no led records"):
        parse_scene("period = 8\nrows = 448\ncols = 64\npixel_pitch = 0.5\n")


def test_missing_required_setting():
    with pytest.raises(SceneError, match="missing required settings: pixel_pitch"):
        parse_scene(MINIMAL.replace("pixel_pitch = 0.5\n", ""))


def test_negative_height_rejected():
    with pytest.raises(SceneError):
        parse_scene(MINIMAL.replace("h=40 payload=1", "h=-5 payload=1"))


def test_load_scene(tmp_path):
    path = tmp_path / "scene.txt"
    path.write_text(GOOD)
    assert load_scene(path).message == bytes([0xA5, 0x5A])


def test_bundled_scenes_parse():
    scenes = Path(__file__).parent.parent / "scenes"
    assert load_scene(scenes / "two_led.scene").message == bytes([0xA5, 0x5A])
    assert load_scene(scenes / "four_led.scene").message == bytes.fromhex("cafebabe")
