"""End-to-end image decoding and the estimator facade."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from rsvlc.decoder import FrameDecoder, decode_image, default_smooth_window
from rsvlc.errors import NoLightSource, ParityOrderError, RegionTooShort
from rsvlc.protocol import Parity, encode_frame


def test_decode_two_led_capture(two_led_image):
    report = decode_image(two_led_image, 8)
    assert report.message == bytes([0xA5, 0x5A])
    assert report.mirrored is False
    assert len(report.regions) == 2
    assert [r.parity for r in report.results] == [Parity.EVEN, Parity.ODD]
    for result in report.results:
        assert result.clock.period == pytest.approx(8.0, rel=1e-3)


def test_decode_mirrored_capture(two_led_image):
    report = decode_image(np.fliplr(two_led_image), 8)
    assert report.message == bytes([0xA5, 0x5A])
    assert report.mirrored is True


def test_decode_four_led_capture(four_led_image):
    report = decode_image(four_led_image, 8)
    assert report.message == bytes([0xCA, 0xFE, 0xBA, 0xBE])
    assert len(report.regions) == 4


def test_blank_image_raises():
    with pytest.raises(NoLightSource):
        decode_image(np.zeros((600, 200)), 8)


def test_truncated_capture_raises(two_led_image):
    with pytest.raises(RegionTooShort, match="one frame needs 224"):
        decode_image(two_led_image[:112], 8)


def test_same_parity_bands_rejected():
    # two detached stripe bands carrying the same parity cannot come from
    # alternating transmitters, so the pipeline refuses to order them
    bits = list(encode_frame(0xA5, Parity.EVEN).bits) * 2
    column = np.repeat(np.asarray(bits, dtype=float) * 0.9 + 0.05, 8)
    img = np.zeros((448, 200))
    img[:, 20:61] = column[:, None]
    img[:, 140:181] = column[:, None]
    with pytest.raises(ParityOrderError, match="EVEN,EVEN"):
        decode_image(img, 8)


def test_default_smooth_window():
    assert default_smooth_window(8) == 9
    assert default_smooth_window(7) == 7
    assert default_smooth_window(4) == 5


class TestFrameDecoder:
    def test_params_round_trip(self):
        est = FrameDecoder(samples_per_bit=8)
        params = est.get_params()
        assert params["samples_per_bit"] == 8
        assert params["min_depth"] == 0.5
        est.set_params(min_depth=0.4)
        assert est.get_params()["min_depth"] == 0.4

    def test_clone_unfitted(self, two_led_image):
        est = FrameDecoder(samples_per_bit=8).fit(two_led_image)
        fresh = clone(est)
        assert fresh.get_params() == est.get_params()
        assert not hasattr(fresh, "regions_")

    def test_fit_stores_geometry(self, two_led_image):
        est = FrameDecoder(samples_per_bit=8).fit(two_led_image)
        assert est.image_shape_ == two_led_image.shape
        assert len(est.areas_) == 1
        assert len(est.regions_) == 2

    def test_predict_before_fit_raises(self, two_led_image):
        with pytest.raises(NotFittedError):
            FrameDecoder().predict(two_led_image)

    def test_predict_shape_mismatch(self, two_led_image):
        est = FrameDecoder(samples_per_bit=8).fit(two_led_image)
        with pytest.raises(ValueError, match="shape"):
            est.predict(two_led_image[:, :-1])

    def test_fit_predict_matches_functional(self, two_led_image):
        est = FrameDecoder(samples_per_bit=8)
        message = est.fit_predict(two_led_image)
        assert message == decode_image(two_led_image, 8).message
        assert est.mirrored_ is False
