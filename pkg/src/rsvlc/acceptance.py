"""Acceptance checks for the whole pipeline, shared by pytest and the CLI.

Each check raises AssertionError on failure and returns a short detail
string on success, so both `rsvlc selftest` and the test suite can print
one pass/fail line per criterion.
"""

from __future__ import annotations

import tempfile
import time
from dataclasses import replace
from pathlib import Path
from typing import Callable

import numpy as np

from .analysis import Regime, pair_scene, sweep_grid, sweep_point
from .camera import CameraConfig, peak_intensity, render
from .channel import LedSource, radiance, radiance_general
from .decoder import FrameDecoder, analyze_image
from .demod import parse_stream, recover_clock, remove_dc, threshold_signal
from .errors import SyncNotFound
from .protocol import (
    DATA_BITS_PER_FRAME,
    FRAME_LEN,
    BitFrame,
    Parity,
    assemble_message,
    decode_frame,
    encode_frame,
    payload_bits,
    waveform,
)

# Shared two-LED decode scene: medium height-to-spacing ratio, narrow beams
# so each LED paints a distinct stripe band tall enough for two frames.
SCENE_H = 100.0
SCENE_D = 50.0
SCENE_M = 12.0
SCENE_T_D = 8
SCENE_ROWS = 1024
SCENE_COLS = 512
SCENE_PITCH = 0.18

_PREAMBLE_SLOTS = [3 * t + k for t in range(DATA_BITS_PER_FRAME) for k in (0, 1)]
_PREAMBLE_SLOTS += list(range(3 * DATA_BITS_PER_FRAME, FRAME_LEN))
_DATA_SLOTS = [3 * t + 2 for t in range(DATA_BITS_PER_FRAME)]


def two_led_scene(
    payloads: tuple[int, int], noise_sigma: float = 0.0, seed: int = 0
) -> tuple[tuple[LedSource, ...], CameraConfig]:
    """The fixture scene used by the round-trip and localization checks."""
    layout = assemble_message(bytes(payloads))
    leds = tuple(
        LedSource(
            x=x,
            y=0.0,
            h=SCENE_H,
            m=SCENE_M,
            parity=slot.parity,
            frame=slot.frame,
            period=float(SCENE_T_D),
        )
        for x, slot in zip((-SCENE_D / 2, SCENE_D / 2), layout.assignments)
    )
    cfg = CameraConfig(
        rows=SCENE_ROWS,
        cols=SCENE_COLS,
        row_period=1.0,
        pixel_pitch=SCENE_PITCH,
        origin_u=-SCENE_COLS * SCENE_PITCH / 2.0,
        origin_v=-SCENE_ROWS * SCENE_PITCH / 2.0,
        noise_sigma=noise_sigma,
        seed=seed,
    )
    return leds, cfg


def check_frame_structure() -> str:
    """1: every frame is 28 bits of preamble-guarded data plus end marker."""
    start = time.perf_counter()
    for payload in range(256):
        for parity in (Parity.EVEN, Parity.ODD):
            frame = encode_frame(payload, parity)
            bits = frame.bits
            assert len(bits) == FRAME_LEN, f"payload {payload}: {len(bits)} bits"
            data = payload_bits(payload)
            for t in range(DATA_BITS_PER_FRAME):
                triple = bits[3 * t : 3 * t + 3]
                expect = parity.preamble + (data[t],)
                assert triple == expect, f"payload {payload} triple {t}: {triple}"
            assert bits[24:] == parity.end_marker, f"payload {payload} marker"
            assert decode_frame(bits, parity) == payload
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"structure sweep took {elapsed:.2f} s"
    return f"512 frames checked in {elapsed:.3f} s"


def check_orthogonality() -> str:
    """2: Even+Odd sum is constant through every preamble, in math and pixels."""
    period = 8.0
    offsets = period * np.linspace(0.0, 0.999, 17)
    rng = np.random.default_rng(2)
    for _ in range(25):
        pe, po = (int(b) for b in rng.integers(0, 256, 2))
        w_even = waveform(encode_frame(pe, Parity.EVEN), period)
        w_odd = waveform(encode_frame(po, Parity.ODD), period)
        for slot in _PREAMBLE_SLOTS:
            total = w_even(slot * period + offsets) + w_odd(slot * period + offsets)
            assert np.all(total == 1.0), f"slot {slot}: sum varies {total}"

    # Rendered check at the geometric midpoint: normalize by an all-on
    # reference so the vertical beam envelope drops out, then the stripe
    # contrast during preamble slots must vanish.  Identical payloads keep
    # the data slots swinging, proving the check can fail.
    leds, cfg = pair_scene(50.0, 50.0, (0xA5, 0xA5))
    img = render(leds, 0.0, cfg, t0=0.0)
    allon = BitFrame(bits=(1,) * FRAME_LEN, payload=0xFF, parity=Parity.EVEN)
    ref = render(tuple(replace(l, frame=allon) for l in leds), 0.0, cfg, t0=0.0)
    mid = cfg.cols // 2
    slot = (np.arange(cfg.rows) * cfg.row_period / leds[0].period).astype(int) % 28
    lit = ref[:, mid] > 0
    pre = np.isin(slot, _PREAMBLE_SLOTS) & lit
    contrast = float(np.abs(img[pre, mid] / ref[pre, mid] - 0.5).max())
    assert contrast < 1e-9, f"midpoint preamble contrast {contrast}"
    data = np.isin(slot, _DATA_SLOTS) & lit
    swing = img[data, mid] / ref[data, mid]
    assert swing.max() > 0.9 and swing.min() < 0.1, "data slots should swing"
    return f"waveform sums exact; rendered midpoint contrast {contrast:.1e}"


def check_lambertian_identity() -> str:
    """3: the general radiance law at order 1 matches the closed inverse form."""
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(1000):
        x, y, u, v = rng.uniform(-100, 100, 4)
        h = rng.uniform(1.0, 200.0)
        c1 = rng.uniform(0.1, 10.0)
        led = LedSource(x=x, y=y, h=h, m=1.0, c1=c1)
        general = radiance_general(led, u, v)
        closed = radiance(led, u, v)
        worst = max(worst, abs(general - closed) / abs(closed))
    assert worst < 1e-12, f"worst relative error {worst:.3e}"
    return f"1000 geometries, worst relative error {worst:.1e}"


def check_round_trip() -> str:
    """4: 100 random payload pairs decode with zero bit errors, noiselessly."""
    start = time.perf_counter()
    rng = np.random.default_rng(42)
    pairs = [tuple(int(b) for b in rng.integers(0, 256, 2)) for _ in range(100)]
    pairs.append((0x37, 0x37))  # identical payloads: weakest valley
    failures = []
    decoder = FrameDecoder(samples_per_bit=SCENE_T_D)
    for pair in pairs:
        leds, cfg = two_led_scene(pair)
        img = render(leds, 0.0, cfg, t0=0.0)
        got = decoder.fit_predict(img)
        if got != bytes(pair):
            failures.append((pair, got))
    elapsed = time.perf_counter() - start
    assert not failures, f"{len(failures)} mismatches, first: {failures[0]}"
    assert elapsed < 30.0, f"round trip took {elapsed:.1f} s"
    return f"{len(pairs)} pairs, zero bit errors, {elapsed:.1f} s"


def check_interference_localization() -> str:
    """5: the detected interference center stays near the geometric midpoint."""
    mid_col = 256.0  # the column where the between-LED axis crosses u = 0
    centers = []
    for s in range(20):
        rng = np.random.default_rng(1000 + s)
        pair = tuple(int(b) for b in rng.integers(0, 256, 2))
        t0 = float(rng.uniform(0.0, FRAME_LEN * SCENE_T_D))
        leds, cfg = two_led_scene(pair, seed=2000 + s)
        sigma = 0.02 * peak_intensity(leds, 0.0, cfg)
        cfg = replace(cfg, noise_sigma=sigma)
        img = render(leds, 0.0, cfg, t0=t0)
        regions = [r for a in analyze_image(img, SCENE_T_D) for r in a.regions]
        assert len(regions) == 2, f"seed {s}: {len(regions)} regions"
        center = (regions[0].col_end + regions[1].col_start) / 2.0
        assert abs(center - mid_col) <= SCENE_T_D, f"seed {s}: center {center}"
        centers.append(center)
    spread = max(abs(c - mid_col) for c in centers)
    return f"20 noisy captures, worst center offset {spread:.1f} of {SCENE_T_D} cols"


def check_regimes() -> str:
    """6: the three canonical height-to-spacing regimes classify as expected."""
    near = sweep_point(50.0, 10.0, payloads=(0xA5, 0xC3))
    assert near.regime is Regime.POINT_SOURCE, f"ratio 5: {near.regime}"
    assert near.e_min >= 0.9, f"ratio 5: E_min {near.e_min}"

    medium = sweep_point(50.0, 25.0, payloads=(0xA5, 0x5A))
    assert medium.regime is Regime.SEPARABLE, f"ratio 2: {medium.regime}"
    assert medium.n_transmission == 2, f"ratio 2: {medium.n_transmission} spans"
    assert medium.min_col is not None, "ratio 2: no interference center"

    far = sweep_point(50.0, 50.0 / 0.3, m=0.5)
    assert far.regime is Regime.LOW_ENERGY_INTERFERENCE, f"ratio 0.3: {far.regime}"
    assert far.area_ratio > 1.0, f"ratio 0.3: area ratio {far.area_ratio}"
    return (
        f"ratio 5 E_min {near.e_min:.2f}; ratio 2 E_min {medium.e_min:.2f} "
        f"with center; ratio 0.3 area ratio {far.area_ratio:.2f}"
    )


def check_monotone_detectability() -> str:
    """7: valley depth grows with spacing; the optimal band is all separable."""
    spacings = [10, 15, 20, 25, 30, 35, 40, 50, 60, 70, 80, 90, 100]
    e_mins = [
        sweep_point(50.0, float(d), payloads=(0xA5, 0xC3)).e_min for d in spacings
    ]
    drops = all(b <= a + 1e-12 for a, b in zip(e_mins, e_mins[1:]))
    assert drops, f"E_min not non-increasing: {e_mins}"

    points = sweep_grid([40.0, 50.0, 60.0], [25, 40, 60, 80, 100], payloads=(0xA5, 0x5A))
    band = [p for p in points if 0.5 <= p.ratio <= 2.0]
    assert band, "no grid points in the optimal band"
    off = [p for p in band if p.regime is not Regime.SEPARABLE]
    assert not off, f"{len(off)} band points not separable: {off[0]}"
    return (
        f"E_min falls {e_mins[0]:.2f} -> {e_mins[-1]:.2f} over 13 spacings; "
        f"{len(band)} band points all separable"
    )


def check_rotation_sync() -> str:
    """8: sync is rotation invariant and almost never fires on random bits."""
    for payload in (0x00, 0xA5, 0xFF, 0x5A, 0x37):
        for parity in (Parity.EVEN, Parity.ODD):
            bits = list(encode_frame(payload, parity).bits)
            for rot in range(FRAME_LEN):
                rotated = bits[rot:] + bits[:rot]
                got = parse_stream(rotated, parity)
                assert got == payload, f"rotation {rot}: {got} != {payload}"

    rng = np.random.default_rng(12345)
    trials = 10_000
    hits = 0
    for _ in range(trials):
        stream = [int(b) for b in rng.integers(0, 2, 2 * FRAME_LEN)]
        for parity in (Parity.EVEN, Parity.ODD):
            try:
                parse_stream(stream, parity)
                hits += 1
                break
            except SyncNotFound:
                pass
    rate = hits / trials
    assert rate < 0.05, f"false sync rate {rate:.4f}"
    return f"280 rotations exact; false sync rate {rate:.4f} on {trials} streams"


def check_clock_robustness() -> str:
    """9: one frame of clean stripes pulls a 10% budget error under 5%."""
    rng = np.random.default_rng(9)
    worst = 0.0
    for payload in rng.integers(0, 256, 50):
        for parity in (Parity.EVEN, Parity.ODD):
            frame = encode_frame(int(payload), parity)
            for true_period in (16, 20):
                signal = np.repeat(np.array(frame.bits, dtype=float), true_period)
                levels = threshold_signal(remove_dc(signal, true_period))
                for nominal in (0.9 * true_period, 1.1 * true_period):
                    clock = recover_clock(levels, nominal)
                    err = abs(clock.period - true_period) / true_period
                    worst = max(worst, err)
    assert worst < 0.05, f"worst relative period error {worst:.4f}"
    return f"200 fixtures, worst relative period error {worst:.1e}"


_SCENE_TEXT = """\
period = 8
rows = 1024
cols = 512
pixel_pitch = 0.18
m = 12
noise_sigma = 2e-6
seed = 77
led: x=-25 y=0 h=100 payload=0xB4
led: x=25  y=0 h=100 payload=0x2D
"""


def check_determinism() -> str:
    """10: the same CLI inputs and seed give bit-identical artifacts twice."""
    import contextlib
    import io

    from .cli import main as cli_main

    def main(argv: list[str]) -> int:
        with contextlib.redirect_stdout(io.StringIO()):
            return cli_main(argv)

    with tempfile.TemporaryDirectory() as tmp:
        base = Path(tmp)
        scene = base / "pair.scene"
        scene.write_text(_SCENE_TEXT)

        outputs = []
        for run in range(2):
            img = base / f"cap{run}.pgm"
            prof = base / f"prof{run}.csv"
            sig = base / f"sig{run}.csv"
            sweep = base / f"sweep{run}.csv"
            assert main(["simulate", str(scene), "-o", str(img)]) == 0
            assert (
                main(
                    [
                        "decode",
                        str(img),
                        "-b",
                        "8",
                        "--profile-csv",
                        str(prof),
                        "--signals-csv",
                        str(sig),
                    ]
                )
                == 0
            )
            assert (
                main(
                    [
                        "sweep",
                        "--heights",
                        "50",
                        "--spacings",
                        "25,100",
                        "-o",
                        str(sweep),
                        "--seed",
                        "5",
                    ]
                )
                == 0
            )
            sig_second = sig.with_name(f"{sig.stem}_1{sig.suffix}")
            outputs.append([p.read_bytes() for p in (img, prof, sig, sig_second, sweep)])
        for first, second in zip(*outputs):
            assert first == second, "artifacts differ between identical runs"
    return "PGM, profile, signal and sweep CSVs bit-identical across two runs"


CRITERIA: tuple[tuple[int, str, Callable[[], str]], ...] = (
    (1, "frame structure", check_frame_structure),
    (2, "preamble orthogonality", check_orthogonality),
    (3, "Lambertian consistency", check_lambertian_identity),
    (4, "end-to-end round trip", check_round_trip),
    (5, "interference localization", check_interference_localization),
    (6, "regime reproduction", check_regimes),
    (7, "monotone detectability", check_monotone_detectability),
    (8, "rotation-invariant sync", check_rotation_sync),
    (9, "clock robustness", check_clock_robustness),
    (10, "determinism", check_determinism),
)


def run_all(verbose: bool = False) -> bool:
    """Run every criterion; print one line each; True when all pass."""
    all_ok = True
    for number, title, func in CRITERIA:
        try:
            detail = func()
            line = f"PASS {number:2d} {title}: {detail}"
        except AssertionError as exc:
            all_ok = False
            line = f"FAIL {number:2d} {title}: {exc}"
        if verbose:
            print(line)
    return all_ok
