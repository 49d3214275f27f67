"""Receiver phase 3: turn one transmission region into a payload byte.

The region is collapsed to a 1-D row signal, DC is removed with a moving
average spanning three bit-periods (lighting varies along the scan axis, so
a global mean will not do), the result is hard-thresholded, an early-late
gate recovers the bit clock from the transition timing, and the sliced bit
stream is searched for a frame alignment.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .detector import Region
from .errors import (
    AmbiguousParity,
    LengthError,
    NoTransitions,
    PreambleMismatch,
    RegionTooShort,
    SyncNotFound,
    WindowTooLarge,
)
from .filters import centered_moving_average
from .protocol import FRAME_LEN, Parity, decode_frame

# The preambles guarantee frequent transitions; below this count the region
# is unmodulated (or saturated) and clock recovery is meaningless.
MIN_TRANSITIONS = 8

# Loop gains of the timing-recovery gate, per observed transition.
DEFAULT_PHASE_GAIN = 0.3
DEFAULT_PERIOD_GAIN = 0.05


@dataclass(frozen=True)
class ClockEstimate:
    """Recovered bit clock: samples per bit and offset of the first boundary."""

    period: float
    phase: float

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError(f"clock period must be positive, got {self.period}")
        if not 0 <= self.phase < self.period:
            raise ValueError(f"phase must lie in [0, period), got {self.phase}")


def collapse(img: np.ndarray, region: Region, samples_per_bit: int) -> np.ndarray:
    """Average the region's columns into one intensity sample per row.

    Columns within one bit-period of the region edges are excluded when the
    region is wider than four bit-periods; the edges border interference
    zones where the signal is least reliable.
    """
    c0, c1 = region.col_start, region.col_end
    if c1 - c0 + 1 > 4 * samples_per_bit:
        c0 += samples_per_bit
        c1 -= samples_per_bit
    signal = np.asarray(img, dtype=float)[region.row_min : region.row_max + 1, c0 : c1 + 1].mean(
        axis=1
    )
    if len(signal) < FRAME_LEN * samples_per_bit:
        raise RegionTooShort(
            f"region spans {len(signal)} rows; one frame needs "
            f"{FRAME_LEN * samples_per_bit}"
        )
    return signal


def remove_dc(signal, samples_per_bit: int) -> np.ndarray:
    """Subtract a centered moving average spanning three bit-periods."""
    s = np.asarray(signal, dtype=float)
    window = 3 * samples_per_bit
    if len(s) <= window:
        raise WindowTooLarge(f"signal of {len(s)} samples is no longer than the {window}-sample window")
    return s - centered_moving_average(s, window)


def threshold_signal(signal) -> np.ndarray:
    """Map each sample to +0.5 (>= 0) or -0.5 (< 0)."""
    return np.where(np.asarray(signal, dtype=float) >= 0, 0.5, -0.5)


def _transitions(signal) -> np.ndarray:
    """Positions of level changes, halfway between the two samples involved."""
    s = np.asarray(signal, dtype=float)
    return np.nonzero(np.diff(s) != 0)[0] + 0.5


def recover_clock(
    signal,
    nominal_period: float,
    phase_gain: float = DEFAULT_PHASE_GAIN,
    period_gain: float = DEFAULT_PERIOD_GAIN,
    passes: int = 3,
) -> ClockEstimate:
    """Early-late gate timing recovery on a thresholded signal.

    Starting from ``nominal_period``, each observed transition is compared
    with the nearest predicted bit boundary; the timing error nudges the
    boundary estimate by ``phase_gain`` and the period by ``period_gain``
    per elapsed bit.  The gate runs a few passes over the transition list
    so the period settles, then a least-squares fit of transition times
    against their boundary indices removes the small period bias the gate
    can keep when the bit pattern offers few distinct transition spacings.
    """
    t = _transitions(signal)
    if len(t) < MIN_TRANSITIONS:
        raise NoTransitions(f"{len(t)} transitions found, need at least {MIN_TRANSITIONS}")
    period = float(nominal_period)
    edge = float(t[0])
    for _ in range(passes):
        edge = float(t[0])
        for x in t[1:]:
            n = max(1, round((x - edge) / period))
            predicted = edge + n * period
            error = x - predicted
            period += period_gain * error / n
            edge = predicted + phase_gain * error
    # Refine globally.  DC tracking can displace a few crossings well
    # inside a bit, so the final estimate must not trust every transition
    # equally: take a drift-free period from the median spacing-per-bit,
    # anchor the boundary grid on whichever transition agrees with the
    # most others, then fit a least-squares grid through the agreeing
    # transitions only.
    spacing = np.diff(t)
    per_bit = spacing / np.maximum(1, np.round(spacing / period))
    period = float(np.median(per_bit))
    residual_matrix = (t[np.newaxis, :] - t[:, np.newaxis] + period / 2) % period - period / 2
    agreement = np.count_nonzero(np.abs(residual_matrix) <= period / 4, axis=1)
    edge = float(t[int(np.argmax(agreement))])
    for _ in range(3):
        k = np.round((t - edge) / period)
        inlier = np.abs(t - (edge + k * period)) <= period / 4
        ki, ti = k[inlier], t[inlier]
        if len(ti) < max(4, len(t) // 4) or len(np.unique(ki)) < 2:
            break
        k_spread = ki - ki.mean()
        period = float(np.dot(k_spread, ti - ti.mean()) / np.dot(k_spread, k_spread))
        edge = float(ti.mean() - period * ki.mean())
    return ClockEstimate(period=period, phase=float(edge % period))


def slice_bits(signal, clock: ClockEstimate) -> list[int]:
    """Sample the thresholded signal at bit centers; 1 where positive."""
    s = np.asarray(signal, dtype=float)
    bits = []
    k = 0
    while True:
        idx = round(clock.phase + (k + 0.5) * clock.period)
        if idx >= len(s):
            break
        bits.append(1 if s[idx] > 0 else 0)
        k += 1
    return bits


def parse_stream(bits: Sequence[int], parity: Parity) -> int:
    """Find the frame alignment in a sliced bit stream and decode its byte.

    Every offset where an end marker could sit is tried against the full
    frame grammar; because the transmitter repeats the frame endlessly, the
    stream is also treated as cyclic, so any clean window of at least 28
    bits is decodable regardless of capture phase.
    """
    b = [int(x) & 1 for x in bits]
    if len(b) < FRAME_LEN:
        raise SyncNotFound(f"stream of {len(b)} bits is shorter than one {FRAME_LEN}-bit frame")
    for offset in range(len(b) - FRAME_LEN + 1):
        try:
            return decode_frame(b[offset : offset + FRAME_LEN], parity)
        except PreambleMismatch:
            continue
    extended = b + b[: FRAME_LEN - 1]
    for offset in range(len(b) - FRAME_LEN + 1, len(b)):
        try:
            return decode_frame(extended[offset : offset + FRAME_LEN], parity)
        except PreambleMismatch:
            continue
    raise SyncNotFound(f"no valid {parity.name}-parity frame alignment in {len(b)} bits")


def infer_parity(marker: Sequence[int]) -> Parity:
    """Identify the transmitter parity from a 4-bit end marker."""
    m = tuple(int(x) & 1 for x in marker)
    if len(m) != 4:
        raise LengthError(f"end marker is 4 bits, got {len(m)}")
    if m == Parity.EVEN.end_marker:
        return Parity.EVEN
    if m == Parity.ODD.end_marker:
        return Parity.ODD
    raise AmbiguousParity(f"marker {''.join(str(x) for x in m)} matches neither parity")


@dataclass(frozen=True)
class RegionResult:
    """Decoded output and diagnostics for one transmission region."""

    payload: int
    parity: Parity
    clock: ClockEstimate
    bits: tuple[int, ...]
    raw: np.ndarray
    dc_removed: np.ndarray
    thresholded: np.ndarray


def decode_region(
    img: np.ndarray,
    region: Region,
    samples_per_bit: int,
    phase_gain: float = DEFAULT_PHASE_GAIN,
    period_gain: float = DEFAULT_PERIOD_GAIN,
) -> RegionResult:
    """Run the full demodulation pipeline on one region.

    The region's parity is not trusted from geometry alone: the hint is
    tried first and the complementary parity second, so a mirrored capture
    still decodes.
    """
    raw = collapse(img, region, samples_per_bit)
    flat = remove_dc(raw, samples_per_bit)
    levels = threshold_signal(flat)
    clock = recover_clock(levels, samples_per_bit, phase_gain, period_gain)
    bits = slice_bits(levels, clock)
    last_error: SyncNotFound | None = None
    for parity in (region.parity_hint, region.parity_hint.other):
        try:
            payload = parse_stream(bits, parity)
        except SyncNotFound as exc:
            last_error = exc
            continue
        return RegionResult(
            payload=payload,
            parity=parity,
            clock=clock,
            bits=tuple(bits),
            raw=raw,
            dc_removed=flat,
            thresholded=levels,
        )
    assert last_error is not None
    raise last_error


def signals_to_csv(result: RegionResult, path: str | os.PathLike) -> None:
    """Dump the region's 1-D pipeline stages for plotting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row_index", "raw", "dc_removed", "thresholded"])
        for r, (a, b, c) in enumerate(
            zip(result.raw, result.dc_removed, result.thresholded)
        ):
            writer.writerow([r, repr(float(a)), repr(float(b)), repr(float(c))])
