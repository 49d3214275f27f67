"""On-air framing for spatially parallel on-off keying.

One LED carries one payload byte.  Every data bit is preceded by a 2-bit
parity preamble, and the frame ends with a 4-bit marker, for 28 bits total:

    [p0 p1 d0] [p0 p1 d1] ... [p0 p1 d7] [p0 p1 p0 p1]

Adjacent LEDs use complementary ("orthogonal") preambles, so wherever two
neighbouring light cones overlap with equal strength the preamble slots sum
to a constant and the overlap shows no modulation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import LengthError, OddLedCount, PreambleMismatch

# Frame geometry: 8 data bits, each guarded by a 2-bit preamble, then a
# 4-bit end marker (the preamble pair twice).
DATA_BITS_PER_FRAME = 8
PREAMBLE_LEN = 2
END_MARKER_LEN = 4
FRAME_LEN = DATA_BITS_PER_FRAME * (PREAMBLE_LEN + 1) + END_MARKER_LEN  # 28


class Parity(enum.Enum):
    """Preamble polarity of an LED, derived from its index in the array."""

    EVEN = 0
    ODD = 1

    @property
    def preamble(self) -> tuple[int, int]:
        return (1, 0) if self is Parity.EVEN else (0, 1)

    @property
    def end_marker(self) -> tuple[int, int, int, int]:
        return self.preamble + self.preamble

    @property
    def other(self) -> "Parity":
        return Parity.ODD if self is Parity.EVEN else Parity.EVEN

    @classmethod
    def from_index(cls, index: int) -> "Parity":
        return cls.EVEN if index % 2 == 0 else cls.ODD


@dataclass(frozen=True)
class BitFrame:
    """A complete 28-bit on-air frame for a single LED."""

    bits: tuple[int, ...]
    payload: int
    parity: Parity

    def __post_init__(self):
        if len(self.bits) != FRAME_LEN:
            raise LengthError(f"frame must be {FRAME_LEN} bits, got {len(self.bits)}")

    def to_string(self) -> str:
        """Serialize as a 28-character string of '0'/'1'."""
        return "".join(str(b) for b in self.bits)

    @classmethod
    def from_string(cls, text: str, parity: Parity) -> "BitFrame":
        bits = bits_from_string(text)
        payload = decode_frame(bits, parity)
        return cls(bits=tuple(bits), payload=payload, parity=parity)


def bits_from_string(text: str) -> list[int]:
    if any(ch not in "01" for ch in text):
        raise ValueError(f"bit string may only contain '0'/'1': {text!r}")
    return [int(ch) for ch in text]


def payload_bits(payload: int) -> list[int]:
    """The 8 data bits of a payload byte, most significant bit first."""
    if not 0 <= payload <= 0xFF:
        raise ValueError(f"payload must be a byte (0..255), got {payload}")
    return [(payload >> (7 - k)) & 1 for k in range(8)]


def encode_frame(payload: int, parity: Parity) -> BitFrame:
    """Build the 28-bit frame carrying one payload byte."""
    p0, p1 = parity.preamble
    bits: list[int] = []
    for d in payload_bits(payload):
        bits.extend((p0, p1, d))
    bits.extend(parity.end_marker)
    return BitFrame(bits=tuple(bits), payload=payload, parity=parity)


def decode_frame(bits: Sequence[int], expected_parity: Parity) -> int:
    """Recover the payload byte from an aligned 28-bit frame.

    Raises PreambleMismatch at the first bit whose preamble or end-marker
    value does not match ``expected_parity``, and LengthError if the input
    is not exactly 28 bits.
    """
    bits = list(bits)
    if len(bits) != FRAME_LEN:
        raise LengthError(f"expected {FRAME_LEN} bits, got {len(bits)}")
    p0, p1 = expected_parity.preamble
    payload = 0
    for k in range(DATA_BITS_PER_FRAME):
        base = 3 * k
        if bits[base] != p0:
            raise PreambleMismatch(base)
        if bits[base + 1] != p1:
            raise PreambleMismatch(base + 1)
        payload = (payload << 1) | (bits[base + 2] & 1)
    marker = expected_parity.end_marker
    for j, expected in enumerate(marker):
        pos = 3 * DATA_BITS_PER_FRAME + j
        if bits[pos] != expected:
            raise PreambleMismatch(pos)
    return payload


def waveform(frame: BitFrame | Sequence[int], period: float) -> Callable:
    """Continuous-time on/off signal of a cyclically repeated frame.

    Returns a function of time (scalar or array, seconds) yielding 0.0/1.0.
    Bit ``k`` occupies ``[k*period, (k+1)*period)`` and the frame repeats
    forever, so a camera may sample it at an arbitrary phase.
    """
    if period <= 0:
        raise ValueError(f"modulation period must be positive, got {period}")
    bits = np.asarray(frame.bits if isinstance(frame, BitFrame) else list(frame), dtype=float)
    n = len(bits)

    def signal(t):
        idx = np.floor(np.asarray(t, dtype=float) / period).astype(np.int64) % n
        value = bits[idx]
        return float(value) if np.isscalar(t) else value

    return signal


@dataclass(frozen=True)
class LedAssignment:
    """Logical slot in a message layout: which byte and parity LED k carries."""

    index: int
    payload: int
    parity: Parity

    @property
    def frame(self) -> BitFrame:
        return encode_frame(self.payload, self.parity)


@dataclass(frozen=True)
class MessageLayout:
    """Payload bytes assigned to LEDs in order along the X axis.

    The count is always even and parities alternate starting Even, which is
    what lets a receiver tell reading direction apart (the two ends of the
    array carry different preambles).
    """

    assignments: tuple[LedAssignment, ...]

    @property
    def message(self) -> bytes:
        return bytes(a.payload for a in self.assignments)

    def __len__(self) -> int:
        return len(self.assignments)


def assemble_message(payload: bytes | Sequence[int]) -> MessageLayout:
    """Assign message bytes to LED slots with alternating parities."""
    data = bytes(payload)
    if len(data) % 2 != 0:
        raise OddLedCount(f"message needs an even number of LEDs, got {len(data)}")
    if len(data) < 2:
        raise OddLedCount("message needs at least 2 LEDs")
    return MessageLayout(
        assignments=tuple(
            LedAssignment(index=k, payload=b, parity=Parity.from_index(k))
            for k, b in enumerate(data)
        )
    )
