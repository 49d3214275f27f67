"""Exception hierarchy shared by every pipeline stage.

The CLI reports failures by exception class name, so the names here are part
of the public interface.
"""


class VlcError(Exception):
    """Base class for all errors raised by this package."""


class LengthError(VlcError):
    """A bit sequence does not have the required length."""


class PreambleMismatch(VlcError):
    """A preamble pair or end marker does not match the expected parity pattern."""

    def __init__(self, position: int, message: str | None = None):
        self.position = position
        super().__init__(message or f"preamble mismatch at bit {position}")


class OddLedCount(VlcError):
    """A message layout was requested for an odd number of LEDs."""


class ConfigError(VlcError):
    """A camera configuration violates one of its invariants."""


class SceneError(VlcError):
    """A scene description is malformed or violates a scene invariant."""


class NoLightSource(VlcError):
    """No sufficiently large lit area was found in the frame."""


class WindowTooLarge(VlcError):
    """The energy window does not fit inside the lit area's row span."""


class RegionTooShort(VlcError):
    """A transmission region has too few rows to hold one full frame."""


class NoTransitions(VlcError):
    """A signal has too few level transitions for clock recovery."""


class SyncNotFound(VlcError):
    """No valid end marker / frame alignment was found in a bit stream."""


class AmbiguousParity(VlcError):
    """An end marker matches neither parity pattern."""


class ParityOrderError(VlcError):
    """Decoded regions do not alternate parity as the layout requires."""
