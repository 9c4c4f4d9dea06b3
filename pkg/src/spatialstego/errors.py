"""Exception hierarchy.

Three families map onto the CLI exit codes: authentication failures (2),
structural/format failures (3) and capacity/configuration failures (4).
"""


class SpatialError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 3


# --- structural / format -------------------------------------------------

class StructuralError(SpatialError):
    exit_code = 3


class LengthNotByteAligned(StructuralError):
    pass


class OddBitLength(StructuralError):
    pass


class BadAlphabet(StructuralError):
    pass


class PlanLengthMismatch(StructuralError):
    pass


class InvalidPlan(StructuralError):
    pass


class BadPath(StructuralError):
    pass


class PathTooDeep(BadPath):
    pass


class BadWidth(BadPath):
    pass


class ZeroDigitAfterPadding(BadPath):
    pass


class EmptyPath(BadPath):
    pass


class IncompleteTree(StructuralError):
    pass


class DuplicatePath(StructuralError):
    pass


class PrefixConflict(StructuralError):
    pass


class TruncatedStream(StructuralError):
    pass


class LengthMismatch(StructuralError):
    pass


class UnknownCarrier(StructuralError):
    pass


class AmbiguousTemplate(StructuralError):
    pass


class SeqMismatch(StructuralError):
    pass


class WrongCount(StructuralError):
    pass


class TotalSizeMismatch(StructuralError):
    pass


class WireFormatError(StructuralError):
    pass


class BadVersion(WireFormatError):
    pass


class BadTagLength(WireFormatError):
    pass


class MissingLine(WireFormatError):
    pass


class BadFasta(StructuralError):
    pass


# --- authentication ------------------------------------------------------

class MacFailure(SpatialError):
    """A packet's tag did not verify. ``seq_bits`` names the packet."""

    exit_code = 2

    def __init__(self, seq_bits, message=None):
        self.seq_bits = seq_bits
        super().__init__(message or f"MAC verification failed for packet {seq_bits}")


# --- capacity / configuration -------------------------------------------

class ConfigError(SpatialError):
    exit_code = 4


class EmptyKey(ConfigError):
    pass


class KeyTooShort(ConfigError):
    pass


class CapacityExceeded(ConfigError):
    pass


class SizeOverflow(ConfigError):
    pass


class TooFewCarriers(ConfigError):
    pass


class TooManyCarriers(ConfigError):
    pass


class MessageSizeMismatch(ConfigError):
    pass
