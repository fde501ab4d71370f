"""Wire protocol for the supervisor-to-robot radio command channel.

Every command travels as a fixed three-byte frame::

    [password, command, checksum]      checksum = password XOR command

The password doubles as the start-of-frame marker, so the receiver can
resynchronise on a byte stream that is mostly noise.  An optional XOR
obfuscation step masks the command byte on the wire; it is cheap
scrambling, not cryptography, and is documented as such.

A single unframed keepalive byte keeps the channel busy so that the
receiver's idle-noise behaviour never kicks in between commands.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

FRAME_LEN = 3
DEFAULT_PASSWORD = 0xA5
DEFAULT_KEEPALIVE = 0x31


class CommandMode(str, Enum):
    """The five drive modes the robot understands."""

    FORWARD = "forward"
    BACKWARD = "backward"
    TURN_LEFT = "left"
    TURN_RIGHT = "right"
    STOP = "stop"


# Command bytes are the ASCII initials of the mode names.
COMMAND_BYTES: dict[CommandMode, int] = {
    CommandMode.FORWARD: 0x46,     # 'F'
    CommandMode.BACKWARD: 0x42,    # 'B'
    CommandMode.TURN_LEFT: 0x4C,   # 'L'
    CommandMode.TURN_RIGHT: 0x52,  # 'R'
    CommandMode.STOP: 0x53,        # 'S'
}

MODES_BY_BYTE: dict[int, CommandMode] = {b: m for m, b in COMMAND_BYTES.items()}


class Keepalive:
    """Sentinel event: a keepalive byte was consumed."""

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return "Keepalive"


KEEPALIVE_EVENT = Keepalive()

ParseEvent = CommandMode | Keepalive | None


@dataclass(frozen=True)
class CodecConfig:
    """Framing parameters shared by transmitter and receiver."""

    password: int = DEFAULT_PASSWORD
    obfuscate: bool = False
    keepalive: int = DEFAULT_KEEPALIVE

    def __post_init__(self) -> None:
        if not 0 <= self.password <= 0xFF:
            raise ValueError(f"password must be a byte, got {self.password}")
        if not 0 <= self.keepalive <= 0xFF:
            raise ValueError(f"keepalive must be a byte, got {self.keepalive}")
        # A keepalive equal to the password would look like a frame start.
        if self.keepalive == self.password:
            raise ValueError("keepalive byte must differ from the password")


def checksum(password: int, command: int) -> int:
    """Third frame byte: XOR of the two preceding bytes."""
    return (password ^ command) & 0xFF


def encode_frame(mode: CommandMode, cfg: CodecConfig) -> bytes:
    """Build the three-byte wire frame for ``mode``."""
    cmd = COMMAND_BYTES[mode]
    wire = cmd ^ cfg.password if cfg.obfuscate else cmd
    return bytes((cfg.password, wire, checksum(cfg.password, wire)))


def decode_command_byte(wire: int, cfg: CodecConfig) -> CommandMode | None:
    """Undo obfuscation and map a wire command byte to a mode, if valid."""
    cmd = wire ^ cfg.password if cfg.obfuscate else wire
    return MODES_BY_BYTE.get(cmd)


class AlterationMap:
    """Bijective byte substitution modelling a systematic converter fault.

    Some serial converters mangle bytes in a repeatable, invertible way.
    The link applies ``apply`` to every byte on the transmit path and the
    receiver undoes it with ``invert``.  The table must be a permutation
    of 0..255 or the damage could not be compensated.
    """

    def __init__(self, table: list[int] | None = None) -> None:
        if table is None:
            table = list(range(256))
        if len(table) != 256 or sorted(table) != list(range(256)):
            raise ValueError("alteration table must be a permutation of 0..255")
        self._fwd = list(table)
        self._inv = [0] * 256
        for i, v in enumerate(self._fwd):
            self._inv[v] = i

    @classmethod
    def identity(cls) -> "AlterationMap":
        return cls()

    @property
    def table(self) -> list[int]:
        return list(self._fwd)

    def is_identity(self) -> bool:
        return self._fwd == list(range(256))

    def apply(self, b: int) -> int:
        return self._fwd[b]

    def invert(self, b: int) -> int:
        return self._inv[b]


class FrameParser:
    """Sliding three-byte window decoder for the noisy receive stream.

    The parser never raises on garbage: bytes that fail to line up as a
    frame fall out of the window and are counted as noise.  Because the
    window is exactly one frame long, at most two stray bytes can delay
    resynchronisation after a valid frame starts arriving.
    """

    def __init__(self, cfg: CodecConfig) -> None:
        self.cfg = cfg
        self._window: list[int] = []
        self.frames_ok = 0
        self.keepalives = 0
        self.noise_bytes = 0

    def _partial_frame_pending(self) -> bool:
        # True when the newest window bytes could be a frame prefix, in
        # which case an incoming keepalive byte must be treated as frame
        # payload rather than as traffic.
        w = self._window
        if w and w[-1] == self.cfg.password:
            return True
        return len(w) >= 2 and w[-2] == self.cfg.password

    def push(self, b: int) -> ParseEvent:
        """Consume one received byte; return what it completed, if anything."""
        if b == self.cfg.keepalive and not self._partial_frame_pending():
            self.keepalives += 1
            return KEEPALIVE_EVENT

        self._window.append(b)
        if len(self._window) > FRAME_LEN:
            self._window.pop(0)
            self.noise_bytes += 1

        if len(self._window) == FRAME_LEN:
            pwd, wire, check = self._window
            if pwd == self.cfg.password and check == checksum(pwd, wire):
                mode = decode_command_byte(wire, self.cfg)
                if mode is not None:
                    self._window.clear()
                    self.frames_ok += 1
                    return mode
        return None

    def flush(self) -> int:
        """Discard any buffered bytes as noise; returns how many."""
        n = len(self._window)
        self._window.clear()
        self.noise_bytes += n
        return n
