"""Supervisor-side transmitter.

Commands go out immediately as framed bytes.  Between commands the
transmitter emits a bare keepalive byte often enough that the receiving
radio never sits silent long enough to start picking up noise: the
keepalive period must stay below the link's idle-noise onset.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from antsim.link import TIME_EPS
from antsim.protocol import CodecConfig, CommandMode, encode_frame

DEFAULT_KEEPALIVE_PERIOD = 0.05  # seconds; must beat the 75 ms noise onset


@dataclass
class TxConfig:
    keepalive_period: float = DEFAULT_KEEPALIVE_PERIOD
    keepalive_enabled: bool = True
    codec: CodecConfig = field(default_factory=CodecConfig)

    def __post_init__(self) -> None:
        if self.keepalive_period <= 0:
            raise ValueError("keepalive_period must be > 0")


class Transmitter:
    """Queues command frames and fills the gaps with keepalives."""

    def __init__(self, cfg: TxConfig) -> None:
        self.cfg = cfg
        self._pending: deque[bytes] = deque()
        self.last_traffic_t = 0.0
        self.frames_sent = 0
        self.keepalives_sent = 0

    def command(self, mode: CommandMode, t: float) -> None:
        """Queue ``mode`` for emission on the next step at or after ``t``."""
        self._pending.append(encode_frame(mode, self.cfg.codec))

    def step(self, t_now: float) -> bytes:
        """Emit queued frames, or a keepalive if the channel has gone quiet.

        Frames count as traffic, so sending one pushes the next keepalive
        out by a full period.
        """
        if self._pending:
            out = bytearray()
            while self._pending:
                out.extend(self._pending.popleft())
                self.frames_sent += 1
            self.last_traffic_t = t_now
            return bytes(out)

        if (
            self.cfg.keepalive_enabled
            and t_now - self.last_traffic_t + TIME_EPS >= self.cfg.keepalive_period
        ):
            self.last_traffic_t = t_now
            self.keepalives_sent += 1
            return bytes((self.cfg.codec.keepalive,))
        return b""
