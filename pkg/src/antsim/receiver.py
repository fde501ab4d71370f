"""Robot-side receiver and command latch.

The receiver undoes any known byte alteration, runs every byte through
the frame parser, and keeps the last successfully decoded mode latched
until a new frame or the watchdog replaces it.  Noise never changes the
latched mode; it only shows up in counters.

The watchdog is a safety net with no counterpart on the supervisor
side: if neither a valid frame nor a keepalive has arrived for
``timeout`` seconds the robot is forced to stop.  Noise bytes do not
feed the watchdog, otherwise a dead link (which the radio fills with
noise) would keep the robot driving forever.
"""

from __future__ import annotations

from antsim.link import TIME_EPS
from antsim.protocol import (
    AlterationMap,
    CodecConfig,
    CommandMode,
    FrameParser,
    Keepalive,
)

DEFAULT_WATCHDOG_TIMEOUT = 0.5  # seconds without valid traffic before forced stop


class Receiver:
    """Parses the incoming byte stream and latches the current mode."""

    def __init__(
        self,
        cfg: CodecConfig,
        alteration: AlterationMap | None = None,
        watchdog_timeout: float = DEFAULT_WATCHDOG_TIMEOUT,
    ) -> None:
        self.cfg = cfg
        self.alteration = alteration if alteration is not None else AlterationMap.identity()
        self.watchdog_timeout = watchdog_timeout
        self.parser = FrameParser(cfg)
        self.current_mode = CommandMode.STOP
        self.last_valid_t = 0.0
        self.mode_changes = 0
        self.watchdog_stops = 0

    @property
    def noise_rejected(self) -> int:
        return self.parser.noise_bytes

    @property
    def frames_ok(self) -> int:
        return self.parser.frames_ok

    def ingest(self, b: int, t: float) -> CommandMode | None:
        """Process one delivered byte at time ``t``.

        Returns the new mode when a valid frame changes it, else None.
        Repeated frames for the latched mode are valid traffic but not a
        change.
        """
        event = self.parser.push(self.alteration.invert(b))
        if isinstance(event, Keepalive):
            self.last_valid_t = t
            return None
        if isinstance(event, CommandMode):
            self.last_valid_t = t
            if event is not self.current_mode:
                self.current_mode = event
                self.mode_changes += 1
                return event
        return None

    def watchdog(self, t_now: float) -> bool:
        """Force a stop if valid traffic has been absent too long."""
        stale = t_now - self.last_valid_t + TIME_EPS >= self.watchdog_timeout
        if stale and self.current_mode is not CommandMode.STOP:
            self.current_mode = CommandMode.STOP
            self.mode_changes += 1
            self.watchdog_stops += 1
            return True
        return False
