"""One-way lossy radio link between supervisor and robot.

The link is modelled at byte granularity: bytes are dropped outright
beyond the usable range, dropped at random with a configurable
probability inside it, and otherwise delivered after a constant latency.

The receiving radio is never silent.  Whenever no real traffic has
arrived for ``noise_onset`` seconds the receiver starts picking up
uniformly random bytes at ``noise_rate`` bytes per second and keeps
doing so until real traffic resumes.  Noise is generated from a seeded
RNG so runs are reproducible.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from antsim.protocol import AlterationMap

# Slack for comparing scheduled times built from repeated float ticks.
TIME_EPS = 1e-9

DEFAULT_NOISE_ONSET = 0.075   # seconds of silence before noise starts
DEFAULT_NOISE_RATE = 1000.0   # noise bytes per second
DEFAULT_RANGE_MAX = 150.0     # metres; beyond this nothing gets through


@dataclass
class LinkConfig:
    distance: float = 10.0
    range_max: float = DEFAULT_RANGE_MAX
    drop_prob: float = 0.0
    latency: float = 0.0
    noise_onset: float = DEFAULT_NOISE_ONSET
    noise_rate: float = DEFAULT_NOISE_RATE
    seed: int = 0
    alteration: AlterationMap = field(default_factory=AlterationMap.identity)

    def __post_init__(self) -> None:
        if not 0.0 <= self.drop_prob <= 1.0:
            raise ValueError(f"drop_prob must be in [0, 1], got {self.drop_prob}")
        if self.latency < 0:
            raise ValueError("latency must be >= 0")
        if self.noise_onset <= 0:
            raise ValueError("noise_onset must be > 0")
        if self.noise_rate < 0:
            raise ValueError("noise_rate must be >= 0")


class Link:
    """Byte pipe with drops, latency and idle-noise injection."""

    def __init__(self, cfg: LinkConfig) -> None:
        self.cfg = cfg
        self._rng = random.Random(cfg.seed)
        self._in_flight: deque[tuple[float, int]] = deque()
        self.time = 0.0
        # Noise timing is measured from the last *real* delivery; noise
        # bytes themselves do not reset the gap or the rate would collapse.
        self.last_delivery_t = 0.0
        self._noise_in_gap = 0
        self.sent = 0
        self.delivered = 0
        self.dropped = 0
        self.noise_emitted = 0

    @property
    def in_flight(self) -> int:
        return len(self._in_flight)

    def send(self, data: bytes, t: float) -> None:
        """Offer bytes to the link at time ``t``; survivors are queued."""
        cfg = self.cfg
        out_of_range = cfg.distance > cfg.range_max
        for b in data:
            self.sent += 1
            if out_of_range:
                self.dropped += 1
            elif cfg.drop_prob > 0 and self._rng.random() < cfg.drop_prob:
                self.dropped += 1
            else:
                self._in_flight.append((t + cfg.latency, cfg.alteration.apply(b)))

    def _next_noise_t(self) -> float | None:
        if self.cfg.noise_rate <= 0:
            return None
        k = self._noise_in_gap + 1
        return self.last_delivery_t + self.cfg.noise_onset + k / self.cfg.noise_rate

    def step(self, t_now: float) -> list[tuple[float, int]]:
        """Advance to ``t_now``; return (time, byte) deliveries in order.

        Real traffic and noise are merged chronologically.  A real byte
        landing at the same instant as a scheduled noise byte wins the
        tie and suppresses it, since its arrival ends the silent gap.
        """
        events: list[tuple[float, int]] = []
        while True:
            real = self._in_flight[0] if self._in_flight else None
            if real is not None and real[0] > t_now + TIME_EPS:
                real = None
            noise_t = self._next_noise_t()
            if noise_t is not None and noise_t > t_now + TIME_EPS:
                noise_t = None

            if real is not None and (noise_t is None or real[0] <= noise_t + TIME_EPS):
                self._in_flight.popleft()
                self.delivered += 1
                self.last_delivery_t = real[0]
                self._noise_in_gap = 0
                events.append(real)
            elif noise_t is not None:
                self._noise_in_gap += 1
                self.noise_emitted += 1
                events.append((noise_t, self._rng.randrange(256)))
            else:
                break
        self.time = t_now
        return events

    def stats(self) -> dict[str, int]:
        return {
            "sent": self.sent,
            "delivered": self.delivered,
            "dropped": self.dropped,
            "noise_emitted": self.noise_emitted,
        }
