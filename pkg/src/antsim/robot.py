"""Planar model of the two-motor six-legged walker.

One gearmotor drives each side's three legs through crank linkages, so
the platform steers like a skid-steer vehicle: body motion follows from
the two side speeds alone.  Leg cranks are phased for an alternating
tripod, which is what makes the machine statically stable while it
walks.  Masses, dimensions, speeds and power draw default to the values
measured on the real robot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from antsim.protocol import CommandMode

TWO_PI = 2.0 * math.pi

# Below this turn rate the exact arc update degenerates; integrate straight.
STRAIGHT_OMEGA_LIMIT = 1e-12

ADC_COUNTS = 1024  # 10-bit potentiometer readout on the crank shaft


@dataclass(frozen=True)
class RobotParams:
    """Physical constants; defaults match the measured prototype."""

    mass: float = 0.230                 # kg
    payload_max: float = 0.075          # kg, hard limit
    length: float = 0.155               # m
    width: float = 0.10                 # m
    height: float = 0.10                # m
    track: float = 0.10                 # m between left/right contact lines
    v_max: float = 0.1                  # m/s per side at full command
    motor_tau: float = 0.1              # s, first-order speed lag
    stride_period: float = 1.0          # s per gait cycle at full speed
    foot_reach: float = 0.02            # m feet stand outboard of the hips
    com: tuple[float, float, float] = (-0.00573, -0.00925, 0.00413)   # m
    inertia: tuple[float, float, float] = (0.000419, 0.000768, 0.000931)  # kg m^2
    battery_capacity_wh: float = 9.9    # two 9 V packs, 550 mAh each
    moving_power_w: float = 0.9
    idle_power_w: float = 0.2

    def __post_init__(self) -> None:
        ixx, iyy, izz = self.inertia
        if not izz >= iyy >= ixx > 0:
            raise ValueError("inertia must satisfy Izz >= Iyy >= Ixx > 0")
        for name in ("mass", "track", "v_max", "motor_tau", "stride_period",
                     "battery_capacity_wh"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")


def check_payload(payload: float, p: RobotParams) -> None:
    """Reject payloads over the rated limit; the chassis cannot carry them."""
    if payload < 0:
        raise ValueError("payload must be >= 0")
    if payload > p.payload_max:
        raise ValueError(
            f"payload {payload} kg exceeds the {p.payload_max} kg limit"
        )


# ---------------------------------------------------------------------------
# drive train
# ---------------------------------------------------------------------------

def mode_to_motor_commands(mode: CommandMode, v_max: float) -> tuple[float, float]:
    """Latched mode -> (left, right) commanded side speeds."""
    if mode is CommandMode.FORWARD:
        return (v_max, v_max)
    if mode is CommandMode.BACKWARD:
        return (-v_max, -v_max)
    if mode is CommandMode.TURN_RIGHT:
        return (v_max, -v_max)
    if mode is CommandMode.TURN_LEFT:
        return (-v_max, v_max)
    return (0.0, 0.0)


@dataclass(frozen=True)
class MotorState:
    command_speed: float = 0.0
    actual_speed: float = 0.0
    shaft_angle: float = 0.0  # crank position, wrapped to [0, 2*pi)


def motor_step(m: MotorState, u: float, dt: float, p: RobotParams) -> MotorState:
    """Advance one motor by ``dt`` using the exact first-order response.

    The crank shaft turns in proportion to distance covered, scaled so a
    side running at ``v_max`` completes one gait cycle per stride period.
    The angle uses the exact integral of the speed over the step, not an
    endpoint approximation, so odometry built on it is lag-accurate.
    """
    decay = math.exp(-dt / p.motor_tau)
    v_new = u + (m.actual_speed - u) * decay
    travel = u * dt + (m.actual_speed - u) * p.motor_tau * (1.0 - decay)
    angle = (m.shaft_angle + TWO_PI * travel / (p.v_max * p.stride_period)) % TWO_PI
    return MotorState(command_speed=u, actual_speed=v_new, shaft_angle=angle)


def motor_travel(before: MotorState, after: MotorState, dt: float, p: RobotParams) -> float:
    """Distance covered during the step that produced ``after``.

    Closed form for the exponential response: integrates the speed
    profile exactly, so summing travels reproduces the analytic
    displacement to rounding error.
    """
    return after.command_speed * dt + p.motor_tau * (before.actual_speed - after.actual_speed)


def body_velocity(v_left: float, v_right: float, track: float) -> tuple[float, float]:
    """Side speeds -> (forward speed, turn rate), skid-steer kinematics."""
    return (v_left + v_right) / 2.0, (v_right - v_left) / track


@dataclass(frozen=True)
class Pose:
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0  # radians, CCW positive, not wrapped


def integrate_pose(pose: Pose, v: float, omega: float, dt: float) -> Pose:
    """Exact constant-twist arc update for one step."""
    if abs(omega) < STRAIGHT_OMEGA_LIMIT:
        return Pose(
            x=pose.x + v * math.cos(pose.heading) * dt,
            y=pose.y + v * math.sin(pose.heading) * dt,
            heading=pose.heading + omega * dt,
        )
    radius = v / omega
    h2 = pose.heading + omega * dt
    return Pose(
        x=pose.x + radius * (math.sin(h2) - math.sin(pose.heading)),
        y=pose.y + radius * (math.cos(pose.heading) - math.cos(h2)),
        heading=h2,
    )


# ---------------------------------------------------------------------------
# gait geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Leg:
    name: str
    side: int           # +1 left, -1 right
    hip: tuple[float, float]
    phase_offset: float  # crank offset; 0 and pi alternate across the tripod


def default_legs(p: RobotParams) -> tuple[Leg, ...]:
    """Six legs, front/middle/rear per side, alternating-tripod offsets.

    Front and rear cranks on the left share phase 0 with the right
    middle; the other three share phase pi.  With both shafts at the
    same angle this always keeps one full tripod on the ground.
    """
    hip_x = 0.45 * p.length
    rows = (("F", hip_x, 0.0), ("M", 0.0, math.pi), ("R", -hip_x, 0.0))
    legs = []
    for side_name, side in (("L", 1), ("R", -1)):
        for row_name, x, base_offset in rows:
            offset = base_offset if side == 1 else math.pi - base_offset
            legs.append(
                Leg(
                    name=side_name + row_name,
                    side=side,
                    hip=(x, side * p.width / 2.0),
                    phase_offset=offset % TWO_PI,
                )
            )
    return tuple(legs)


def leg_stance(legs: tuple[Leg, ...], left_angle: float, right_angle: float) -> tuple[bool, ...]:
    """Which legs are on the ground for the given crank angles.

    Each crank keeps its leg grounded for half a revolution (duty 0.5):
    stance while (angle + offset) mod 2*pi falls in [0, pi).
    """
    out = []
    for leg in legs:
        angle = left_angle if leg.side > 0 else right_angle
        out.append((angle + leg.phase_offset) % TWO_PI < math.pi)
    return tuple(out)


def stance_mask(stance: tuple[bool, ...]) -> int:
    """Pack stance flags into a bitmask, bit i = leg i in layout order."""
    mask = 0
    for i, down in enumerate(stance):
        if down:
            mask |= 1 << i
    return mask


def foot_point(leg: Leg, p: RobotParams) -> tuple[float, float]:
    """Nominal ground contact, body frame: outboard of the hip."""
    return (leg.hip[0], leg.hip[1] + leg.side * p.foot_reach)


def stance_feet(
    legs: tuple[Leg, ...], stance: tuple[bool, ...], p: RobotParams
) -> list[tuple[float, float]]:
    return [foot_point(leg, p) for leg, down in zip(legs, stance) if down]


# ---------------------------------------------------------------------------
# static stability
# ---------------------------------------------------------------------------

def _convex_hull(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Monotone-chain hull, CCW, no repeated endpoint."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[float, float]] = []
    for pt in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    upper: list[tuple[float, float]] = []
    for pt in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], pt) <= 0:
            upper.pop()
        upper.append(pt)
    return lower[:-1] + upper[:-1]


def _point_segment_distance(q, a, b) -> float:
    ax, ay = a
    bx, by = b
    qx, qy = q
    dx, dy = bx - ax, by - ay
    seg2 = dx * dx + dy * dy
    if seg2 == 0.0:
        return math.hypot(qx - ax, qy - ay)
    t = max(0.0, min(1.0, ((qx - ax) * dx + (qy - ay) * dy) / seg2))
    return math.hypot(qx - (ax + t * dx), qy - (ay + t * dy))


def stability_margin(feet: list[tuple[float, float]], com_xy: tuple[float, float]) -> float:
    """Signed distance from the ground-projected COM to the support boundary.

    Positive inside the support polygon (statically stable), negative
    outside.  Fewer than three distinct ground contacts cannot enclose
    the COM, so the result is -inf: unstable, never an exception.
    """
    hull = _convex_hull(feet)
    if len(hull) < 3:
        return -math.inf
    inside = True
    dist = math.inf
    for i, a in enumerate(hull):
        b = hull[(i + 1) % len(hull)]
        edge_cross = (b[0] - a[0]) * (com_xy[1] - a[1]) - (b[1] - a[1]) * (com_xy[0] - a[0])
        if edge_cross < 0:
            inside = False
        dist = min(dist, _point_segment_distance(com_xy, a, b))
    return dist if inside else -dist


# ---------------------------------------------------------------------------
# instrumentation and power
# ---------------------------------------------------------------------------

def potentiometer_counts(angle: float) -> int:
    """10-bit ADC view of a crank angle in [0, 2*pi)."""
    counts = math.floor(angle / TWO_PI * ADC_COUNTS)
    return max(0, min(ADC_COUNTS - 1, counts))


def battery_step(energy_wh: float, moving: bool, dt: float, p: RobotParams) -> float:
    """Drain the pack over ``dt`` seconds; the charge floor is 0."""
    power = p.moving_power_w if moving else p.idle_power_w
    return max(0.0, energy_wh - power * dt / 3600.0)
