"""Geodesic flow on rooms and trend-based divergence monitoring.

The diagonal flow squeezes the vertical basis direction and stretches
the horizontal one while leaving the dilation parameters alone, so
cylinders of the starting room persist with the same multiplier while
their direction intervals move projectively.  Divergence of the flowed
family cannot be certified by a finite computation; the monitor instead
samples a time grid and raises explicit trend flags: cylinder angles
approaching 0 or pi (criterion 1), or multipliers of bounded-angle
cylinders blowing up (criterion 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import BudgetExhausted, NotReducible, NotTransverse, VertexHit
from .geometry import (
    Room,
    SL2Matrix,
    apply_sl2,
    geodesic_matrix,
    projective_action,
    wrap_2pi,
)
from .rauzy import TerminalKind
from .surface import DirectionKind, classify_direction, find_cylinders

DEFAULT_THETA_TOL = 0.05
DEFAULT_MULTIPLIER_THRESHOLD = 1e6
DEFAULT_WINDOW = 1.2
TREND_SLACK = 1e-9


def flow(room: Room, t: float) -> Room:
    """Room moved time t along the diagonal geodesic flow."""
    return apply_sl2(geodesic_matrix(t), room)


def track_direction_interval(m: SL2Matrix,
                             interval: tuple[float, float]) -> tuple[float, float]:
    """Image of a direction interval under the projective action.

    The action commutes with the antipodal map, so an interval shorter
    than pi (one projective chart) maps to an interval shorter than pi;
    the result keeps the endpoint order and the length interpretation.
    """
    t1, t2 = interval
    if not 0.0 < t2 - t1 < math.pi:
        raise ValueError("interval must have length in (0, pi)")
    d1 = projective_action(m, t1)
    d2 = projective_action(m, t2)
    length = wrap_2pi(d2 - d1)
    if length >= math.pi:
        raise ValueError("interval does not fit one projective chart")
    return (d1, d1 + length)


def distortion(t: float) -> float:
    """Bound on the derivative ratio of the flow's projective action.

    Over the directions that land in [-pi/4, pi/4] at time t, the
    derivative e^t (1 + e^{-2t} u^2) / (1 + u^2) with u = e^t tan(theta)
    attains its extremes at u = 0 and u = 1, giving the closed form
    2 / (1 + e^{-2t}): equal to 1 at t = 0 and increasing to 2.
    """
    if t < 0:
        raise ValueError("distortion is defined for t >= 0")
    return 2.0 / (1.0 + math.exp(-2.0 * t))


# --- divergence monitor ---

class MonitorFlag(Enum):
    CRITERION1 = "Criterion1Fired"
    CRITERION2 = "Criterion2Fired"


@dataclass(frozen=True)
class TrackedCylinder:
    """A time-0 cylinder followed through the flow by its interval image."""

    interval: tuple[float, float]
    word: str
    multiplier: float


@dataclass(frozen=True)
class FlowSample:
    t: float
    theta_sup: float
    max_multiplier: float
    verdict_flags: frozenset[MonitorFlag]
    budget_exhausted: bool


@dataclass(frozen=True)
class MonitorReport:
    samples: tuple[FlowSample, ...]
    tracked: tuple[TrackedCylinder, ...]
    criterion1: bool
    criterion2: bool
    theta_tol: float
    multiplier_threshold: float

    def to_json_dict(self) -> dict:
        return {
            "criterion1": self.criterion1,
            "criterion2": self.criterion2,
            "theta_tol": self.theta_tol,
            "multiplier_threshold": self.multiplier_threshold,
            "tracked": [
                {"interval": list(tc.interval), "word": tc.word,
                 "multiplier": tc.multiplier} for tc in self.tracked
            ],
            "samples": [
                {"t": s.t, "theta_sup": s.theta_sup,
                 "max_multiplier": s.max_multiplier,
                 "flags": sorted(f.value for f in s.verdict_flags),
                 "budget_exhausted": s.budget_exhausted}
                for s in self.samples
            ],
        }


def flow_series_to_csv(report: MonitorReport) -> str:
    lines = ["t,theta_sup,max_multiplier,flags,budget_exhausted"]
    for s in report.samples:
        flags = "|".join(sorted(f.value for f in s.verdict_flags))
        lines.append(f"{s.t!r},{s.theta_sup!r},{s.max_multiplier!r},"
                     f"{flags},{int(s.budget_exhausted)}")
    return "\n".join(lines) + "\n"


def _window_hits(room: Room, t: float, eps_angle: float, budget: int,
                 window: float) -> tuple[list[tuple[float, float]], bool]:
    """Cylinders near horizontal at flow time t, as (flowed angle, multiplier).

    Probes are uniform in the flowed angle and pulled back to the base
    room, where classification stays well conditioned at every t; the
    multiplier is a flow invariant, so no flowed-room computation is
    needed.  Runs are grouped by multiplier (renormalization words vary
    with the reducing section even for one cylinder), and the run extent
    in flowed angle is the coarse angle the caller compares to eps.
    """
    emt = math.exp(-t)
    step = eps_angle / 2.0
    half = min(window, math.pi / 2.0 - 2.0 * step)
    n = max(2, math.ceil(2.0 * half / step))
    exhausted = False
    mults: list[Optional[float]] = []
    for k in range(n):
        phi = -half + (k + 0.5) * (2.0 * half / n)
        theta = math.atan(emt * math.tan(phi))
        try:
            v = classify_direction(room, theta, budget=budget)
        except (NotReducible, NotTransverse, VertexHit, ValueError):
            mults.append(None)
            continue
        if (v.outcome is not None
                and v.outcome.terminal is TerminalKind.BUDGET_EXHAUSTED):
            exhausted = True
        mults.append(v.multiplier if v.kind is DirectionKind.CYLINDER
                     else None)
    hits = []
    k = 0
    while k < n:
        if mults[k] is None:
            k += 1
            continue
        m = mults[k]
        k_end = k
        while (k_end + 1 < n and mults[k_end + 1] is not None
               and abs(mults[k_end + 1] - m) <= 1e-9 * m):
            k_end += 1
        coarse = (k_end - k + 1) * (2.0 * half / n)
        hits.append((coarse, m))
        k = k_end + 1
    return hits, exhausted


def divergence_monitor(room: Room, t_max: float, steps: int,
                       eps_angle: float, budget: int,
                       theta_tol: float = DEFAULT_THETA_TOL,
                       multiplier_threshold: float = DEFAULT_MULTIPLIER_THRESHOLD,
                       window: float = DEFAULT_WINDOW) -> MonitorReport:
    """Sample the flow on a uniform grid and raise divergence trend flags.

    Criterion 1 fires when theta_sup sits within theta_tol of 0 or pi
    and the last quarter of the series trends that way monotonically.
    Criterion 2 fires when max_multiplier exceeds the threshold; since
    max_multiplier only counts cylinders whose angle is still >= eps_angle
    at the sample, the blowup is always witnessed by a cylinder of
    bounded angle.  Per-sample budget exhaustion is flagged, never fatal.
    """
    if t_max < 0 or steps < 0 or eps_angle <= 0 or budget <= 0:
        raise ValueError("monitor arguments must be positive")
    baseline = find_cylinders(room, eps_angle, budget=budget)
    tracked = tuple(TrackedCylinder((c.theta1, c.theta2), c.word, c.multiplier)
                    for c in baseline.cylinders)
    if t_max == 0 or steps == 0:
        times = [0.0]
    else:
        times = [t_max * k / steps for k in range(steps + 1)]

    samples: list[FlowSample] = []
    sup_series: list[float] = []
    fired1 = fired2 = False
    for t in times:
        g = geodesic_matrix(t)
        exhausted = baseline.exhausted
        max_mult = 1.0
        theta_sup_t = 0.0
        for tc in tracked:
            d1, d2 = track_direction_interval(g, tc.interval)
            ang = d2 - d1
            theta_sup_t = max(theta_sup_t, ang)
            if ang >= eps_angle:
                max_mult = max(max_mult, tc.multiplier)
        try:
            hits, window_exhausted = _window_hits(room, t, eps_angle, budget,
                                                  window)
        except BudgetExhausted:
            hits, window_exhausted = [], True
        exhausted = exhausted or window_exhausted
        for coarse_angle, mult in hits:
            theta_sup_t = max(theta_sup_t, coarse_angle)
            if coarse_angle >= eps_angle:
                max_mult = max(max_mult, mult)
        sup_series.append(theta_sup_t)

        flags = set()
        quarter = sup_series[-max(2, (len(sup_series) + 3) // 4):]
        if len(sup_series) >= 2:
            toward_pi = (theta_sup_t >= math.pi - theta_tol
                         and all(b >= a - TREND_SLACK
                                 for a, b in zip(quarter, quarter[1:])))
            toward_zero = (theta_sup_t <= theta_tol
                           and all(b <= a + TREND_SLACK
                                   for a, b in zip(quarter, quarter[1:])))
            if toward_pi or toward_zero:
                flags.add(MonitorFlag.CRITERION1)
        if max_mult > multiplier_threshold:
            flags.add(MonitorFlag.CRITERION2)
        fired1 = fired1 or MonitorFlag.CRITERION1 in flags
        fired2 = fired2 or MonitorFlag.CRITERION2 in flags
        samples.append(FlowSample(t, theta_sup_t, max_mult,
                                  frozenset(flags), exhausted))
    return MonitorReport(tuple(samples), tracked, fired1, fired2,
                         theta_tol, multiplier_threshold)
