"""Straight-line flow on a room and its cross-section dynamics.

A room's sides are glued in pairs by affine maps with positive factors,
so a ray leaving through a glued side re-enters through the partner side
travelling in the same direction, with lengths multiplied by the side's
factor.  The door is genuine boundary: rays reaching it stop.  This
module traces such rays, assembles the first-return map to a diagonal
cross-section (piecewise affine, injective, orientation preserving),
reduces it to the two-slope normal form, and classifies directions as
door-parallel, cylinder-carrying, or Cantor-like.  It also computes
rotation numbers for the continuous circle maps that sit on the
boundary between the expanding and contracting regimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Union

from .errors import (
    BudgetExhausted,
    NonConvergence,
    NotReducible,
    NotTransverse,
    VertexHit,
)
from .geometry import (
    _DIAGONAL_PAIRS,
    Room,
    Vec2,
    angle_dist_mod_pi,
    unit,
    wrap_2pi,
)
from .intervalmaps import (
    AffineBranch,
    AffineChart,
    PiecewiseAffineMap,
    TwoSlopeMap,
    evaluate as evaluate_two_slope,
    restrict_to_image,
)
from .quadratics import QuadraticNumber
from .rauzy import RauzyOutcome, TerminalKind, iterate_induction

# Tolerances for the tracer are relative to the room diameter; those for
# the return map are relative to the section length, so squashed rooms
# far along the diagonal flow stay tractable.
PARALLEL_EPS = 1e-14
VERTEX_TOL = 1e-12
CLEARANCE = 1e-9
BRANCH_BISECT_TOL = 1e-13
BRANCH_VERIFY_TOL = 1e-9
TRANSVERSALITY_FLOOR = 1e-9
DOOR_ANGLE_TOL = 1e-12
CYLINDER_EDGE_TOL = 1e-10

DEFAULT_RETURN_SAMPLES = 48
DEFAULT_MAX_CROSSINGS = 512
DEFAULT_INDUCTION_BUDGET = 3000

# Gluing pattern of the pentagon model: bottom <-> top, right <-> left.
# Transports always land on the partner side, never on the door (3).
_PARTNER = {0: 2, 1: 4, 2: 0, 4: 1}


# --- cross-sections ---

@dataclass(frozen=True)
class CrossSection:
    """One of the five pentagon diagonals, oriented from vertex i to j.

    All five vertices project to the single cone point of the glued
    surface, so every diagonal closes up to a circle there; the return
    map of a transverse direction is a circle map in disguise.
    """

    i: int
    j: int

    def __post_init__(self):
        pair = (min(self.i, self.j), max(self.i, self.j))
        if pair not in _DIAGONAL_PAIRS:
            raise ValueError(f"({self.i}, {self.j}) is not a pentagon diagonal")

    def endpoints(self, room: Room) -> tuple[Vec2, Vec2]:
        verts = room.vertices()
        return verts[self.i], verts[self.j]

    def direction(self, room: Room) -> float:
        a, b = self.endpoints(room)
        return (b - a).angle()

    def length(self, room: Room) -> float:
        a, b = self.endpoints(room)
        return (b - a).length()


def _coerce_section(section) -> CrossSection:
    if isinstance(section, CrossSection):
        return section
    i, j = section
    return CrossSection(int(i), int(j))


# --- ray tracing ---

class TraceEnd(Enum):
    DOOR = "door"
    SECTION = "section"
    BUDGET = "budget"
    VERTEX = "vertex"


@dataclass(frozen=True)
class RayTrace:
    """Flight record of one ray: straight legs joined by side transports.

    `factors` holds one dilation factor per applied transport, so the
    derivative of the flow between the endpoints is their product.
    """

    segments: tuple[tuple[Vec2, Vec2], ...]
    factors: tuple[float, ...]
    crossed_sides: tuple[int, ...]
    terminal: TraceEnd
    end_point: Vec2

    @property
    def crossings(self) -> int:
        return len(self.factors)

    @property
    def cumulative_factor(self) -> float:
        return math.prod(self.factors)


def _solve_crossing(p: Vec2, u: Vec2, a: Vec2, b: Vec2,
                    t_floor: float) -> Optional[tuple[float, float]]:
    """Parameters (t, s) with p + t*u = a + s*(b - a), or None.

    Near-vertex values of s are kept (the caller decides whether they
    are singular hits); rays parallel to the segment never cross it.
    """
    e = b - a
    denom = u.cross(e)
    if abs(denom) <= PARALLEL_EPS * max(e.length(), 1.0):
        return None
    w = a - p
    t = w.cross(e) / denom
    s = w.cross(u) / denom
    if t <= t_floor or s < -VERTEX_TOL or s > 1.0 + VERTEX_TOL:
        return None
    return t, s


def trace_ray(room: Room, p: Vec2, theta: float,
              max_crossings: int = 64,
              section: Optional[CrossSection] = None) -> RayTrace:
    """Trace the ray from p in direction theta through the glued sides.

    Stops at the door, at a transverse crossing of `section` (if given),
    or after `max_crossings` transports.  A hit within VERTEX_TOL of a
    side endpoint raises VertexHit carrying the partial trace, since the
    flow is undefined through the cone point.
    """
    sides = room.sides()
    diam = room.diameter()
    u = unit(theta)
    t_base = 1e-15 * diam
    t_clear = CLEARANCE * diam
    sec_pts = section.endpoints(room) if section is not None else None

    segments: list[tuple[Vec2, Vec2]] = []
    factors: list[float] = []
    crossed: list[int] = []
    arrived: Optional[int] = None

    while True:
        best_t = math.inf
        best_s = 0.0
        best_side: Optional[int] = None
        for side in sides:
            floor = t_clear if side.index == arrived else t_base
            hit = _solve_crossing(p, u, side.start, side.end, floor)
            if hit is not None and hit[0] < best_t:
                best_t, best_s = hit
                best_side = side.index
        hit_section = False
        if sec_pts is not None:
            hit = _solve_crossing(p, u, sec_pts[0], sec_pts[1], t_clear)
            if hit is not None and hit[0] < best_t - t_base:
                best_t, best_s = hit
                hit_section = True
        if best_side is None and not hit_section:
            if arrived is None:
                raise ValueError("ray does not meet the room boundary; the "
                                 "start point must lie in the closed "
                                 "pentagon with the direction entering it")
            # Mid-flight this only happens when a transport lands within
            # rounding distance of a cone point, pinching the next leg
            # below the anti-rehit floor.  The passage is singular at
            # float resolution, the same as a direct vertex strike.
            raise VertexHit(
                "ray passes a cone point closer than float resolution",
                trace=RayTrace(tuple(segments), tuple(factors),
                               tuple(crossed), TraceEnd.VERTEX, p))
        q = p + u * best_t
        segments.append((p, q))
        partial = RayTrace(tuple(segments), tuple(factors), tuple(crossed),
                           TraceEnd.VERTEX, q)
        if best_s < VERTEX_TOL or best_s > 1.0 - VERTEX_TOL:
            raise VertexHit("ray hits a pentagon vertex; the flow is "
                            "undefined through the cone point",
                            trace=partial)
        if hit_section:
            return RayTrace(tuple(segments), tuple(factors), tuple(crossed),
                            TraceEnd.SECTION, q)
        side = sides[best_side]
        if side.is_door:
            return RayTrace(tuple(segments), tuple(factors), tuple(crossed),
                            TraceEnd.DOOR, q)
        if len(factors) >= max_crossings:
            return RayTrace(tuple(segments), tuple(factors), tuple(crossed),
                            TraceEnd.BUDGET, q)
        factors.append(side.factor)
        crossed.append(side.index)
        p = side.transport(q)
        arrived = _PARTNER[side.index]


# --- first-return map to a cross-section ---

def _bisect(lo: float, hi: float, pred: Callable[[float], bool],
            tol: float) -> float:
    """Boundary of {pred} in [lo, hi], assuming pred(lo) and not pred(hi)."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def first_return_map(room: Room, theta: float, section,
                     samples: int = DEFAULT_RETURN_SAMPLES,
                     max_crossings: int = DEFAULT_MAX_CROSSINGS) -> PiecewiseAffineMap:
    """Return map of the direction-theta flow to a diagonal section.

    The section is arc-length parametrized from vertex i to vertex j.
    Branches correspond to itineraries of glued-side crossings; on each
    the map is affine with slope equal to the product of the crossed
    factors.  Branch boundaries (orbits of the cone point) are located
    by bisection on the itinerary.
    """
    section = _coerce_section(section)
    a, b = section.endpoints(room)
    length = section.length(room)
    tangent = (b - a) * (1.0 / length)
    if angle_dist_mod_pi(theta, section.direction(room)) < TRANSVERSALITY_FLOOR:
        raise NotTransverse("direction is parallel to the section")
    # Directions parallel to the door are allowed: their flow is tangent
    # to the boundary leaf and never crosses the door transversally.
    if not room.is_inward(theta, margin=-1e-12):
        raise ValueError("direction must point into the surface at the door")

    def flight(s: float) -> tuple[float, float, tuple[int, ...]]:
        start = a + tangent * s
        tr = trace_ray(room, start, theta, max_crossings=max_crossings,
                       section=section)
        if tr.terminal is TraceEnd.BUDGET:
            raise BudgetExhausted("no return to the section within "
                                  f"{max_crossings} crossings", partial=tr)
        if tr.terminal is TraceEnd.DOOR:
            raise NotTransverse("trajectory off the section reaches the "
                                "door; no first-return map in this "
                                "direction")
        s_back = (tr.end_point - a).dot(tangent)
        return s_back, tr.cumulative_factor, tr.crossed_sides

    grid = [length * (k + 0.5) / samples for k in range(samples)]
    keys: list[Optional[tuple[int, ...]]] = []
    for s in grid:
        try:
            keys.append(flight(s)[2])
        except VertexHit:
            keys.append(None)

    def same_key(s: float, key: tuple[int, ...]) -> bool:
        try:
            return flight(s)[2] == key
        except VertexHit:
            return False

    tol = BRANCH_BISECT_TOL * length
    cuts: list[float] = []
    for k in range(samples - 1):
        left, right = keys[k], keys[k + 1]
        if left == right:
            continue
        if left is not None:
            pred = lambda s, key=left: same_key(s, key)
        else:
            pred = lambda s, key=right: not same_key(s, key)
        cuts.append(_bisect(grid[k], grid[k + 1], pred, tol))

    boundaries = [0.0]
    for c in sorted(cuts):
        if c - boundaries[-1] > 8.0 * tol:
            boundaries.append(c)
    if length - boundaries[-1] > 8.0 * tol:
        boundaries.append(length)
    else:
        boundaries[-1] = length

    branches = []
    for lo, hi in zip(boundaries, boundaries[1:]):
        width = hi - lo
        law = None
        for frac1, frac2 in ((0.5, 0.8), (0.38, 0.66), (0.29, 0.71)):
            try:
                s1 = lo + frac1 * width
                s2 = lo + frac2 * width
                back1, factor1, key1 = flight(s1)
                back2, factor2, key2 = flight(s2)
            except VertexHit:
                continue
            if key1 != key2:
                continue
            intercept = back1 - factor1 * s1
            if abs(back2 - (factor1 * s2 + intercept)) > BRANCH_VERIFY_TOL * length:
                raise NotTransverse("return map is not affine between "
                                    "detected branch boundaries; section "
                                    "sampling too coarse for this direction")
            law = (factor1, intercept)
            break
        if law is None:
            raise NotTransverse("could not probe a branch away from "
                                "singular orbits")
        branches.append(AffineBranch(lo, hi, law[0], law[1]))
    return PiecewiseAffineMap(tuple(branches)).merged()


# --- reduction of a direction to the two-slope normal form ---

@dataclass(frozen=True)
class SectionReduction:
    """Two-slope normal form of a direction's return dynamics.

    `chart` maps the section's arc-length coordinate to the [0, 1]
    coordinate of `two_slope`; `return_map` is the unreduced map.
    """

    two_slope: TwoSlopeMap
    chart: AffineChart
    section: CrossSection
    return_map: PiecewiseAffineMap


def _verify_reduction(room: Room, theta: float, sec: CrossSection,
                      tsm: TwoSlopeMap, chart: AffineChart,
                      max_crossings: int) -> None:
    """Check the normal form against traces the builder never saw.

    Branch boundaries can hide further branches below the sampling
    resolution; a reduction whose extrapolated laws disagree with an
    independent trace is rejected rather than silently kept.
    """
    a, b = sec.endpoints(room)
    length = sec.length(room)
    tangent = (b - a) * (1.0 / length)
    for k in range(16):
        s = length * math.modf(0.12345 + k * 0.6180339887498949)[0]
        x = float(chart.apply(s))
        if not 1e-9 < x < 1.0 - 1e-9 or abs(x - float(tsm.x_t)) < 1e-6:
            continue
        try:
            tr = trace_ray(room, a + tangent * s, theta,
                           max_crossings=max_crossings, section=sec)
        except VertexHit:
            continue
        if tr.terminal is not TraceEnd.SECTION:
            raise NotReducible("verification trace did not return to the "
                               "section")
        s_back = (tr.end_point - a).dot(tangent)
        predicted = float(evaluate_two_slope(tsm, x))
        observed = float(chart.apply(s_back))
        if abs(predicted - observed) > 1e-8:
            raise NotReducible(
                f"normal form disagrees with an independent trace by "
                f"{abs(predicted - observed):.2e}; the section has branch "
                f"structure below the sampling resolution")


def direction_to_two_slope(room: Room, theta: float,
                           section=None,
                           samples: int = DEFAULT_RETURN_SAMPLES,
                           max_crossings: int = DEFAULT_MAX_CROSSINGS) -> SectionReduction:
    """Reduce the direction's return dynamics to a TwoSlopeMap.

    Candidate sections are the interior diagonals ordered by how
    transversally theta meets them (vertex indices break ties); the
    first whose return map reduces wins.  Passing `section` pins the
    choice instead.
    """
    if section is not None:
        candidates = [_coerce_section(section)]
    else:
        scored = []
        for i, j in room.interior_diagonals():
            sec = CrossSection(i, j)
            margin = angle_dist_mod_pi(theta, sec.direction(room))
            if margin < TRANSVERSALITY_FLOOR:
                continue
            scored.append((-margin, i, j, sec))
        scored.sort(key=lambda item: item[:3])
        candidates = [item[3] for item in scored]
        if not candidates:
            raise NotTransverse("direction is parallel to every interior "
                                "diagonal")
    failures = []
    for sec in candidates:
        try:
            pam = first_return_map(room, theta, sec, samples=samples,
                                   max_crossings=max_crossings)
            tsm, chart = restrict_to_image(pam)
            _verify_reduction(room, theta, sec, tsm, chart, max_crossings)
        except (NotTransverse, NotReducible, VertexHit, BudgetExhausted) as exc:
            failures.append(f"({sec.i},{sec.j}): {exc}")
            continue
        return SectionReduction(tsm, chart, sec, pam)
    raise NotReducible("no section yields a two-slope normal form: "
                       + "; ".join(failures))


# --- direction classification ---

def _collapsed_cycle(pam: PiecewiseAffineMap) -> Optional[tuple[float, float]]:
    """(slope, fixed point) when the return map collapses onto one branch.

    If the closure of the image misses the jump point, every forward
    orbit settles into a single contracting affine branch, so the
    direction carries a period-1 attracting leaf that the two-slope
    normal form cannot express.  The fixed point must be interior to
    the section: a fixed point at an endpoint is a saddle loop through
    the cone point, not a cylinder.
    """
    merged = pam.merged()
    jumps = merged.jumps()
    dom_lo, dom_hi = merged.domain
    scale = float(dom_hi - dom_lo)
    if len(jumps) == 0 and len(merged.branches) == 1:
        branch = merged.branches[0]
    elif len(jumps) == 1 and len(merged.branches) == 2:
        x_d, left_limit, right_limit = jumps[0]
        if right_limit > left_limit:
            return None
        j_lo, j_hi = float(right_limit), float(left_limit)
        if j_lo - 1e-9 * scale <= float(x_d) <= j_hi + 1e-9 * scale:
            return None
        branch = merged.branches[0] if float(x_d) > j_hi else merged.branches[1]
    else:
        return None
    slope = float(branch.slope)
    if slope >= 1.0 - 1e-9:
        return None
    fixed = float(branch.intercept) / (1.0 - slope)
    if not (float(dom_lo) + 1e-6 * scale < fixed < float(dom_hi) - 1e-6 * scale):
        return None
    return slope, fixed


def _collapsed_direction(room: Room, theta: float, section,
                         samples: int, max_crossings: int
                         ) -> Optional[tuple[float, float, CrossSection]]:
    """Search the candidate sections for a collapsed return map.

    Returns (slope, fixed point, section) for the first section whose
    return map has a single attracting branch confirmed by a trace from
    the fixed point itself, or None.
    """
    if section is not None:
        candidates = [_coerce_section(section)]
    else:
        candidates = []
        for i, j in room.interior_diagonals():
            sec = CrossSection(i, j)
            margin = angle_dist_mod_pi(theta, sec.direction(room))
            if margin >= TRANSVERSALITY_FLOOR:
                candidates.append((-margin, i, j, sec))
        candidates.sort(key=lambda item: item[:3])
        candidates = [item[3] for item in candidates]
    for sec in candidates:
        try:
            pam = first_return_map(room, theta, sec, samples=samples,
                                   max_crossings=max_crossings)
        except (NotTransverse, VertexHit, BudgetExhausted, ValueError):
            continue
        col = _collapsed_cycle(pam)
        if col is None:
            continue
        slope, fixed = col
        a, b = sec.endpoints(room)
        length = sec.length(room)
        tangent = (b - a) * (1.0 / length)
        try:
            tr = trace_ray(room, a + tangent * fixed, theta,
                           max_crossings=max_crossings, section=sec)
            if tr.terminal is not TraceEnd.SECTION:
                continue
            s_back = (tr.end_point - a).dot(tangent)
            if abs(s_back - fixed) > 1e-6 * length:
                continue
        except VertexHit:
            # The branch law was already verified at two probe points;
            # a singular hit exactly at the fixed point does not refute it.
            pass
        return slope, fixed, sec
    return None


class DirectionKind(Enum):
    DOOR = "door"
    CYLINDER = "cylinder"
    CANTOR_LIKE = "cantor_like"


@dataclass(frozen=True)
class DirectionClass:
    """Verdict for one flow direction.

    For cylinders, `multiplier` is the expansion of the return map
    around the periodic orbit, normalized above 1, and `word` is the
    renormalization word that found it.  Cantor-like verdicts carry the
    word prefix examined before the budget ran out or a renormalization
    boundary was hit.
    """

    kind: DirectionKind
    word: str
    multiplier: Optional[float]
    reduction: Optional[SectionReduction]
    outcome: Optional[RauzyOutcome]


def classify_direction(room: Room, theta: float,
                       budget: int = DEFAULT_INDUCTION_BUDGET,
                       section=None,
                       samples: int = DEFAULT_RETURN_SAMPLES,
                       max_crossings: int = DEFAULT_MAX_CROSSINGS) -> DirectionClass:
    """Trichotomy for the flow in direction theta.

    Door-parallel directions are recognized first.  Otherwise theta is
    normalized into the inward half-circle (the verdict only depends on
    the direction mod pi), reduced to a two-slope map, and renormalized
    until it either halts in a hole (a cylinder) or exhausts the budget
    or hits a renormalization boundary (Cantor-like as far as this
    budget can tell).
    """
    if angle_dist_mod_pi(theta, room.door_direction()) <= DOOR_ANGLE_TOL:
        return DirectionClass(DirectionKind.DOOR, "", None, None, None)
    th = wrap_2pi(theta)
    if not room.is_inward(th):
        th = wrap_2pi(th + math.pi)
    try:
        red = direction_to_two_slope(room, th, section=section,
                                     samples=samples,
                                     max_crossings=max_crossings)
    except NotReducible:
        collapsed = _collapsed_direction(room, th, section, samples,
                                         max_crossings)
        if collapsed is None:
            raise
        return DirectionClass(DirectionKind.CYLINDER, "",
                              1.0 / collapsed[0], None, None)
    outcome = iterate_induction(red.two_slope, budget)
    if outcome.terminal is TerminalKind.HALT:
        mult = float(outcome.cycle.multiplier)
        if mult < 1.0:
            mult = 1.0 / mult
        return DirectionClass(DirectionKind.CYLINDER, outcome.word, mult,
                              red, outcome)
    return DirectionClass(DirectionKind.CANTOR_LIKE, outcome.word, None,
                          red, outcome)


# --- cylinder search over the direction circle ---

@dataclass(frozen=True)
class Cylinder:
    """Maximal found interval of directions sharing one halting word."""

    theta1: float
    theta2: float
    word: str
    multiplier: float

    @property
    def angle(self) -> float:
        return self.theta2 - self.theta1

    def to_json_dict(self) -> dict:
        return {
            "theta1": self.theta1,
            "theta2": self.theta2,
            "angle": self.angle,
            "word": self.word,
            "multiplier": self.multiplier,
        }


@dataclass(frozen=True)
class ScanResult:
    cylinders: tuple[Cylinder, ...]
    exhausted: bool
    n_samples: int


def find_cylinders(room: Room, eps_angle: float,
                   budget: int = DEFAULT_INDUCTION_BUDGET,
                   max_crossings: int = DEFAULT_MAX_CROSSINGS) -> ScanResult:
    """Scan the inward half-circle for cylinder direction intervals.

    The grid step eps_angle/2 guarantees at least two samples inside any
    cylinder of angle >= eps_angle; smaller ones are reported when a
    sample happens to land in them.  Interval edges are bisected to
    CYLINDER_EDGE_TOL.  `exhausted` records that some sample's
    renormalization ran out of budget, so absence of further cylinders
    is not certified.
    """
    lo, hi = room.inward_directions()
    n = max(4, math.ceil((hi - lo) / (eps_angle / 2.0)))
    step = (hi - lo) / n
    thetas = [lo + (k + 0.5) * step for k in range(n)]

    exhausted = False

    def probe(theta: float):
        nonlocal exhausted
        try:
            verdict = classify_direction(room, theta, budget=budget,
                                         max_crossings=max_crossings)
        except (NotTransverse, NotReducible, VertexHit, ValueError,
                BudgetExhausted):
            return None
        if (verdict.outcome is not None
                and verdict.outcome.terminal is TerminalKind.BUDGET_EXHAUSTED):
            exhausted = True
        return verdict

    verdicts = [probe(t) for t in thetas]
    keys = [(v.word if v is not None and v.kind is DirectionKind.CYLINDER
             else None) for v in verdicts]

    def is_word(theta: float, word: str) -> bool:
        v = probe(theta)
        return (v is not None and v.kind is DirectionKind.CYLINDER
                and v.word == word)

    def edge(inside: float, outside: float, word: str) -> float:
        # Bisect toward the last direction still classifying as `word`,
        # regardless of which side of the run the edge lies on.
        while abs(outside - inside) > CYLINDER_EDGE_TOL:
            mid = 0.5 * (inside + outside)
            if is_word(mid, word):
                inside = mid
            else:
                outside = mid
        return 0.5 * (inside + outside)

    cylinders = []
    k = 0
    while k < n:
        if keys[k] is None:
            k += 1
            continue
        word = keys[k]
        k_end = k
        while k_end + 1 < n and keys[k_end + 1] == word:
            k_end += 1
        left_out = thetas[k - 1] if k > 0 else lo
        right_out = thetas[k_end + 1] if k_end + 1 < n else hi
        t1 = edge(thetas[k], left_out, word)
        t2 = edge(thetas[k_end], right_out, word)
        t1, t2 = min(t1, t2), max(t1, t2)
        mid = probe(0.5 * (t1 + t2))
        if (mid is not None and mid.kind is DirectionKind.CYLINDER
                and mid.word == word):
            cylinders.append(Cylinder(t1, t2, word, mid.multiplier))
        else:
            exhausted = True
        k = k_end + 1
    return ScanResult(tuple(cylinders), exhausted, n)


def theta_sup(room: Room, eps_angle: float,
              budget: int = DEFAULT_INDUCTION_BUDGET) -> float:
    """Largest cylinder angle found at this resolution (0.0 if none)."""
    scan = find_cylinders(room, eps_angle, budget=budget)
    return max((c.angle for c in scan.cylinders), default=0.0)


# --- rotation numbers on the Herman boundary ---

Scalar = Union[int, Fraction, float, QuadraticNumber]

ROTATION_MAX_ITER = 1 << 20
EXACT_ORBIT_CAP = 4096
EXACT_DENOMINATOR_CAP = 10**30


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticNumber))


def _orbit_key(x):
    if isinstance(x, QuadraticNumber):
        return (x.a, x.b, x.d)
    return x


def _too_big(x) -> bool:
    if isinstance(x, Fraction):
        return x.denominator > EXACT_DENOMINATOR_CAP
    if isinstance(x, QuadraticNumber):
        return (x.a.denominator > EXACT_DENOMINATOR_CAP
                or x.b.denominator > EXACT_DENOMINATOR_CAP)
    return False


def rotation_number(rho_a: Scalar, rho_b: Scalar,
                    tol: float = 1e-10,
                    max_iter: int = ROTATION_MAX_ITER) -> Union[Fraction, float]:
    """Rotation number of the continuous two-slope circle map.

    For rho_A > 1 > rho_B > 0 there is exactly one break point
    x* = (1 - rho_B) / (rho_A - rho_B) making the map a continuous
    degree-one circle homeomorphism; its lift is
    F(x) = rho_A x + rho_B (1 - x*) below x* and rho_B (x - x*) + 1
    above.  Exact input drives exact orbit-of-the-break cycle detection
    (returning a Fraction).  In float mode the orbit usually locks onto
    an attracting cycle, found by comparing against power-of-two anchor
    points and verified by one more loop around the candidate cycle;
    failing that, Birkhoff averages with doubling caps run until two
    consecutive estimates agree within tol.  Raises NonConvergence with
    the rigorous bracket (displacement +/- 1)/n if the cap is reached.
    """
    if not (float(rho_a) > 1.0 > float(rho_b) > 0.0):
        raise ValueError("need rho_a > 1 > rho_b > 0")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")

    exact = _is_exact_scalar(rho_a) and _is_exact_scalar(rho_b)
    if exact:
        ra, rb = rho_a, rho_b
        if isinstance(ra, int):
            ra = Fraction(ra)
        if isinstance(rb, int):
            rb = Fraction(rb)
        x_star = (1 - rb) / (ra - rb)
        seen = {}
        x = x_star
        gain = 0
        for step in range(EXACT_ORBIT_CAP):
            key = _orbit_key(x)
            if key in seen:
                n0, g0 = seen[key]
                return Fraction(gain - g0, step - n0)
            seen[key] = (step, gain)
            if x < x_star:
                x = ra * x + rb * (1 - x_star)
            else:
                x = rb * (x - x_star)
                gain += 1
            if _too_big(x):
                break
        # fall through to the float estimate

    ra_f, rb_f = float(rho_a), float(rho_b)
    x_star_f = (1.0 - rb_f) / (ra_f - rb_f)
    b_a = rb_f * (1.0 - x_star_f)

    def advance(x: float) -> tuple[float, int]:
        if x < x_star_f:
            return ra_f * x + b_a, 0
        return rb_f * (x - x_star_f), 1

    x = x_star_f
    gain = 0
    n = 0
    anchor_x, anchor_gain, anchor_n = x, 0, 0
    next_anchor = 64
    estimates: list[float] = []
    cap = min(1 << 10, max_iter)
    while cap <= max_iter:
        while n < cap:
            x, g = advance(x)
            gain += g
            n += 1
            # Mode locking makes most float orbits converge to a cycle;
            # a return to the anchor's 1e-12 neighbourhood after q steps
            # means q is (a multiple of) the period, and the Fraction
            # reduces the multiple away.
            if abs(x - anchor_x) < 1e-12:
                q = n - anchor_n
                p = gain - anchor_gain
                xv, gv = x, 0
                for _ in range(q):
                    xv, g2 = advance(xv)
                    gv += g2
                if abs(xv - x) < 1e-11 and gv == p:
                    return Fraction(p, q)
            if n == next_anchor:
                anchor_x, anchor_gain, anchor_n = x, gain, n
                next_anchor *= 2
        estimates.append((gain + x - x_star_f) / n)
        if len(estimates) >= 2 and abs(estimates[-1] - estimates[-2]) <= tol:
            return estimates[-1]
        cap *= 2
    # The lift of a circle homeomorphism satisfies |X_n - X_0 - n*rho| < 1,
    # so this bracket is rigorous whatever the convergence behaviour.
    disp = gain + x - x_star_f
    raise NonConvergence("rotation number did not settle within "
                         f"{max_iter} iterations",
                         bracket=((disp - 1.0) / n, (disp + 1.0) / n))
