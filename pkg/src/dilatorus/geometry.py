"""Pentagon room models of dilation tori with one boundary component.

A room is an oriented plane basis (e1, e2) together with two log-dilation
parameters (mu1, mu2).  The five model vertices are

    V0 = 0,  V1 = e1,  V2 = e1 + e2,
    V3 = e1 + e2 - e1/nu1,  V4 = e2/nu2,      nu_i = exp(mu_i),

with the segment V3 -> V4 acting as the open boundary (the door), side
V0V1 glued to V3V2 by a dilation of ratio nu1 and side V1V2 glued to
V0V4 by a dilation of ratio nu2.  SL(2,R) acts on the basis and leaves
the parameters untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import (
    DegenerateDoor,
    NonOrientedBasis,
    NonSimplePentagon,
    OutsideQ,
)
from .quadratics import QuadraticNumber

EPSILON: float = 1e-12
TWO_PI: float = 2.0 * math.pi

Scalar = Union[float, int, Fraction, QuadraticNumber]


# --- plane primitives ---

@dataclass(frozen=True)
class Vec2:
    """Plane vector; coordinates may be floats or exact rationals."""

    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        return self.x * other.y - self.y * other.x

    def length(self) -> float:
        return math.hypot(float(self.x), float(self.y))

    def angle(self) -> float:
        return math.atan2(float(self.y), float(self.x))

    def rot90(self) -> "Vec2":
        """Rotate by +pi/2."""
        return Vec2(-self.y, self.x)

    def as_floats(self) -> tuple[float, float]:
        return (float(self.x), float(self.y))


def unit(theta: float) -> Vec2:
    return Vec2(math.cos(theta), math.sin(theta))


def wrap_2pi(theta: float) -> float:
    """Reduce an angle into [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    return t + TWO_PI if t < 0 else t


def wrap_pi(theta: float) -> float:
    """Reduce a direction into [0, pi) (unoriented line angle)."""
    t = math.fmod(theta, math.pi)
    return t + math.pi if t < 0 else t


def angle_dist_mod_pi(a: float, b: float) -> float:
    """Distance between two line directions, in [0, pi/2]."""
    d = abs(wrap_pi(a) - wrap_pi(b))
    return min(d, math.pi - d)


# --- SL(2, R) ---

@dataclass(frozen=True)
class SL2Matrix:
    """2x2 real matrix with determinant 1 (checked to tolerance)."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        scale = max(1.0, abs(float(self.a)) + abs(float(self.b)),
                    abs(float(self.c)) + abs(float(self.d)))
        if abs(float(det) - 1.0) > 1e-9 * scale * scale:
            raise ValueError(f"determinant {det} is not 1")

    @staticmethod
    def identity() -> "SL2Matrix":
        return SL2Matrix(1.0, 0.0, 0.0, 1.0)

    @staticmethod
    def rotation(alpha: float) -> "SL2Matrix":
        c, s = math.cos(alpha), math.sin(alpha)
        return SL2Matrix(c, -s, s, c)

    @staticmethod
    def diagonal(lam: float) -> "SL2Matrix":
        return SL2Matrix(lam, 0.0, 0.0, 1.0 / lam)

    def __matmul__(self, other: "SL2Matrix") -> "SL2Matrix":
        return SL2Matrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "SL2Matrix":
        return SL2Matrix(self.d, -self.b, -self.c, self.a)

    def apply(self, v: Vec2) -> Vec2:
        return Vec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)

    def det(self) -> float:
        return self.a * self.d - self.b * self.c


def geodesic_matrix(t: float) -> SL2Matrix:
    """Teichmuller geodesic flow matrix diag(e^(-t/2), e^(t/2))."""
    return SL2Matrix(math.exp(-t / 2.0), 0.0, 0.0, math.exp(t / 2.0))


def projective_action(m: SL2Matrix, theta: float) -> float:
    """Action on semi-lines: angle of m applied to the unit vector of theta."""
    v = m.apply(unit(theta))
    return wrap_2pi(v.angle())


# --- parameters ---

def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticNumber))


@dataclass(frozen=True)
class DilationParams:
    """Log-dilation parameter pair; float or exact (Fraction / quadratic)."""

    mu1: Scalar
    mu2: Scalar

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.mu1) and _is_exact(self.mu2)

    def as_floats(self) -> tuple[float, float]:
        return (float(self.mu1), float(self.mu2))

    def nu(self) -> tuple[float, float]:
        m1, m2 = self.as_floats()
        return (math.exp(m1), math.exp(m2))

    def in_admissible_region(self) -> bool:
        """True outside the open negative quadrant."""
        return not (self.mu1 < 0 and self.mu2 < 0)

    def in_positive_quadrant(self) -> bool:
        return self.mu1 > 0 and self.mu2 > 0

    def is_zero(self) -> bool:
        return self.mu1 == 0 and self.mu2 == 0


def _coerce_params(mu) -> DilationParams:
    if isinstance(mu, DilationParams):
        return mu
    m1, m2 = mu
    return DilationParams(m1, m2)


# --- geometric predicates ---

def _orient(p: Vec2, q: Vec2, r: Vec2) -> float:
    return (q - p).cross(r - p)


def segments_intersect_properly(p: Vec2, q: Vec2, r: Vec2, s: Vec2,
                                eps: float) -> bool:
    """True if the closed segments share a point other than a common endpoint."""
    d1 = _orient(r, s, p)
    d2 = _orient(r, s, q)
    d3 = _orient(p, q, r)
    d4 = _orient(p, q, s)
    if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and \
       ((d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)):
        return True
    # collinear overlap check
    if abs(d1) <= eps and abs(d2) <= eps:
        u = q - p
        lo1, hi1 = sorted((0.0, u.dot(u)))
        tr, ts = u.dot(r - p), u.dot(s - p)
        lo2, hi2 = sorted((tr, ts))
        return min(hi1, hi2) - max(lo1, lo2) > eps
    return False


def point_in_polygon(pt: Vec2, polygon: list[Vec2]) -> bool:
    """Strict interior test by crossing number (float coordinates)."""
    n = len(polygon)
    inside = False
    x, y = float(pt.x), float(pt.y)
    for i in range(n):
        p0, p1 = polygon[i], polygon[(i + 1) % n]
        x0, y0 = p0.as_floats()
        x1, y1 = p1.as_floats()
        if (y0 > y) != (y1 > y):
            xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if x < xc:
                inside = not inside
    return inside


def _polygon_is_simple(vertices: list[Vec2], eps: float) -> bool:
    n = len(vertices)
    for i in range(n):
        p, q = vertices[i], vertices[(i + 1) % n]
        # adjacent edge folding back onto this one
        r = vertices[(i + 2) % n]
        if abs(_orient(p, q, r)) <= eps and (r - q).dot(q - p) < -eps:
            return False
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if segments_intersect_properly(p, q, vertices[j],
                                           vertices[(j + 1) % n], eps):
                return False
    return True


# --- rooms ---

def _unit_vertices(nu1: float, nu2: float) -> list[Vec2]:
    return [
        Vec2(0.0, 0.0),
        Vec2(1.0, 0.0),
        Vec2(1.0, 1.0),
        Vec2(1.0 - 1.0 / nu1, 1.0),
        Vec2(0.0, 1.0 / nu2),
    ]


_DIAGONAL_PAIRS: tuple[tuple[int, int], ...] = ((0, 2), (0, 3), (1, 3), (1, 4), (2, 4))


def _basis_det(e1: Vec2, e2: Vec2):
    """Determinant of the basis, exact even for heavily sheared bases.

    Long twist words drive the entries to 1e8 and beyond while the true
    determinant stays moderate; the float cross product then cancels
    catastrophically.  Fractions of the stored floats are exact at any
    scale, and exact scalar types already cross exactly.
    """
    comps = (e1.x, e1.y, e2.x, e2.y)
    if all(isinstance(c, (int, float)) for c in comps):
        return (Fraction(e1.x) * Fraction(e2.y)
                - Fraction(e1.y) * Fraction(e2.x))
    return e1.cross(e2)


@dataclass(frozen=True)
class GluedSide:
    """One pentagon side: geometry plus the transport across its gluing."""

    index: int
    start: Vec2
    end: Vec2
    is_door: bool
    factor: float          # derivative of the transport (1.0 for the door)
    transport_scale: float
    transport_offset: Vec2

    def transport(self, p: Vec2) -> Vec2:
        return p * self.transport_scale + self.transport_offset


@dataclass(frozen=True)
class Room:
    """Validated pentagon model of a dilation torus with one boundary."""

    e1: Vec2
    e2: Vec2
    params: DilationParams

    def __post_init__(self):
        det = _basis_det(self.e1, self.e2)
        if det <= 0:
            raise NonOrientedBasis(
                f"basis determinant {float(det)} must be positive")
        if not self.params.in_admissible_region():
            raise OutsideQ(f"parameters {self.params.as_floats()} are in the "
                           "excluded negative quadrant")
        if self.params.is_zero():
            raise DegenerateDoor("both parameters vanish; the door has length 0")
        # simplicity is affine-invariant, so test the unit-basis pentagon:
        # it stays well conditioned however sheared the actual basis is
        verts = _unit_vertices(*self.nu())
        diam = max(v.length() for v in verts)
        if not _polygon_is_simple(verts, EPSILON * max(diam, 1.0) ** 2):
            raise NonSimplePentagon(
                f"vertex chain {[v.as_floats() for v in verts]} "
                "self-intersects in unit-basis coordinates")

    # --- derived geometry ---

    def nu(self) -> tuple[float, float]:
        return self.params.nu()

    def vertices(self) -> list[Vec2]:
        """V0..V4 of the pentagon model."""
        nu1, nu2 = self.nu()
        e1, e2 = self.e1, self.e2
        v2 = e1 + e2
        return [
            Vec2(0.0, 0.0),
            e1,
            v2,
            v2 - e1 * (1.0 / nu1),
            e2 * (1.0 / nu2),
        ]

    def door(self) -> tuple[Vec2, Vec2]:
        v = self.vertices()
        return (v[3], v[4])

    def diameter(self) -> float:
        return max(v.length() for v in self.vertices())

    def is_convex(self) -> bool:
        """No reflex corner (flat corners allowed); affine-invariant."""
        v = _unit_vertices(*self.nu())
        tol = EPSILON * max(max(p.length() for p in v), 1.0) ** 2
        return all(_orient(v[i], v[(i + 1) % 5], v[(i + 2) % 5]) >= -tol
                   for i in range(5))

    def sides(self) -> list[GluedSide]:
        """Boundary sides in order V0V1, V1V2, V2V3, V3V4 (door), V4V0."""
        nu1, nu2 = self.nu()
        v = self.vertices()
        zero = Vec2(0.0, 0.0)
        neg_e1 = Vec2(-float(self.e1.x), -float(self.e1.y))
        return [
            # bottom -> top copy: z maps to z/nu1 + V3
            GluedSide(0, v[0], v[1], False, 1.0 / nu1, 1.0 / nu1, v[3]),
            # right -> left copy: z maps to (z - e1)/nu2
            GluedSide(1, v[1], v[2], False, 1.0 / nu2, 1.0 / nu2,
                      neg_e1 * (1.0 / nu2)),
            # top -> bottom copy: z maps to nu1*(z - V3)
            GluedSide(2, v[2], v[3], False, nu1, nu1, v[3] * (-nu1)),
            GluedSide(3, v[3], v[4], True, 1.0, 1.0, zero),
            # left -> right copy: z maps to nu2*z + e1
            GluedSide(4, v[4], v[0], False, nu2, nu2,
                      Vec2(float(self.e1.x), float(self.e1.y))),
        ]

    def interior_diagonals(self) -> list[tuple[int, int]]:
        """Vertex index pairs whose chord lies inside the pentagon."""
        verts = self.vertices()
        eps = EPSILON * max(self.diameter(), 1.0) ** 2
        out = []
        for i, j in _DIAGONAL_PAIRS:
            p, q = verts[i], verts[j]
            mid = (p + q) * 0.5
            if not point_in_polygon(mid, verts):
                continue
            blocked = False
            for k in range(5):
                if k in (i, j) or (k + 1) % 5 in (i, j):
                    continue
                if segments_intersect_properly(p, q, verts[k],
                                               verts[(k + 1) % 5], eps):
                    blocked = True
                    break
            if not blocked:
                out.append((i, j))
        return out

    # --- directions ---

    def door_direction(self) -> float:
        """Direction of the door segment, reduced mod pi into [0, pi)."""
        v3, v4 = self.door()
        return wrap_pi((v4 - v3).angle())

    def inward_normal(self) -> Vec2:
        """Unit normal of the door pointing into the pentagon."""
        v3, v4 = self.door()
        n = (v4 - v3).rot90()
        return n * (1.0 / n.length())

    def inward_directions(self) -> tuple[float, float]:
        """Open half-circle (lo, lo + pi) of directions entering at the door."""
        lo = wrap_2pi(self.inward_normal().angle() - math.pi / 2.0)
        return (lo, lo + math.pi)

    def is_inward(self, theta: float, margin: float = 0.0) -> bool:
        return unit(theta).dot(self.inward_normal()) > margin


def build_room(e1, e2, mu) -> Room:
    """Validated constructor from raw basis coordinates and parameters."""
    if not isinstance(e1, Vec2):
        e1 = Vec2(*e1)
    if not isinstance(e2, Vec2):
        e2 = Vec2(*e2)
    return Room(e1, e2, _coerce_params(mu))


def square_room(mu1: Scalar, mu2: Scalar) -> Room:
    """Room over the standard unit basis."""
    return build_room((1.0, 0.0), (0.0, 1.0), (mu1, mu2))


def apply_sl2(m: SL2Matrix, room: Room) -> Room:
    """Linear action on the basis; parameters are untouched."""
    return Room(m.apply(room.e1), m.apply(room.e2), room.params)


def canonicalize(room: Room) -> Room:
    """Rescale the basis so that det(e1, e2) = 1."""
    det = float(_basis_det(room.e1, room.e2))
    s = 1.0 / math.sqrt(det)
    return Room(room.e1 * s, room.e2 * s, room.params)


# --- serialization ---

def _scalar_to_json(x: Scalar):
    if isinstance(x, QuadraticNumber):
        return [str(x.a), str(x.b), x.d]
    if isinstance(x, Fraction):
        return [str(x), "0", 0]
    return float(x)


def _scalar_from_json(v) -> Scalar:
    if isinstance(v, list):
        a, b, d = v
        return QuadraticNumber(Fraction(str(a)), Fraction(str(b)), int(d))
    return float(v)


def room_to_json(room: Room) -> dict:
    out: dict = {
        "e1": list(room.e1.as_floats()),
        "e2": list(room.e2.as_floats()),
    }
    if room.params.is_exact:
        out["mu_exact"] = [_scalar_to_json(room.params.mu1),
                          _scalar_to_json(room.params.mu2)]
        out["mu"] = list(room.params.as_floats())
    else:
        out["mu"] = list(room.params.as_floats())
    return out


def room_from_json(data: dict) -> Room:
    e1 = Vec2(*[float(c) for c in data["e1"]])
    e2 = Vec2(*[float(c) for c in data["e2"]])
    if "mu_exact" in data:
        m1 = _scalar_from_json(data["mu_exact"][0])
        m2 = _scalar_from_json(data["mu_exact"][1])
    else:
        m1, m2 = (float(c) for c in data["mu"])
    return Room(e1, e2, DilationParams(m1, m2))
