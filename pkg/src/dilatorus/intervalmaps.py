"""Two-slope interval maps with a single discontinuity.

The family is parametrised by slopes (rho_a, rho_b) and a break point x_t:

    T(x) = rho_a * x + (1 - rho_a * x_t)   on  [0, x_t)
    T(x) = rho_b * (x - x_t)               on  (x_t, 1]

so the left limit at the break is 1 and the right limit is 0.  Injectivity
amounts to rho_b*(1 - x_t) <= 1 - rho_a*x_t; equality is the circle-map case
where the two branch images share an endpoint.  Maps produced as first
returns of boundary flows arrive as general piecewise-affine data and are
brought to this normal form by restricting to the image interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import AtDiscontinuity, NotInHole, NotReducible
from .quadratics import QuadraticNumber

Scalar = Union[int, float, Fraction, QuadraticNumber]

INJECTIVITY_SLACK: float = 1e-12
HIT_TOL: float = 1e-15
MERGE_TOL: float = 1e-12

_ORACLE_SEEDS = (0.1234567891, 0.9876543211, 0.3141592653,
                 0.7182818284, 0.5772156649)


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticNumber))


@dataclass(frozen=True)
class TwoSlopeMap:
    rho_a: Scalar
    rho_b: Scalar
    x_t: Scalar

    def __post_init__(self):
        if not (self.rho_a > 0 and self.rho_b > 0):
            raise ValueError("slopes must be positive")
        if self.rho_a > 1 and self.rho_b > 1:
            raise ValueError("slopes may not both exceed 1")
        if not (0 < self.x_t < 1):
            raise ValueError(f"break point {self.x_t} must lie in (0, 1)")
        lhs = self.rho_b * (1 - self.x_t)
        rhs = 1 - self.rho_a * self.x_t
        slack = 0 if self.is_exact else INJECTIVITY_SLACK
        if lhs > rhs + slack:
            raise ValueError(
                f"branch images overlap: rho_b*(1-x_t)={float(lhs)} exceeds "
                f"1-rho_a*x_t={float(rhs)}")

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(v) for v in (self.rho_a, self.rho_b, self.x_t))

    @property
    def intercept_a(self) -> Scalar:
        return 1 - self.rho_a * self.x_t

    def image_a(self) -> tuple[Scalar, Scalar]:
        """Image of [0, x_t), closed at the left value."""
        return (self.intercept_a, 1)

    def image_b(self) -> tuple[Scalar, Scalar]:
        """Image of (x_t, 1], closed at the right value."""
        return (0, self.rho_b * (1 - self.x_t))

    def as_floats(self) -> tuple[float, float, float]:
        return (float(self.rho_a), float(self.rho_b), float(self.x_t))

    def as_piecewise(self) -> "PiecewiseAffineMap":
        return PiecewiseAffineMap((
            AffineBranch(0, self.x_t, self.rho_a, self.intercept_a),
            AffineBranch(self.x_t, 1, self.rho_b, -self.rho_b * self.x_t),
        ))

    def __call__(self, x: Scalar, side: Optional[str] = None) -> Scalar:
        return evaluate(self, x, side)


def evaluate(tsm: TwoSlopeMap, x: Scalar, side: Optional[str] = None) -> Scalar:
    """Branch value at x; the break point needs an explicit side."""
    if not (0 <= x <= 1):
        raise ValueError(f"{x} is outside [0, 1]")
    if x == tsm.x_t:
        if side == "left":
            return tsm.rho_a * x + tsm.intercept_a
        if side == "right":
            return tsm.rho_b * (x - tsm.x_t)
        raise AtDiscontinuity(f"map is undefined at its break point {x}")
    if x < tsm.x_t:
        return tsm.rho_a * x + tsm.intercept_a
    return tsm.rho_b * (x - tsm.x_t)


@dataclass(frozen=True)
class PeriodicCycle:
    points: tuple[Scalar, ...]
    period: int
    multiplier: Scalar

    def __post_init__(self):
        if len(self.points) != self.period:
            raise ValueError("point count must equal the period")

    @property
    def is_attracting(self) -> bool:
        return self.multiplier < 1

    def to_json_dict(self) -> dict:
        return {
            "points": [float(p) for p in self.points],
            "period": self.period,
            "multiplier": float(self.multiplier),
        }


def attracting_cycle_in_hole(tsm: TwoSlopeMap) -> PeriodicCycle:
    """Closed-form period-2 attractor when the break point misses the image.

    With x_t strictly between rho_b/(1+rho_b) and 1/(1+rho_a) the image of
    [0,1] avoids x_t, both branches map across the break, and T^2 contracts
    with factor rho_a*rho_b < 1 toward a unique 2-cycle.
    """
    ra, rb, xt = tsm.rho_a, tsm.rho_b, tsm.x_t
    if not (rb / (1 + rb) < xt < 1 / (1 + ra)):
        raise NotInHole(
            f"x_t={float(xt)} is not strictly inside the hole "
            f"({float(rb / (1 + rb))}, {float(1 / (1 + ra))})")
    mult = ra * rb
    x_star = rb * (tsm.intercept_a - xt) / (1 - mult)
    y_star = ra * x_star + tsm.intercept_a
    return PeriodicCycle((x_star, y_star), 2, mult)


@dataclass(frozen=True)
class OrbitResult:
    points: tuple[Scalar, ...]
    branches: str                  # 'A'/'B' per applied step
    hit_discontinuity: bool


def orbit(tsm: TwoSlopeMap, x0: Scalar, n: int) -> OrbitResult:
    """x0 and its first n iterates; stops early on a break-point hit."""
    if not (0 <= x0 <= 1):
        raise ValueError(f"start {x0} is outside [0, 1]")
    pts = [x0]
    labels: list[str] = []
    x = x0
    exact = tsm.is_exact and _is_exact(x0)
    for _ in range(n):
        hit = (x == tsm.x_t) if exact else abs(float(x) - float(tsm.x_t)) <= HIT_TOL
        if hit:
            return OrbitResult(tuple(pts), "".join(labels), True)
        labels.append("A" if x < tsm.x_t else "B")
        x = evaluate(tsm, x)
        pts.append(x)
    return OrbitResult(tuple(pts), "".join(labels), False)


def orbit_to_csv(result: OrbitResult) -> str:
    lines = ["index,value,branch"]
    for i, p in enumerate(result.points):
        label = result.branches[i] if i < len(result.branches) else ""
        lines.append(f"{i},{float(p)!r},{label}")
    return "\n".join(lines) + "\n"


def _detect_period(tail: Sequence[float], tol: float) -> Optional[int]:
    n = len(tail)
    for p in range(1, min(128, n // 2) + 1):
        if all(abs(tail[-1 - i] - tail[-1 - i - p]) < tol for i in range(p)):
            return p
    return None


def find_periodic_oracle(tsm: TwoSlopeMap, max_iter: int = 10 ** 4,
                         tol: float = 1e-8) -> Optional[PeriodicCycle]:
    """Brute-force cycle finder: iterate a few fixed seeds and look for a
    repeating tail.  Independent of the closed-form solvers on purpose."""
    ra, rb, xt = tsm.as_floats()
    for seed in _ORACLE_SEEDS:
        x = seed
        tail: list[float] = []
        broke = False
        for _ in range(max_iter):
            if abs(x - xt) <= HIT_TOL:
                broke = True
                break
            x = ra * x + (1 - ra * xt) if x < xt else rb * (x - xt)
            tail.append(x)
            if len(tail) > 512:
                del tail[0]
        if broke or not tail:
            continue
        period = _detect_period(tail, tol)
        if period is None:
            continue
        cycle = tail[-period:]
        start = min(range(period), key=lambda i: cycle[i])
        pts = tuple(cycle[start:] + cycle[:start])
        mult = 1.0
        ok = True
        for p in pts:
            if abs(p - xt) <= HIT_TOL:
                ok = False
                break
            mult *= ra if p < xt else rb
        if not ok:
            continue
        # confirm the loop closes on itself
        y = pts[0]
        for _ in range(period):
            y = ra * y + (1 - ra * xt) if y < xt else rb * (y - xt)
        if abs(y - pts[0]) > 10 * tol:
            continue
        return PeriodicCycle(pts, period, mult)
    return None


# --- general piecewise-affine data and reduction to the normal form ---

@dataclass(frozen=True)
class AffineBranch:
    lo: Scalar
    hi: Scalar
    slope: Scalar
    intercept: Scalar

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("branch interval is empty")
        if not self.slope > 0:
            raise ValueError("branches must be orientation-preserving")

    def value(self, x: Scalar) -> Scalar:
        return self.slope * x + self.intercept

    def same_law(self, other: "AffineBranch", tol: float = MERGE_TOL) -> bool:
        return (abs(float(self.slope - other.slope)) <= tol
                and abs(float(self.intercept - other.intercept)) <= tol)


@dataclass(frozen=True)
class PiecewiseAffineMap:
    """Finitely many increasing affine branches on contiguous intervals."""

    branches: tuple[AffineBranch, ...]

    def __post_init__(self):
        if not self.branches:
            raise ValueError("need at least one branch")
        for left, right in zip(self.branches, self.branches[1:]):
            if abs(float(left.hi - right.lo)) > MERGE_TOL * self._scale():
                raise ValueError("branch intervals must be contiguous")
        images = [(float(b.value(b.lo)), float(b.value(b.hi)))
                  for b in self.branches]
        tol = MERGE_TOL * self._scale()
        for i, (lo_i, hi_i) in enumerate(images):
            for lo_j, hi_j in images[i + 1:]:
                if min(hi_i, hi_j) - max(lo_i, lo_j) > tol:
                    raise ValueError("branch images overlap; map is not injective")

    def _scale(self) -> float:
        return max(1.0, abs(float(self.branches[0].lo)),
                   abs(float(self.branches[-1].hi)))

    @property
    def domain(self) -> tuple[Scalar, Scalar]:
        return (self.branches[0].lo, self.branches[-1].hi)

    def merged(self) -> "PiecewiseAffineMap":
        """Fuse neighbours that continue the same affine law."""
        out = [self.branches[0]]
        for b in self.branches[1:]:
            if out[-1].same_law(b):
                out[-1] = AffineBranch(out[-1].lo, b.hi, out[-1].slope,
                                       out[-1].intercept)
            else:
                out.append(b)
        return PiecewiseAffineMap(tuple(out))

    def jumps(self) -> list[tuple[Scalar, Scalar, Scalar]]:
        """(point, left limit, right limit) at each interior breakpoint
        where the limits genuinely disagree."""
        out = []
        for left, right in zip(self.branches, self.branches[1:]):
            a, b = left.value(left.hi), right.value(right.lo)
            if abs(float(a - b)) > MERGE_TOL * self._scale():
                out.append((left.hi, a, b))
        return out

    def evaluate(self, x: Scalar, side: Optional[str] = None) -> Scalar:
        lo, hi = self.domain
        if not (lo <= x <= hi):
            raise ValueError(f"{x} is outside the domain [{lo}, {hi}]")
        for i, b in enumerate(self.branches):
            if x < b.hi or (i == len(self.branches) - 1 and x <= b.hi):
                if x == b.lo and i > 0:
                    prev = self.branches[i - 1]
                    left_v, right_v = prev.value(x), b.value(x)
                    if abs(float(left_v - right_v)) <= MERGE_TOL * self._scale():
                        return right_v
                    if side == "left":
                        return left_v
                    if side == "right":
                        return right_v
                    raise AtDiscontinuity(f"map jumps at {x}")
                return b.value(x)
        raise AssertionError("unreachable: contiguity was validated")


@dataclass(frozen=True)
class AffineChart:
    """Invertible affine coordinate change y = scale * x + offset."""

    scale: Scalar
    offset: Scalar

    def __post_init__(self):
        if self.scale == 0:
            raise ValueError("chart must be invertible")

    def apply(self, x: Scalar) -> Scalar:
        return self.scale * x + self.offset

    def invert(self, y: Scalar) -> Scalar:
        return (y - self.offset) / self.scale

    def inverse(self) -> "AffineChart":
        return AffineChart(1 / self.scale, -self.offset / self.scale)

    def after(self, other: "AffineChart") -> "AffineChart":
        """Chart equal to applying `other` first, then this one."""
        return AffineChart(self.scale * other.scale,
                           self.scale * other.offset + self.offset)

    def is_identity(self, tol: float = 1e-12) -> bool:
        return abs(float(self.scale - 1)) <= tol and abs(float(self.offset)) <= tol


def restrict_to_image(pam: PiecewiseAffineMap,
                      tol: float = 1e-9) -> tuple[TwoSlopeMap, AffineChart]:
    """Normal form of an injective one-jump map on its image interval.

    The smallest closed interval containing the image is bounded by the two
    one-sided limits at the jump; restricting there and rescaling to [0,1]
    yields a TwoSlopeMap together with the chart that conjugates them.  The
    jump must go downward: affine conjugation in either orientation keeps
    the jump direction, so an upward jump can never reach the normal form
    whose break spans the whole interval from below.
    """
    merged = pam.merged()
    jumps = merged.jumps()
    if len(merged.branches) != 2 or len(jumps) != 1:
        raise NotReducible(
            f"need exactly one jump between two affine branches, found "
            f"{len(merged.branches)} branches and {len(jumps)} jumps")
    x_d, left_limit, right_limit = jumps[0]
    if right_limit > left_limit:
        raise NotReducible(
            "the jump goes upward; the image has an interior gap and the "
            "map is not conjugate to a two-slope normal form")
    j_lo, j_hi = right_limit, left_limit
    width = j_hi - j_lo
    dom_lo, dom_hi = merged.domain
    if float(j_lo) < float(dom_lo) - tol or float(j_hi) > float(dom_hi) + tol:
        raise NotReducible("image interval escapes the domain")
    if not (j_lo + tol * float(width) < x_d < j_hi - tol * float(width)):
        raise NotReducible(
            f"jump point {float(x_d)} is not interior to the image interval "
            f"[{float(j_lo)}, {float(j_hi)}]")
    left, right = merged.branches
    scale = float(width)
    if float(left.value(max(left.lo, j_lo))) < float(j_lo) - tol * scale or \
       float(right.value(min(right.hi, j_hi))) > float(j_hi) + tol * scale:
        raise NotReducible("restriction does not map the image interval "
                           "into itself")
    chart = AffineChart(1 / width, -j_lo / width)
    try:
        tsm = TwoSlopeMap(left.slope, right.slope, chart.apply(x_d))
    except ValueError as exc:
        raise NotReducible(f"restricted map is not a valid two-slope map: "
                           f"{exc}") from exc
    return tsm, chart
