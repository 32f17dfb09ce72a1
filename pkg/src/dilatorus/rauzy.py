"""Renormalization of two-slope maps by first-return induction.

One step compares the break point x_t with the two branch images.  When x_t
lies in the image of the right branch (x_t below rho_b/(1+rho_b)) the left
letter L is recorded and the first return to (x_t, 1] is again a two-slope
map with slopes (rho_a*rho_b, rho_b); symmetrically x_t above 1/(1+rho_a)
records R and induces on [0, x_t) with slopes (rho_a, rho_a*rho_b).  Between
the thresholds the image misses x_t entirely and the dynamics falls into an
attracting 2-cycle.  Pulling the hole back through the inverse parameter
maps produces the nested word intervals whose intersection is the Cantor set
of infinitely renormalizable parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .errors import EmptyInterval, NotRenormalizable
from .intervalmaps import (
    AffineChart,
    PeriodicCycle,
    TwoSlopeMap,
    attracting_cycle_in_hole,
    evaluate,
)

Scalar = Union[int, float, Fraction]

CYCLE_CLOSE_TOL: float = 1e-9
RECONSTRUCT_CAP: int = 10 ** 6


class StepClass(Enum):
    WINNER_A = "A"
    WINNER_B = "B"
    HALT = "halt"
    BOUNDARY = "boundary"


class TerminalKind(Enum):
    HALT = "halt"
    BUDGET_EXHAUSTED = "budget_exhausted"
    BOUNDARY = "boundary"


def thresholds(rho_a: Scalar, rho_b: Scalar) -> tuple[Scalar, Scalar]:
    """Upper end of the B-winner region and lower end of the A-winner region."""
    return (rho_b / (1 + rho_b), 1 / (1 + rho_a))


def classify_step(tsm: TwoSlopeMap) -> StepClass:
    """Which branch image captures the break point, if any."""
    thr_b, thr_a = thresholds(tsm.rho_a, tsm.rho_b)
    if tsm.x_t == thr_b or tsm.x_t == thr_a:
        return StepClass.BOUNDARY
    if tsm.x_t < thr_b:
        return StepClass.WINNER_B
    if tsm.x_t > thr_a:
        return StepClass.WINNER_A
    return StepClass.HALT


@dataclass(frozen=True)
class InductionStep:
    induced: TwoSlopeMap
    winner: StepClass
    chart: AffineChart        # induced subinterval -> [0, 1]


def induce(tsm: TwoSlopeMap) -> InductionStep:
    """One renormalization step; requires a winner.

    The break parameter transforms by a Moebius map in each case; the chart
    rescales the induced subinterval ([0,x_t) for A, (x_t,1] for B) back to
    the unit interval.  Rational inputs stay rational.
    """
    verdict = classify_step(tsm)
    ra, rb, xt = tsm.rho_a, tsm.rho_b, tsm.x_t
    if verdict is StepClass.WINNER_A:
        new_xt = ((1 + ra) * xt - 1) / (ra * xt)
        induced = TwoSlopeMap(ra, ra * rb, new_xt)
        chart = AffineChart(1 / xt, 0 * xt)
        return InductionStep(induced, verdict, chart)
    if verdict is StepClass.WINNER_B:
        new_xt = xt / (rb * (1 - xt))
        induced = TwoSlopeMap(ra * rb, rb, new_xt)
        chart = AffineChart(1 / (1 - xt), -xt / (1 - xt))
        return InductionStep(induced, verdict, chart)
    raise NotRenormalizable(f"step class is {verdict.value}; no winner")


@dataclass(frozen=True)
class Subdivision:
    """The three parameter intervals of one induction step."""

    rho_a: Scalar
    rho_b: Scalar

    @property
    def left(self) -> tuple[Scalar, Scalar]:
        return (0, thresholds(self.rho_a, self.rho_b)[0])

    @property
    def hole(self) -> Optional[tuple[Scalar, Scalar]]:
        thr_b, thr_a = thresholds(self.rho_a, self.rho_b)
        return (thr_b, thr_a) if thr_b < thr_a else None

    @property
    def right(self) -> tuple[Scalar, Scalar]:
        return (thresholds(self.rho_a, self.rho_b)[1], 1)

    def lengths(self) -> tuple[Scalar, Scalar, Scalar]:
        ra, rb = self.rho_a, self.rho_b
        hole = self.hole
        hole_len = hole[1] - hole[0] if hole else 0
        return (rb / (1 + rb), hole_len, ra / (1 + ra))


def subdivision(rho_a: Scalar, rho_b: Scalar) -> Subdivision:
    if not (rho_a > 0 and rho_b > 0):
        raise ValueError("slopes must be positive")
    return Subdivision(rho_a, rho_b)


@dataclass(frozen=True)
class RauzyOutcome:
    word: str
    terminal: TerminalKind
    cycle: Optional[PeriodicCycle]
    final_map: TwoSlopeMap

    def to_json_dict(self) -> dict:
        out = {"word": self.word, "terminal": self.terminal.value}
        if self.cycle is not None:
            out["cycle"] = self.cycle.to_json_dict()
        return out


def _pull_back_cycle(tsm: TwoSlopeMap, final: TwoSlopeMap,
                     charts: list[AffineChart]) -> PeriodicCycle:
    """Lift the final map's 2-cycle to the full cycle of the original map.

    Inverse charts send one cycle point back to original coordinates; the
    remaining points are recovered by iterating, since the induced maps are
    first returns.  The multiplier is the slope product along the loop,
    which equals the final map's rho_a*rho_b.
    """
    seed = attracting_cycle_in_hole(final).points[0]
    for chart in reversed(charts):
        seed = chart.invert(seed)
    exact = tsm.is_exact and isinstance(seed, (int, Fraction))
    pts = [seed]
    mult = tsm.rho_a if seed < tsm.x_t else tsm.rho_b
    x = evaluate(tsm, seed)
    steps = 0
    while True:
        if exact:
            if x == seed:
                break
        elif abs(float(x) - float(seed)) <= CYCLE_CLOSE_TOL:
            break
        pts.append(x)
        mult = mult * (tsm.rho_a if x < tsm.x_t else tsm.rho_b)
        x = evaluate(tsm, x)
        steps += 1
        if steps > RECONSTRUCT_CAP:
            raise AssertionError("cycle reconstruction did not close; the "
                                 "chart pullback must be wrong")
    return PeriodicCycle(tuple(pts), len(pts), mult)


def iterate_induction(tsm: TwoSlopeMap, budget: int) -> RauzyOutcome:
    """Renormalize until the dynamics halts, hits a threshold tie, or the
    step budget runs out."""
    current = tsm
    charts: list[AffineChart] = []
    letters: list[str] = []
    for _ in range(budget + 1):
        verdict = classify_step(current)
        if verdict is StepClass.HALT:
            cycle = _pull_back_cycle(tsm, current, charts)
            return RauzyOutcome("".join(letters), TerminalKind.HALT,
                                cycle, current)
        if verdict is StepClass.BOUNDARY:
            return RauzyOutcome("".join(letters), TerminalKind.BOUNDARY,
                                None, current)
        if len(letters) == budget:
            break
        if not current.is_exact and not (
                1e-150 < float(current.rho_a) < 1e150
                and 1e-150 < float(current.rho_b) < 1e150):
            # Float slopes grow without bound along non-halting words;
            # past this range the induced data is no longer meaningful.
            break
        step = induce(current)
        letters.append("L" if verdict is StepClass.WINNER_B else "R")
        charts.append(step.chart)
        current = step.induced
    return RauzyOutcome("".join(letters), TerminalKind.BUDGET_EXHAUSTED,
                        None, current)


# --- parameter intervals of induction words ---

def _child_slopes(rho_a: Scalar, rho_b: Scalar, letter: str
                  ) -> tuple[Scalar, Scalar]:
    if letter == "L":
        return (rho_a * rho_b, rho_b)
    if letter == "R":
        return (rho_a, rho_a * rho_b)
    raise ValueError(f"invalid word letter {letter!r}")


def _letter_feasible(rho_a: Scalar, rho_b: Scalar, letter: str) -> bool:
    """Whether any valid break point takes this letter.

    With rho_a*rho_b >= 1 the injectivity constraint confines valid break
    points to one side: below the B-threshold when rho_a > 1 (forced L),
    above the A-threshold when rho_b > 1 (forced R).
    """
    if rho_a * rho_b >= 1:
        if letter == "R" and rho_a > 1:
            return False
        if letter == "L" and rho_b > 1:
            return False
    return True


def _pull_back_endpoint(rho_a: Scalar, rho_b: Scalar, letter: str,
                        y: Scalar) -> Scalar:
    """Inverse of the break-parameter Moebius map of one letter."""
    if letter == "L":
        return y * rho_b / (1 + y * rho_b)
    return 1 / (1 + rho_a * (1 - y))


def interval_for_word(rho_a: Scalar, rho_b: Scalar,
                      word: str) -> tuple[Scalar, Scalar]:
    """Closed parameter interval whose induction word starts with `word`."""
    if not (rho_a > 0 and rho_b > 0):
        raise ValueError("slopes must be positive")
    if not word:
        return (0 * rho_a, 1 + 0 * rho_a)
    letter, rest = word[0], word[1:]
    if letter not in ("L", "R"):
        raise ValueError(f"invalid word letter {letter!r}")
    if not _letter_feasible(rho_a, rho_b, letter):
        raise EmptyInterval(
            f"letter {letter} is unreachable at slopes "
            f"({float(rho_a)}, {float(rho_b)})")
    ca, cb = _child_slopes(rho_a, rho_b, letter)
    lo, hi = interval_for_word(ca, cb, rest)
    return (_pull_back_endpoint(rho_a, rho_b, letter, lo),
            _pull_back_endpoint(rho_a, rho_b, letter, hi))


def survivor_intervals(rho_a: Scalar, rho_b: Scalar,
                       depth: int) -> list[tuple[Scalar, Scalar]]:
    """Disjoint closed intervals of n-times renormalizable parameters."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth == 0:
        return [(0 * rho_a, 1 + 0 * rho_a)]
    out: list[tuple[Scalar, Scalar]] = []
    for letter in ("L", "R"):
        if not _letter_feasible(rho_a, rho_b, letter):
            continue
        ca, cb = _child_slopes(rho_a, rho_b, letter)
        for lo, hi in survivor_intervals(ca, cb, depth - 1):
            out.append((_pull_back_endpoint(rho_a, rho_b, letter, lo),
                        _pull_back_endpoint(rho_a, rho_b, letter, hi)))
    return out


def survivor_measure(rho_a: Scalar, rho_b: Scalar, depth: int) -> Scalar:
    """Lebesgue measure of the n-times renormalizable parameter set."""
    total = 0 * rho_a
    for lo, hi in survivor_intervals(rho_a, rho_b, depth):
        total = total + (hi - lo)
    return total


def accelerate(rho_a: Scalar, rho_b: Scalar) -> tuple[Scalar, Scalar, int]:
    """Collapse the forced-L regime in one shot.

    While rho_a > 1 and rho_a*rho_b >= 1 every valid break point lies in the
    B-winner region, so induction applies L until the product drops below 1;
    each step replaces rho_a by rho_a*rho_b.  Pairs with rho_a > 1 and
    rho_b >= 1 admit no valid break point at all and are rejected.
    """
    if not (rho_a > 0 and rho_b > 0):
        raise ValueError("slopes must be positive")
    if rho_a > 1 and rho_b >= 1:
        raise ValueError("no valid break points exist for these slopes; "
                         "forced steps would not terminate")
    steps = 0
    while rho_a > 1 and rho_a * rho_b >= 1:
        rho_a = rho_a * rho_b
        steps += 1
    return (rho_a, rho_b, steps)
