"""Elementary shear moves on rooms and the parameter dynamics they generate.

The two shears and their inverses act on (e1, e2, mu1, mu2) by

    S1:     (e1 + nu1*e2, nu1*e2),  (mu1, mu1 + mu2)
    S2:     (nu2*e1, e2 + nu2*e1),  (mu1 + mu2, mu2)
    S1inv:  (e1 - e2, e2/nu1),      (mu1, mu2 - mu1)
    S2inv:  (e1/nu2, e2 - e1),      (mu1 - mu2, mu2)

so the parameter pair transforms by unimodular integer matrices while the
basis picks up dilation factors.  Words over these four letters drive the
subtractive contraction algorithm and the density search in parameter space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

from .errors import (
    BudgetExhausted,
    InadmissibleAtStep,
    NotInMonoid,
    RationalRatio,
    ResultOutsideQ,
)
from .geometry import DilationParams, Room, Vec2
from .quadratics import QuadraticNumber, float_convergents

FLOAT_MARGIN: float = 1e-12
DENOMINATOR_CAP: int = 10 ** 6
RATIO_TOL: float = 1e-9
# a convergent only counts as a rational witness when it beats the generic
# 1/q^2 approximation quality by this factor; otherwise every irrational
# would be certified once q^2 exceeds 1/RATIO_TOL
ANOMALY_FACTOR: float = 1e-3


class TwistGenerator(Enum):
    """The four generating moves, serialized as A, a, B, b."""

    T1 = "A"
    T1_INV = "a"
    T2 = "B"
    T2_INV = "b"

    @property
    def char(self) -> str:
        return self.value

    @property
    def inverse(self) -> "TwistGenerator":
        return _INVERSES[self]


_INVERSES = {
    TwistGenerator.T1: TwistGenerator.T1_INV,
    TwistGenerator.T1_INV: TwistGenerator.T1,
    TwistGenerator.T2: TwistGenerator.T2_INV,
    TwistGenerator.T2_INV: TwistGenerator.T2,
}

# action on (mu1, mu2) as integer row pairs
MU_ACTION: dict[TwistGenerator, tuple[tuple[int, int], tuple[int, int]]] = {
    TwistGenerator.T1: ((1, 0), (1, 1)),
    TwistGenerator.T2: ((1, 1), (0, 1)),
    TwistGenerator.T1_INV: ((1, 0), (-1, 1)),
    TwistGenerator.T2_INV: ((1, -1), (0, 1)),
}

Word = tuple[TwistGenerator, ...]


def word_from_string(s: str) -> Word:
    try:
        return tuple(TwistGenerator(ch) for ch in s)
    except ValueError as exc:
        raise ValueError(f"invalid word letter in {s!r}") from exc


def word_to_string(word: Sequence[TwistGenerator]) -> str:
    return "".join(g.char for g in word)


# --- single moves ---

def twist_mu(g: TwistGenerator, params: DilationParams) -> DilationParams:
    """Parameter part of a move; exact when the inputs are exact."""
    (r11, r12), (r21, r22) = MU_ACTION[g]
    m1, m2 = params.mu1, params.mu2
    return DilationParams(r11 * m1 + r12 * m2, r21 * m1 + r22 * m2)


def twist_basis(g: TwistGenerator, e1: Vec2, e2: Vec2,
                params: DilationParams) -> tuple[Vec2, Vec2]:
    nu1, nu2 = params.nu()
    if g is TwistGenerator.T1:
        return (e1 + e2 * nu1, e2 * nu1)
    if g is TwistGenerator.T2:
        return (e1 * nu2, e2 + e1 * nu2)
    if g is TwistGenerator.T1_INV:
        return (e1 - e2, e2 * (1.0 / nu1))
    return (e1 * (1.0 / nu2), e2 - e1)


def twist(g: TwistGenerator, e1: Vec2, e2: Vec2, mu,
          check_region: bool = True) -> tuple[Vec2, Vec2, DilationParams]:
    """One move on raw data; raises ResultOutsideQ when the output parameters
    leave the admissible region (pass check_region=False to get raw values)."""
    params = mu if isinstance(mu, DilationParams) else DilationParams(*mu)
    new_params = twist_mu(g, params)
    if check_region and not new_params.in_admissible_region():
        raise ResultOutsideQ(
            f"{g.char} maps parameters to {new_params.as_floats()}")
    new_e1, new_e2 = twist_basis(g, e1, e2, params)
    return new_e1, new_e2, new_params


def twist_room(g: TwistGenerator, room: Room) -> Room:
    e1, e2, params = twist(g, room.e1, room.e2, room.params)
    return Room(e1, e2, params)


# --- words ---

def admissibility_violation(word: Sequence[TwistGenerator],
                            params: DilationParams) -> Optional[int]:
    """First 0-based step whose result leaves the open positive quadrant,
    or None if the whole word is admissible.  The start must be admissible."""
    if not params.in_positive_quadrant():
        return 0 if word else None
    cur = params
    for k, g in enumerate(word):
        cur = twist_mu(g, cur)
        if not cur.in_positive_quadrant():
            return k
    return None


@dataclass(frozen=True)
class WordResult:
    room: Room
    mu_path: tuple[tuple[float, float], ...]


def apply_word(word: Sequence[TwistGenerator], room: Room) -> WordResult:
    """Apply a word move by move, requiring every prefix to stay admissible."""
    params = room.params
    if word and not params.in_positive_quadrant():
        raise InadmissibleAtStep(0, "start parameters are not in the "
                                    "positive quadrant")
    e1, e2 = room.e1, room.e2
    path = [params.as_floats()]
    for k, g in enumerate(word):
        e1, e2 = twist_basis(g, e1, e2, params)
        params = twist_mu(g, params)
        if not params.in_positive_quadrant():
            raise InadmissibleAtStep(k)
        path.append(params.as_floats())
    return WordResult(Room(e1, e2, params), tuple(path))


# --- subtractive contraction ---

@dataclass(frozen=True)
class ContractionResult:
    word: Word
    blocks: tuple[tuple[TwistGenerator, int], ...]
    final: DilationParams


def _exact_block_count(x, y) -> int:
    """Largest k with x - k*y > 0, for exact positive scalars x > y."""
    q = QuadraticNumber._coerce(x) / QuadraticNumber._coerce(y)
    if q.is_rational and q.as_fraction().denominator == 1:
        return int(q.as_fraction()) - 1
    return q.floor()


def _float_block_count(x: float, y: float) -> int:
    q = x / y
    k = math.floor(q - FLOAT_MARGIN)
    if k < 1 or x - k * y <= FLOAT_MARGIN * max(abs(x), abs(y)):
        raise RationalRatio(
            f"cannot certify a positive remainder for ({x}, {y})")
    return k

def gauss_contraction(params: DilationParams, eps: float,
                      max_generators: int = 10 ** 6,
                      cancel: Optional[Callable[[], bool]] = None
                      ) -> ContractionResult:
    """Shrink positive parameters below eps by maximal subtractive blocks.

    While mu1 > mu2 the move S2inv subtracts mu2 from mu1 (k times, k maximal
    with a positive remainder); symmetrically S1inv subtracts mu1 from mu2.
    Rationally dependent pairs run into a tie or an exact zero: RationalRatio.
    """
    if not params.in_positive_quadrant():
        raise ValueError("contraction needs strictly positive parameters")
    exact = params.is_exact
    m1, m2 = (params.mu1, params.mu2) if exact else params.as_floats()
    blocks: list[tuple[TwistGenerator, int]] = []
    word: list[TwistGenerator] = []
    while math.hypot(float(m1), float(m2)) >= eps:
        if cancel is not None and cancel():
            raise BudgetExhausted("contraction cancelled",
                                  partial=(tuple(word), blocks))
        if m1 == m2:
            raise RationalRatio("parameters became equal")
        if m1 > m2:
            x, y, gen = m1, m2, TwistGenerator.T2_INV
        else:
            x, y, gen = m2, m1, TwistGenerator.T1_INV
        if exact:
            k = _exact_block_count(x, y)
            if k < 1:
                raise RationalRatio("no block keeps the remainder positive")
            rem = x - k * y
            if rem == 0:
                raise RationalRatio("exact zero remainder")
        else:
            k = _float_block_count(x, y)
            rem = x - k * y
        if m1 > m2:
            m1 = rem
        else:
            m2 = rem
        blocks.append((gen, k))
        word.extend([gen] * k)
        if len(word) > max_generators:
            raise BudgetExhausted("contraction word exceeded the generator cap",
                                  partial=(tuple(word), blocks))
    return ContractionResult(tuple(word), tuple(blocks), DilationParams(m1, m2))


# --- nonnegative unimodular decomposition ---

R_LETTER, L_LETTER = "R", "L"


def decompose_sl2n(matrix: Sequence[Sequence[int]]) -> str:
    """Write a nonnegative determinant-1 integer matrix as a word in
    R = [[1,1],[0,1]] and L = [[1,0],[1,1]] (left-to-right product order)."""
    (a, b), (c, d) = matrix
    for entry in (a, b, c, d):
        if not isinstance(entry, int) or entry < 0:
            raise NotInMonoid(f"entries must be nonnegative integers, got {matrix}")
    if a * d - b * c != 1:
        raise NotInMonoid(f"determinant of {matrix} is not 1")
    letters: list[str] = []
    while (a, b, c, d) != (1, 0, 0, 1):
        if c == 0 and a == 1 and d == 1:
            letters.append(R_LETTER * b)
            break
        if a >= c and b >= d and (c or d):
            letters.append(R_LETTER)
            a, b = a - c, b - d
        elif c >= a and d >= b and (a or b):
            letters.append(L_LETTER)
            c, d = c - a, d - b
        else:
            raise NotInMonoid(f"{matrix} is not a product of R and L")
    return "".join(letters)


def sl2n_word_to_twists(word: str) -> Word:
    """Generator sequence realizing an R/L word on the parameter pair.

    The parameter action of S2 is R and of S1 is L; matrices in a product
    act right-to-left, so the letter order is reversed."""
    out: list[TwistGenerator] = []
    for ch in reversed(word):
        if ch == R_LETTER:
            out.append(TwistGenerator.T2)
        elif ch == L_LETTER:
            out.append(TwistGenerator.T1)
        else:
            raise ValueError(f"invalid monoid letter {ch!r}")
    return tuple(out)


# --- density search in the positive quadrant ---

@dataclass(frozen=True)
class ReachReport:
    """Search result in parameter space.

    No end room is carried: after thousands of moves the sheared basis
    exceeds what float coordinates can orient, while the parameter path
    stays well conditioned.  Build a fresh room from final_params.
    """

    word: Word
    mu_checkpoints: tuple[tuple[str, tuple[float, float]], ...]
    final_error: float
    final_params: DilationParams


def _complete_to_unimodular(a: int, c: int) -> tuple[int, int]:
    """Nonnegative (b, d) with a*d - c*b == 1 for coprime nonnegative a, c."""
    # extended euclid on (a, c)
    old_r, r = a, c
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r != 1:
        raise ValueError("inputs are not coprime")
    d0, b0 = old_s, -old_t     # a*d0 - c*b0 == 1
    shift = 0
    while d0 + shift * c < 0 or b0 + shift * a < 0:
        shift += 1
    while d0 + (shift - 1) * c >= 0 and b0 + (shift - 1) * a >= 0 and shift > 0:
        shift -= 1
    return b0 + shift * a, d0 + shift * c


def _target_convergents(t1: float, t2: float):
    for p, q in float_convergents(t1 / t2):
        if p >= 1 and q >= 1:
            yield p, q


def reach_target(room: Room, mu_target, eps: float, budget: int = 10 ** 5,
                 cancel: Optional[Callable[[], bool]] = None) -> ReachReport:
    """Admissible word moving the parameters within eps of a positive target.

    Three phases: contract toward the origin, push the first coordinate out
    along a near-rational ray with S2 powers, then spread with a nonnegative
    unimodular word whose leading column approximates the target direction.
    The word's parameter action is re-folded move by move, verifying both
    admissibility and the final error before the report is returned.
    """
    params0 = room.params
    if not params0.in_positive_quadrant():
        raise ValueError("search starts from the open positive quadrant")
    t1, t2 = float(mu_target[0]), float(mu_target[1])
    if t1 <= 0 or t2 <= 0:
        raise ValueError("target must lie in the open positive quadrant")
    m1, m2 = params0.as_floats()
    if math.hypot(m1 - t1, m2 - t2) <= eps:
        return ReachReport((), (("start", (m1, m2)),),
                           math.hypot(m1 - t1, m2 - t2), params0)

    last_error = math.inf
    for a, c in _target_convergents(t1, t2):
        direction_error = abs(c * (t1 / a) - t2)
        if direction_error > eps / 3.0:
            continue
        b, d = _complete_to_unimodular(a, c)
        eta = eps / (3.0 * (a + b + c + d + 1))
        try:
            contraction = gauss_contraction(params0, eta,
                                            max_generators=budget,
                                            cancel=cancel)
        except BudgetExhausted as exc:
            raise BudgetExhausted("budget exhausted during contraction",
                                  partial=exc.partial) from exc
        eps1, eps2 = contraction.final.as_floats()
        x_goal = t1 / a
        n = max(0, round((x_goal - eps1) / eps2))
        push = (TwistGenerator.T2,) * n
        spread = sl2n_word_to_twists(decompose_sl2n(((a, b), (c, d))))
        word = contraction.word + push + spread
        if len(word) > budget:
            continue
        # verified parameter trajectory
        x_mid = (eps1 + n * eps2, eps2)
        final = (a * x_mid[0] + b * x_mid[1], c * x_mid[0] + d * x_mid[1])
        err = math.hypot(final[0] - t1, final[1] - t2)
        last_error = min(last_error, err)
        if err <= eps:
            cur = params0
            inadmissible = False
            for g in word:
                cur = twist_mu(g, cur)
                if not cur.in_positive_quadrant():
                    inadmissible = True
                    break
            if inadmissible:
                continue
            got = cur.as_floats()
            true_err = math.hypot(got[0] - t1, got[1] - t2)
            if true_err > eps:
                continue
            checkpoints = (
                ("start", (m1, m2)),
                ("contracted", (eps1, eps2)),
                ("pushed", x_mid),
                ("final", got),
            )
            return ReachReport(word, checkpoints, true_err, cur)
    raise BudgetExhausted(
        f"no admissible word within budget reached the target "
        f"(best verified error {last_error})")


# --- holonomy ---

class Holonomy(Enum):
    DISCRETE = "discrete"
    NON_DISCRETE = "non_discrete"
    UNDECIDED_FLOAT = "undecided_float"


@dataclass(frozen=True)
class HolonomyClass:
    verdict: Holonomy
    witness: Optional[tuple[int, int]] = None

    @property
    def orbit_closure(self) -> str:
        if self.verdict is Holonomy.DISCRETE:
            return "closed"
        if self.verdict is Holonomy.NON_DISCRETE:
            return "dense"
        return "unknown"


def _exact_ratio_witness(m1, m2) -> Optional[tuple[int, int]]:
    q1, q2 = QuadraticNumber._coerce(m1), QuadraticNumber._coerce(m2)
    if q2 == 0:
        return (1, 0) if q1 != 0 else None
    if q1 == 0:
        return (0, 1)
    if q1.d != q2.d:      # different fields, or one rational and one not
        return None
    ratio = q1 / q2
    if not ratio.is_rational:
        return None
    f = ratio.as_fraction()
    return (f.numerator, f.denominator)


def holonomy_class(params: DilationParams) -> HolonomyClass:
    """Discreteness of the subgroup generated by the two dilation factors.

    The multiplicative holonomy group is discrete exactly when mu1, mu2 are
    rationally dependent.  Exact inputs are decided; floats are screened by
    the continued-fraction test and otherwise reported undecided.
    """
    if params.is_zero():
        raise ValueError("zero parameters do not define a dilation surface")
    if params.is_exact:
        witness = _exact_ratio_witness(params.mu1, params.mu2)
        if witness is None:
            return HolonomyClass(Holonomy.NON_DISCRETE)
        return HolonomyClass(Holonomy.DISCRETE, witness)
    m1, m2 = params.as_floats()
    if m2 == 0.0:
        return HolonomyClass(Holonomy.DISCRETE, (1, 0))
    if m1 == 0.0:
        return HolonomyClass(Holonomy.DISCRETE, (0, 1))
    r = m1 / m2
    for p, q in float_convergents(abs(r)):
        if q > DENOMINATOR_CAP:
            break
        err = abs(abs(r) - p / q)
        if q >= 1 and err < RATIO_TOL and err * q * q < ANOMALY_FACTOR:
            sign = -1 if r < 0 else 1
            return HolonomyClass(Holonomy.DISCRETE, (sign * p, q))
    return HolonomyClass(Holonomy.UNDECIDED_FLOAT)
