"""Independent brute-force oracles used to validate the fast paths.

Everything here is written directly from the definitions, on purpose not
reusing the package's induction or cycle code: orbits are iterated point by
point and first returns are observed, not computed in closed form.
"""

from __future__ import annotations

import random
from typing import Callable


def two_slope_value(ra: float, rb: float, xt: float, x: float) -> float:
    if x < xt:
        return ra * x + (1.0 - ra * xt)
    return rb * (x - xt)


def simulate_first_return(ra: float, rb: float, xt: float, x: float,
                          winner: str, cap: int = 256) -> float:
    """Iterate until the orbit re-enters the induced subinterval."""
    if winner == "A":
        in_sub: Callable[[float], bool] = lambda y: 0.0 <= y < xt
    else:
        in_sub = lambda y: xt < y <= 1.0
    y = two_slope_value(ra, rb, xt, x)
    for _ in range(cap):
        if in_sub(y):
            return y
        y = two_slope_value(ra, rb, xt, y)
    raise RuntimeError("orbit did not return; not a winner configuration?")


def normalize(xt: float, winner: str, u: float) -> float:
    """Affine chart from the induced subinterval onto [0, 1]."""
    if winner == "A":
        return u / xt
    return (u - xt) / (1.0 - xt)


def valid_break_window(ra: float, rb: float) -> tuple[float, float]:
    """Open interval of break points giving injective maps."""
    if ra <= 1.0 and rb <= 1.0:
        return (0.0, 1.0)
    x_star = (1.0 - rb) / (ra - rb)
    if ra > 1.0:
        return (0.0, x_star)
    return (x_star, 1.0)


def random_winner_triple(rng: random.Random) -> tuple[float, float, float, str]:
    """Random valid (rho_a, rho_b, x_t) whose step has a winner."""
    while True:
        ra = pow(2.718281828459045, rng.uniform(-2.0, 2.0))
        rb = pow(2.718281828459045, rng.uniform(-2.0, 2.0))
        if ra > 1.0 and rb > 1.0:
            continue
        lo, hi = valid_break_window(ra, rb)
        thr_b = rb / (1.0 + rb)
        thr_a = 1.0 / (1.0 + ra)
        regions = []
        b_lo, b_hi = max(lo, 0.0), min(hi, thr_b)
        if b_hi - b_lo > 1e-6:
            regions.append(("B", b_lo, b_hi))
        a_lo, a_hi = max(lo, thr_a), min(hi, 1.0)
        if a_hi - a_lo > 1e-6:
            regions.append(("A", a_lo, a_hi))
        if not regions:
            continue
        winner, w_lo, w_hi = rng.choice(regions)
        margin = 1e-4 * (w_hi - w_lo)
        xt = rng.uniform(w_lo + margin, w_hi - margin)
        return (ra, rb, xt, winner)


def compare_induction_to_simulation(induce_fn, n_triples: int,
                                    seed: int = 20260817,
                                    samples_per_triple: int = 17) -> float:
    """Sup-norm disagreement between closed-form induction and simulation.

    `induce_fn(ra, rb, xt)` must return the induced map's data as a triple
    (rho_a', rho_b', x_t') in normalized coordinates.
    """
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(n_triples):
        ra, rb, xt, winner = random_winner_triple(rng)
        ca, cb, cxt = induce_fn(ra, rb, xt)
        if winner == "A":
            sub_lo, sub_hi = 0.0, xt
        else:
            sub_lo, sub_hi = xt, 1.0
        for k in range(1, samples_per_triple + 1):
            x = sub_lo + (sub_hi - sub_lo) * k / (samples_per_triple + 1.0)
            u = normalize(xt, winner, x)
            # skip points that straddle either discontinuity
            if abs(u - cxt) < 1e-6 or abs(x - xt) < 1e-9:
                continue
            got = normalize(xt, winner, simulate_first_return(ra, rb, xt, x, winner))
            want = two_slope_value(ca, cb, cxt, u)
            worst = max(worst, abs(got - want))
    return worst
