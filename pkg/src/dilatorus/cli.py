"""Command-line front end.

Thin wrappers over the library: build and act on rooms, apply twist
words, search for parameter targets, classify directions, scan for
cylinders, run the flow monitor, and compute rotation numbers,
survivor measures and orbit closures.  Each command prints one JSON document to stdout
(canonically serialized, so outputs are byte-stable), or CSV where a
table is the natural shape; --svg adds a drawing for the commands
whose schema allows one.

Failures are machine readable: bad input exits 2 with a one-line JSON
diagnostic on stderr; an exhausted budget exits 3 with the partial
result written to stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction
from typing import Callable, Optional

from .errors import BudgetExhausted, DilatorusError, NonConvergence
from .geometry import (DilationParams, Room, SL2Matrix, apply_sl2,
                       build_room, canonicalize, geodesic_matrix,
                       room_to_json)
from .quadratics import QuadraticNumber
from .rauzy import survivor_measure
from .surface import (DEFAULT_INDUCTION_BUDGET, classify_direction,
                      find_cylinders, rotation_number)
from .svgout import direction_wheel_svg, pentagon_svg
from .teichmuller import divergence_monitor, flow_series_to_csv
from .twists import (apply_word, holonomy_class, reach_target,
                     word_from_string, word_to_string)

DEFAULT_FLOW_STEPS = 12
DEFAULT_FLOW_BUDGET = 2000
DEFAULT_EPS_ANGLE = 0.05
DEFAULT_REACH_EPS = 1e-2
DEFAULT_REACH_BUDGET = 10 ** 5
DEFAULT_ROTNUM_TOL = 1e-10

_CSV_COMMANDS = {"scan", "flow", "measure", "rotnum"}
_SVG_COMMANDS = {"room", "act", "twist", "scan"}


class UsageError(Exception):
    """Flag-level rejection, reported before any computation runs."""


def canonical_json(obj) -> str:
    """The byte-stable serialization every command prints."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# --- flag parsing helpers ---

def _parse_floats(text: str, n: int, flag: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"{flag} expects {n} comma-separated numbers, "
                         f"got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"{flag}: non-numeric entry in {text!r}") from None


def _parse_exact(text: str, flag: str):
    """Comma triple a,b,d meaning a + b*sqrt(d); d=0 gives the rational a."""
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"{flag} expects an a,b,d triple, got {text!r}")
    try:
        a, b = Fraction(parts[0]), Fraction(parts[1])
        d = int(parts[2])
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{flag}: cannot parse triple {text!r}") from None
    if d == 0:
        if b != 0:
            raise UsageError(f"{flag}: nonzero irrational part needs d > 0")
        return a
    try:
        return QuadraticNumber(a, b, d)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _parse_mu_pair(args, name1: str = "mu1", name2: str = "mu2"):
    """One exact or one float parameter pair; mixing is rejected."""
    f1, f2 = getattr(args, name1), getattr(args, name2)
    x1 = getattr(args, f"{name1}_exact")
    x2 = getattr(args, f"{name2}_exact")
    float_given = f1 is not None or f2 is not None
    exact_given = x1 is not None or x2 is not None
    if float_given and exact_given:
        raise UsageError(f"--{name1}/--{name2} cannot be mixed with the "
                         "-exact forms")
    if exact_given:
        if x1 is None or x2 is None:
            raise UsageError(f"both --{name1}-exact and --{name2}-exact "
                             "are required")
        return (_parse_exact(x1, f"--{name1}-exact"),
                _parse_exact(x2, f"--{name2}-exact"))
    if not float_given:
        raise UsageError(f"parameters required: --{name1}/--{name2} or "
                         "the -exact forms")
    if f1 is None or f2 is None:
        raise UsageError(f"both --{name1} and --{name2} are required")
    return (f1, f2)


def _room_from_args(args) -> Room:
    mu = _parse_mu_pair(args)
    e1 = _parse_floats(args.e1, 2, "--e1")
    e2 = _parse_floats(args.e2, 2, "--e2")
    return build_room(e1, e2, mu)


def _room_payload(room: Room) -> dict:
    data = room_to_json(room)
    data["vertices"] = [list(v.as_floats()) for v in room.vertices()]
    data["nu"] = list(room.nu())
    return data


def _write_svg(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --- commands ---

def cmd_room(args) -> int:
    room = canonicalize(_room_from_args(args))
    _emit(canonical_json(_room_payload(room)))
    if args.svg:
        _write_svg(args.svg, pentagon_svg(room))
    return 0


def cmd_act(args) -> int:
    room = _room_from_args(args)
    chosen = [x for x in (args.matrix, args.rotate, args.t) if x is not None]
    if len(chosen) != 1:
        raise UsageError("exactly one of --matrix, --rotate, --t is required")
    if args.matrix is not None:
        a, b, c, d = _parse_floats(args.matrix, 4, "--matrix")
        try:
            m = SL2Matrix(a, b, c, d)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    elif args.rotate is not None:
        m = SL2Matrix.rotation(args.rotate)
    else:
        m = geodesic_matrix(args.t)
    moved = apply_sl2(m, room)
    _emit(canonical_json(_room_payload(moved)))
    if args.svg:
        _write_svg(args.svg, pentagon_svg(moved))
    return 0


def cmd_twist(args) -> int:
    room = _room_from_args(args)
    try:
        word = word_from_string(args.word)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = apply_word(word, room)
    _emit(canonical_json({
        "word": args.word,
        "mu_path": [list(p) for p in result.mu_path],
        "room": _room_payload(result.room),
    }))
    if args.svg:
        _write_svg(args.svg, pentagon_svg(result.room))
    return 0


def cmd_reach(args) -> int:
    room = _room_from_args(args)
    eps = args.tol if args.tol is not None else DEFAULT_REACH_EPS
    budget = args.budget if args.budget is not None else DEFAULT_REACH_BUDGET
    report = reach_target(room, (args.target1, args.target2), eps, budget)
    _emit(canonical_json({
        "word": word_to_string(report.word),
        "mu_trajectory": [[stage, list(mu)]
                          for stage, mu in report.mu_checkpoints],
        "final_error": report.final_error,
    }))
    return 0


def cmd_classify(args) -> int:
    room = _room_from_args(args)
    budget = (args.budget if args.budget is not None
              else DEFAULT_INDUCTION_BUDGET)
    verdict = classify_direction(room, args.theta, budget=budget)
    _emit(canonical_json({
        "theta": args.theta,
        "kind": verdict.kind.value,
        "word": verdict.word,
        "multiplier": verdict.multiplier,
    }))
    return 0


def cmd_scan(args) -> int:
    room = _room_from_args(args)
    budget = (args.budget if args.budget is not None
              else DEFAULT_INDUCTION_BUDGET)
    scan = find_cylinders(room, args.eps, budget=budget)
    if args.format == "csv":
        lines = ["theta1,theta2,angle,word,multiplier"]
        for c in scan.cylinders:
            lines.append(f"{c.theta1!r},{c.theta2!r},{c.angle!r},"
                         f"{c.word},{c.multiplier!r}")
        _emit("\n".join(lines) + "\n")
    else:
        _emit(canonical_json({
            "eps_angle": args.eps,
            "n_samples": scan.n_samples,
            "exhausted": scan.exhausted,
            "cylinders": [c.to_json_dict() for c in scan.cylinders],
        }))
    if args.svg:
        _write_svg(args.svg, direction_wheel_svg(room, scan))
    return 0


def cmd_flow(args) -> int:
    room = _room_from_args(args)
    budget = args.budget if args.budget is not None else DEFAULT_FLOW_BUDGET
    kwargs = {}
    if args.tol is not None:
        kwargs["theta_tol"] = args.tol
    report = divergence_monitor(room, args.t_max, args.steps, args.eps,
                                budget, **kwargs)
    if args.format == "csv":
        _emit(flow_series_to_csv(report))
    else:
        _emit(canonical_json(report.to_json_dict()))
    return 0


def cmd_rotnum(args) -> int:
    rho_a, rho_b = _parse_mu_pair(args, "rhoA", "rhoB")
    tol = args.tol if args.tol is not None else DEFAULT_ROTNUM_TOL
    kwargs = {"tol": tol}
    if args.budget is not None:
        kwargs["max_iter"] = args.budget
    value = rotation_number(rho_a, rho_b, **kwargs)
    exact = isinstance(value, Fraction)
    if args.format == "csv":
        _emit("rho_a,rho_b,rotation_number\n"
              f"{float(rho_a)!r},{float(rho_b)!r},{float(value)!r}\n")
    else:
        _emit(canonical_json({
            "rho_a": float(rho_a),
            "rho_b": float(rho_b),
            "rotation_number": float(value),
            "exact": exact,
            "fraction": str(value) if exact else None,
        }))
    return 0


def _parse_rho(text: str, exact: bool, flag: str):
    try:
        return Fraction(text) if exact else float(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{flag}: cannot parse {text!r}") from None


def cmd_measure(args) -> int:
    rho_a = _parse_rho(args.rhoA, args.exact, "--rhoA")
    rho_b = _parse_rho(args.rhoB, args.exact, "--rhoB")
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    if args.format == "csv":
        lines = ["n,measure"]
        for k in range(args.n + 1):
            m = survivor_measure(rho_a, rho_b, k)
            lines.append(f"{k},{m}" if args.exact else f"{k},{m!r}")
        _emit("\n".join(lines) + "\n")
    else:
        m = survivor_measure(rho_a, rho_b, args.n)
        _emit(canonical_json({
            "rho_a": float(rho_a),
            "rho_b": float(rho_b),
            "n": args.n,
            "measure": str(m) if args.exact else m,
            "measure_float": float(m),
        }))
    return 0


def cmd_orbit_closure(args) -> int:
    mu1, mu2 = _parse_mu_pair(args)
    hc = holonomy_class(DilationParams(mu1, mu2))
    _emit(canonical_json({
        "verdict": hc.verdict.value,
        "orbit_closure": hc.orbit_closure,
        "witness": list(hc.witness) if hc.witness is not None else None,
    }))
    return 0


_DISPATCH: dict[str, Callable] = {
    "room": cmd_room,
    "act": cmd_act,
    "twist": cmd_twist,
    "reach": cmd_reach,
    "classify": cmd_classify,
    "scan": cmd_scan,
    "flow": cmd_flow,
    "rotnum": cmd_rotnum,
    "measure": cmd_measure,
    "orbit-closure": cmd_orbit_closure,
}


# --- parser ---

class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of printing usage and exiting."""

    def error(self, message):
        raise UsageError(message)


def _common_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--svg", metavar="PATH")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.add_argument("--tol", type=float)
    return p


def _room_flags() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--mu1", type=float)
    p.add_argument("--mu2", type=float)
    p.add_argument("--mu1-exact", metavar="a,b,d")
    p.add_argument("--mu2-exact", metavar="a,b,d")
    p.add_argument("--e1", default="1,0", metavar="x,y")
    p.add_argument("--e2", default="0,1", metavar="x,y")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    roomf = _room_flags()
    top = _Parser(prog="dilatorus",
                  description="dilation tori with one boundary component")
    sub = top.add_subparsers(dest="command", required=True)

    sub.add_parser("room", parents=[common, roomf],
                   help="build, validate and canonicalize a room")

    act = sub.add_parser("act", parents=[common, roomf],
                         help="apply a linear map to a room")
    act.add_argument("--matrix", metavar="a,b,c,d")
    act.add_argument("--rotate", type=float, metavar="ALPHA")
    act.add_argument("--t", type=float, metavar="T",
                     help="geodesic flow time")

    tw = sub.add_parser("twist", parents=[common, roomf],
                        help="apply a twist word")
    tw.add_argument("--word", required=True,
                    help="string over A,a,B,b")

    rc = sub.add_parser("reach", parents=[common, roomf],
                        help="search a word reaching a parameter target")
    rc.add_argument("--target1", type=float, required=True)
    rc.add_argument("--target2", type=float, required=True)

    cl = sub.add_parser("classify", parents=[common, roomf],
                        help="classify one flow direction")
    cl.add_argument("--theta", type=float, required=True)

    sc = sub.add_parser("scan", parents=[common, roomf],
                        help="scan directions for cylinders")
    sc.add_argument("--eps", type=float, default=DEFAULT_EPS_ANGLE,
                    help="angle resolution")

    fl = sub.add_parser("flow", parents=[common, roomf],
                        help="run the geodesic flow monitor")
    fl.add_argument("--t-max", type=float, required=True)
    fl.add_argument("--steps", type=int, default=DEFAULT_FLOW_STEPS)
    fl.add_argument("--eps", type=float, default=DEFAULT_EPS_ANGLE)

    rn = sub.add_parser("rotnum", parents=[common],
                        help="rotation number of the two-slope circle map")
    rn.add_argument("--rhoA", type=float)
    rn.add_argument("--rhoB", type=float)
    rn.add_argument("--rhoA-exact", metavar="a,b,d")
    rn.add_argument("--rhoB-exact", metavar="a,b,d")

    ms = sub.add_parser("measure", parents=[common],
                        help="survivor measure after n subdivision steps")
    ms.add_argument("--rhoA", required=True)
    ms.add_argument("--rhoB", required=True)
    ms.add_argument("--n", type=int, required=True)
    ms.add_argument("--exact", action="store_true",
                    help="exact rational arithmetic")

    sub.add_parser("orbit-closure", parents=[common, roomf],
                   help="orbit closure of the parameter point")
    return top


def _diagnostic(name: str, detail: str, **extra) -> str:
    data = {"error": name, "detail": detail}
    data.update(extra)
    return canonical_json(data)


def main(argv: Optional[list[str]] = None) -> int:
    # deep exact survivor measures print rationals with thousands of digits
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(10 ** 6)
    top = build_parser()
    try:
        args = top.parse_args(argv)
        if args.format == "csv" and args.command not in _CSV_COMMANDS:
            raise UsageError(f"csv output is not defined for {args.command}")
        if args.svg is not None and args.command not in _SVG_COMMANDS:
            raise UsageError(f"svg output is not defined for {args.command}")
        random.seed(args.seed)
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        print(_diagnostic("BadInput", str(exc)), file=sys.stderr)
        return 2
    except NonConvergence as exc:
        bracket = list(exc.bracket) if exc.bracket is not None else None
        _emit(_diagnostic("NonConvergence", str(exc), bracket=bracket))
        return 3
    except BudgetExhausted as exc:
        _emit(_diagnostic("BudgetExhausted", str(exc)))
        return 3
    except DilatorusError as exc:
        print(_diagnostic(type(exc).__name__, str(exc)), file=sys.stderr)
        return 2
    except ValueError as exc:
        print(_diagnostic("ValueError", str(exc)), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
