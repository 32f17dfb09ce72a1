"""Room model, SL(2,R) action, and serialization."""

import math
import random
from fractions import Fraction

import pytest

from dilatorus.errors import (DegenerateDoor, NonOrientedBasis,
                              NonSimplePentagon, OutsideQ)
from dilatorus.geometry import (DilationParams, Room, SL2Matrix, Vec2,
                                apply_sl2, build_room, canonicalize,
                                geodesic_matrix, point_in_polygon,
                                projective_action, room_from_json,
                                room_to_json, square_room, unit, wrap_2pi,
                                wrap_pi)
from dilatorus.quadratics import QuadraticNumber

SEED = 20260817
LN2 = math.log(2.0)


def random_sl2(rng: random.Random, spread: float = 0.8) -> SL2Matrix:
    rot1 = SL2Matrix.rotation(rng.uniform(0.0, 2.0 * math.pi))
    rot2 = SL2Matrix.rotation(rng.uniform(0.0, 2.0 * math.pi))
    stretch = SL2Matrix.diagonal(math.exp(rng.uniform(-spread, spread)))
    return rot1 @ stretch @ rot2


# --- matrices ---

def test_sl2_requires_unit_determinant():
    with pytest.raises(ValueError):
        SL2Matrix(1.0, 0.0, 0.0, 2.0)


def test_sl2_inverse_and_product():
    rng = random.Random(SEED)
    for _ in range(100):
        m = random_sl2(rng)
        ident = m @ m.inverse()
        assert abs(ident.a - 1.0) < 1e-9 and abs(ident.d - 1.0) < 1e-9
        assert abs(ident.b) < 1e-9 and abs(ident.c) < 1e-9


def test_geodesic_matrix_shape():
    g = geodesic_matrix(2.0)
    assert g.a == pytest.approx(math.exp(-1.0))
    assert g.d == pytest.approx(math.exp(1.0))
    assert g.b == 0.0 and g.c == 0.0


def test_projective_action_matches_vector_action():
    rng = random.Random(SEED + 1)
    for _ in range(200):
        m = random_sl2(rng)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        image = m.apply(unit(theta))
        assert projective_action(m, theta) == pytest.approx(
            wrap_2pi(math.atan2(image.y, image.x)))


def test_wrap_functions():
    assert wrap_2pi(-0.5) == pytest.approx(2.0 * math.pi - 0.5)
    assert wrap_pi(math.pi + 0.25) == pytest.approx(0.25)


# --- rooms ---

def test_symmetric_room_vertices():
    room = square_room(LN2, LN2)
    v = [p.as_floats() for p in room.vertices()]
    assert v[0] == pytest.approx((0.0, 0.0))
    assert v[1] == pytest.approx((1.0, 0.0))
    assert v[2] == pytest.approx((1.0, 1.0))
    assert v[3] == pytest.approx((0.5, 1.0))
    assert v[4] == pytest.approx((0.0, 0.5))


def test_room_rejects_bad_input():
    with pytest.raises(OutsideQ):
        square_room(-1.0, -1.0)
    with pytest.raises(DegenerateDoor):
        square_room(0.0, 0.0)
    with pytest.raises(NonOrientedBasis):
        build_room((1.0, 0.0), (2.0, 0.0), (LN2, LN2))
    with pytest.raises(NonOrientedBasis):
        build_room((0.0, 1.0), (1.0, 0.0), (LN2, LN2))


def test_mixed_sign_parameters_allowed():
    # only the (both negative) quadrant is excluded
    room = square_room(-0.4, 0.9)
    assert room.is_convex() in (True, False)


def test_boundary_parameters_can_break_simplicity():
    # mu2 = 0 puts V4 on the top side once nu1 < 1/2
    with pytest.raises(NonSimplePentagon):
        square_room(-0.7, 0.0)


def test_gluing_transports_endpoints_to_partner():
    rng = random.Random(SEED + 2)
    for _ in range(50):
        mu1 = rng.uniform(-0.5, 1.5)
        mu2 = rng.uniform(-0.5, 1.5)
        if mu1 <= 0 and mu2 <= 0:
            continue
        room = apply_sl2(random_sl2(rng, 0.5), square_room(mu1, mu2))
        sides = room.sides()
        partner = {0: 2, 1: 4, 2: 0, 4: 1}
        for side in sides:
            if side.is_door:
                continue
            mate = sides[partner[side.index]]
            # transported side equals the partner reversed
            for p, q in ((side.start, mate.end), (side.end, mate.start)):
                moved = side.transport(p)
                assert (moved - q).length() < 1e-9 * room.diameter()


def test_transport_factors_multiply_to_one():
    room = square_room(0.7, 0.3)
    sides = room.sides()
    assert sides[0].factor * sides[2].factor == pytest.approx(1.0)
    assert sides[1].factor * sides[4].factor == pytest.approx(1.0)
    assert sides[3].factor == 1.0


def test_door_direction_and_inward_cone():
    room = square_room(LN2, LN2)
    door = room.door_direction()
    # V3=(0.5,1) to V4=(0,0.5): slope 1, direction pi/4 mod pi
    assert door == pytest.approx(math.pi / 4.0)
    lo, hi = room.inward_directions()
    assert hi - lo == pytest.approx(math.pi)
    assert room.is_inward(0.5 * (lo + hi))
    assert not room.is_inward(0.5 * (lo + hi) + math.pi)


def test_apply_sl2_commutes_with_vertices():
    rng = random.Random(SEED + 3)
    for _ in range(50):
        room = square_room(rng.uniform(0.1, 1.2), rng.uniform(0.1, 1.2))
        m = random_sl2(rng)
        moved = apply_sl2(m, room)
        for v, w in zip(room.vertices(), moved.vertices()):
            assert (m.apply(v) - w).length() < 1e-9


def test_canonicalize_keeps_shape():
    room = build_room((2.0, 0.0), (0.0, 2.0), (0.4, 0.8))
    canon = canonicalize(room)
    assert canon.e1.cross(canon.e2) == pytest.approx(1.0)
    # same parameters, rescaled basis
    assert canon.params == room.params


def test_point_in_polygon_on_pentagon():
    room = square_room(LN2, LN2)
    poly = room.vertices()
    assert point_in_polygon(Vec2(0.4, 0.4), poly)
    assert not point_in_polygon(Vec2(-0.1, 0.5), poly)
    assert not point_in_polygon(Vec2(0.2, 0.9), poly)  # beyond the door


def test_json_roundtrip_float_and_exact():
    room = build_room((1.0, 0.25), (-0.5, 2.0), (0.4, 0.8))
    back = room_from_json(room_to_json(room))
    assert (back.e1 - room.e1).length() == 0.0
    assert back.params.as_floats() == room.params.as_floats()

    exact = square_room(QuadraticNumber(0, 1, 2), Fraction(1, 2))
    data = room_to_json(exact)
    assert "mu_exact" in data
    back = room_from_json(data)
    assert back.params.is_exact
    assert back.params.mu1 == exact.params.mu1
    assert back.params.mu2 == exact.params.mu2


def test_interior_diagonals_symmetric_room():
    room = square_room(LN2, LN2)
    pairs = set(room.interior_diagonals())
    for i, j in pairs:
        assert (j - i) % 5 not in (0, 1, 4)  # chords, not sides
    assert pairs  # the convex pentagon has interior chords
