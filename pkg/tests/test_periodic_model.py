from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cyclic_boundary import Box, Chord
from errors import ContractError, FixedPointError, GenericPositionError, ValidationError
from periodic_model import (
    CROSS_A,
    CROSS_B,
    GAMMA_MINUS,
    GAMMA_PLUS,
    LONG_NORTH,
    LONG_SOUTH,
    NORTH,
    SHORT_NORTH,
    SHORT_SOUTH,
    SOUTH,
    OrbitSubmeasure,
    PeriodicCircle,
    PeriodicCurrent,
    chord_type,
    displacement,
    orbit_chords,
    period_ray_check,
    periodic_box_measure,
    periodic_potential,
    shift,
    side_point,
    symmetrized_period_check,
    translation_length,
)

F = Fraction


def N(t):
    return side_point(NORTH, t)


def S(t):
    return side_point(SOUTH, t)


def _single_a(w=2) -> PeriodicCurrent:
    return PeriodicCurrent({Chord(N(F(1, 4)), S(F(1, 2))): w})


class _EmptyOrbitSubmeasure(OrbitSubmeasure):
    def fraction(self, c, k):
        return Fraction(0)


def test_cyclic_order_of_the_four_parts() -> None:
    assert GAMMA_MINUS < S(-100) < S(0) < S(100) < GAMMA_PLUS < N(100) < N(0) < N(-100)
    assert shift(S(F(1, 3)), 2) == S(F(7, 3))
    assert shift(N(F(1, 3)), 2) == N(F(7, 3))
    assert shift(GAMMA_PLUS, 5) == GAMMA_PLUS


def test_chord_types() -> None:
    assert chord_type(Chord(S(0), S(F(1, 2)))) == SHORT_SOUTH
    assert chord_type(Chord(S(F(1, 2)), S(0))) == LONG_SOUTH
    assert chord_type(Chord(N(1), N(0))) == SHORT_NORTH
    assert chord_type(Chord(N(0), N(1))) == LONG_NORTH
    assert chord_type(Chord(N(0), S(0))) == CROSS_A
    assert chord_type(Chord(S(0), N(0))) == CROSS_B


def test_circle_slots() -> None:
    circle = PeriodicCircle((F(1, 4),), (F(1, 2), F(0)))
    assert circle.point(NORTH, 0, 2) == N(F(9, 4))
    assert circle.point(SOUTH, 1, -1) == S(-1)
    with pytest.raises(ValidationError):
        circle.point(SOUTH, 2, 0)
    with pytest.raises(ValidationError):
        PeriodicCircle((F(1),), ())
    with pytest.raises(ValidationError):
        PeriodicCircle((F(1, 2), F(1, 2)), ())


def test_current_validation() -> None:
    with pytest.raises(ValidationError):
        PeriodicCurrent({Chord(GAMMA_MINUS, S(0)): 1})
    with pytest.raises(ValidationError):
        PeriodicCurrent({Chord(N(0), S(0)): 0})
    with pytest.raises(ValidationError):
        PeriodicCurrent({Chord(N(0), S(0)): 0.5})
    with pytest.raises(ValidationError):
        PeriodicCurrent({Chord(N(0), S(0)): 1, Chord(N(3), S(3)): 1})
    assert len(PeriodicCurrent({Chord(N(0), S(0)): 1, Chord(N(3), S(2)): 1})) == 2


@pytest.mark.parametrize("m", [1, 2, 5, -3])
def test_translation_length_of_one_orbit(m) -> None:
    assert translation_length(_single_a(2), m) == 2 * abs(m)
    assert displacement(_single_a(2), m) == 2 * abs(m)


def test_translation_length_adds_over_orbits() -> None:
    mu = PeriodicCurrent({
        Chord(N(F(1, 4)), S(F(1, 2))): 1,
        Chord(N(F(1, 8)), S(F(5, 2))): 3,
        Chord(S(F(1, 2)), N(F(9, 4))): 7,
        Chord(S(F(1, 8)), S(F(3, 8))): 5,
    })
    assert translation_length(mu, 2) == 8


def test_translation_length_needs_a_power() -> None:
    with pytest.raises(ContractError):
        translation_length(_single_a(), 0)


def test_box_corner_on_a_translate() -> None:
    mu = _single_a()
    with pytest.raises(GenericPositionError):
        periodic_box_measure(mu, Box(N(F(9, 4)), N(F(5, 4)), GAMMA_MINUS, GAMMA_PLUS))


def test_box_measure_counts_translates() -> None:
    mu = _single_a(F(3, 2))
    r = Box(N(F(35, 8)), N(F(3, 8)), S(F(-10)), S(F(10)))
    assert periodic_box_measure(mu, r) == 4 * F(3, 2)


def test_symmetrized_period_check() -> None:
    lhs, rhs = symmetrized_period_check(_single_a(F(5, 3)))
    assert lhs == rhs == F(5, 3)
    assert symmetrized_period_check(PeriodicCurrent({})) == (0, 0)
    two = PeriodicCurrent({Chord(N(F(1, 4)), S(F(1, 2))): F(5, 3), Chord(N(F(5, 8)), S(F(1, 8))): 2})
    assert symmetrized_period_check(two) == (F(11, 3), F(11, 3))


def _random_periodic(rng: random.Random, orbits: int) -> PeriodicCurrent:
    """Orbit representatives on both sides with pairwise distinct endpoint phases"""
    phases = rng.sample(range(1, 16), 2 * orbits)
    reps = {}
    for i in range(orbits):
        src_side, dst_side = rng.choice((NORTH, SOUTH)), rng.choice((NORTH, SOUTH))
        src = side_point(src_side, F(phases[2 * i], 16))
        dst = side_point(dst_side, F(phases[2 * i + 1], 16) + rng.randint(-2, 2))
        reps[Chord(src, dst)] = F(rng.randint(1, 5), rng.randint(1, 3))
    return PeriodicCurrent(reps)


def test_symmetrized_period_check_on_mixed_currents(rng: random.Random) -> None:
    for _ in range(25):
        mu = _random_periodic(rng, rng.randint(1, 5))
        crossing = sum((w for c, w in mu.items() if chord_type(c) == CROSS_A), F(0))
        lhs, rhs = symmetrized_period_check(mu)
        assert lhs == rhs == crossing


def test_period_ray_check_is_translation_invariant() -> None:
    mu = PeriodicCurrent({Chord(S(F(1, 2)), N(F(9, 4))): 3})
    assert period_ray_check(mu) == (6, 6)


def test_potential_with_full_short_chords_is_finite() -> None:
    mu = PeriodicCurrent({Chord(S(F(1, 2)), S(F(3, 4))): 1})
    nu = OrbitSubmeasure(mu)
    assert periodic_potential(mu, nu, S(F(1, 8)), GAMMA_PLUS) == 0


def test_infinite_orbit_sum_raises() -> None:
    mu = PeriodicCurrent({Chord(S(F(1, 2)), S(F(3, 4))): 1})
    with pytest.raises(FixedPointError):
        periodic_potential(mu, _EmptyOrbitSubmeasure(mu), S(F(1, 8)), GAMMA_PLUS)


def test_orbit_chords() -> None:
    mu = _single_a(1)
    chords = orbit_chords(mu, range(-1, 2))
    assert [c for c, _ in chords] == [
        Chord(N(F(-3, 4)), S(F(-1, 2))),
        Chord(N(F(1, 4)), S(F(1, 2))),
        Chord(N(F(5, 4)), S(F(3, 2))),
    ]
