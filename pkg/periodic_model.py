#!/usr/bin/env python3
"""
Periodic Model for currentlab
Currents invariant under one hyperbolic translation, with exact orbit-range sums
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from cyclic_boundary import Box, Chord, arc_contains
from errors import (
    ContractError,
    DiagonalError,
    FixedPointError,
    GenericPositionError,
    ValidationError,
)

logger = logging.getLogger(__name__)

NORTH = "N"
SOUTH = "S"
REPELLING = "minus"
ATTRACTING = "plus"

# rank of each part of the circle when it is cut open at the repelling fixed point
_RANK = {REPELLING: 0, SOUTH: 1, ATTRACTING: 2, NORTH: 3}
_SIDE = {rank: side for side, rank in _RANK.items()}

SHORT_SOUTH = "short-S"
SHORT_NORTH = "short-N"
LONG_SOUTH = "long-S"
LONG_NORTH = "long-N"
CROSS_A = "A"
CROSS_B = "B"


@dataclass(frozen=True, order=True)
class PeriodicPoint:
    """A boundary point stored by its exact cyclic key.

    ``rank`` orders the repelling fixed point, side S, the attracting fixed
    point and side N. ``coord`` is the position t on S and -t on N, so the
    translation moves both sides toward the attracting point.
    """

    rank: int
    coord: Fraction = Fraction(0)

    @property
    def side(self) -> str:
        return _SIDE[self.rank]

    @property
    def is_fixed(self) -> bool:
        return self.side in (REPELLING, ATTRACTING)

    @property
    def t(self) -> Fraction:
        if self.side == NORTH:
            return -self.coord
        return self.coord

    def __str__(self):
        if self.is_fixed:
            return "g-" if self.side == REPELLING else "g+"
        return f"{self.side}{self.t}"


GAMMA_MINUS = PeriodicPoint(_RANK[REPELLING])
GAMMA_PLUS = PeriodicPoint(_RANK[ATTRACTING])


def side_point(side: str, t) -> PeriodicPoint:
    if side not in (NORTH, SOUTH):
        raise ValidationError(f"Unknown side {side!r}")
    if isinstance(t, float):
        raise ValidationError(f"Positions must be exact, got float {t!r}")
    t = Fraction(t)
    return PeriodicPoint(_RANK[side], -t if side == NORTH else t)


def shift(p: PeriodicPoint, k: int) -> PeriodicPoint:
    """Apply the k-th power of the translation"""
    if p.is_fixed:
        return p
    return side_point(p.side, p.t + k)


def shift_chord(c: Chord, k: int) -> Chord:
    return Chord(shift(c.src, k), shift(c.dst, k))


@dataclass(frozen=True)
class PeriodicCircle:
    """Per-side slot phases in [0, 1); slot s at power k sits at position k + phase"""

    north: Tuple[Fraction, ...]
    south: Tuple[Fraction, ...]

    def __post_init__(self):
        for name in ("north", "south"):
            phases = tuple(Fraction(v) for v in getattr(self, name))
            if any(not 0 <= v < 1 for v in phases):
                raise ValidationError(f"Slot phases on {name} must lie in [0, 1)")
            if len(set(phases)) != len(phases):
                raise ValidationError(f"Slot phases on {name} must be distinct")
            object.__setattr__(self, name, phases)

    def phases(self, side: str) -> Tuple[Fraction, ...]:
        if side not in (NORTH, SOUTH):
            raise ValidationError(f"Unknown side {side!r}")
        return self.north if side == NORTH else self.south

    def point(self, side: str, slot: int, power: int) -> PeriodicPoint:
        phases = self.phases(side)
        if not 0 <= slot < len(phases):
            raise ValidationError(f"Slot {slot} is out of range for side {side}")
        return side_point(side, power + phases[slot])


def chord_type(c: Chord) -> str:
    a, b = c.src, c.dst
    if a.side == NORTH and b.side == SOUTH:
        return CROSS_A
    if a.side == SOUTH and b.side == NORTH:
        return CROSS_B
    if a.side == SOUTH:
        return SHORT_SOUTH if a.t < b.t else LONG_SOUTH
    return SHORT_NORTH if a.t > b.t else LONG_NORTH


def _same_orbit(c: Chord, d: Chord) -> bool:
    if (c.src.side, c.dst.side) != (d.src.side, d.dst.side):
        return False
    k = d.src.t - c.src.t
    return k.denominator == 1 and d.dst.t - c.dst.t == k


class PeriodicCurrent:
    """Orbit representatives with positive weights; the current is the sum over all translates"""

    def __init__(self, orbit_reps: Mapping[Chord, object], circle: Optional[PeriodicCircle] = None):
        reps: Dict[Chord, Fraction] = {}
        for c, w in orbit_reps.items():
            if c.src.is_fixed or c.dst.is_fixed:
                raise ValidationError(f"Chord {c} ends at a fixed point")
            if isinstance(w, float):
                raise ValidationError(f"Weight of {c} must be exact, got float {w!r}")
            w = Fraction(w)
            if w <= 0:
                raise ValidationError(f"Weight of {c} must be positive, got {w}")
            for d in reps:
                if _same_orbit(c, d):
                    raise ValidationError(f"Chords {c} and {d} lie in the same orbit")
            reps[c] = w
        self.orbit_reps = dict(sorted(reps.items()))
        self.circle = circle

    def items(self):
        return self.orbit_reps.items()

    def __len__(self):
        return len(self.orbit_reps)

    def __repr__(self):
        body = ", ".join(f"{c}: {w}" for c, w in self.orbit_reps.items())
        return f"PeriodicCurrent({{{body}}})"


def _breaks(c: Chord, corners: Iterable[PeriodicPoint]) -> List[Fraction]:
    """Powers k at which an endpoint of the k-th translate meets a corner"""
    found = []
    for e in (c.src, c.dst):
        for z in corners:
            if not z.is_fixed and z.side == e.side:
                b = z.t - e.t
                if b.denominator == 1:
                    raise GenericPositionError(f"Translate of {c} by {b} touches corner {z}", chord=c, point=z)
                found.append(b)
    return found


def _orbit_sum(c: Chord, weight_at: Callable[[int], Fraction], breaks: Sequence[Fraction]) -> Fraction:
    """Sum of weight_at(k) over all integers k; weight_at is constant between consecutive breaks"""
    points = sorted(set(breaks))
    if not points:
        if weight_at(0) != 0:
            raise FixedPointError(f"Every translate of {c} contributes", chord=c)
        return Fraction(0)
    if weight_at(floor(points[0])) != 0 or weight_at(floor(points[-1]) + 1) != 0:
        raise FixedPointError(f"Infinitely many translates of {c} contribute", chord=c)
    total = Fraction(0)
    for lo, hi in zip(points, points[1:]):
        first, last = floor(lo) + 1, floor(hi)
        if first <= last:
            total += weight_at(first) * (last - first + 1)
    return total


def periodic_box_measure(mu: PeriodicCurrent, r: Box) -> Fraction:
    """Mass of all translates of all representatives inside the box"""
    corners = r.corners()
    total = Fraction(0)
    for c, w in mu.items():
        total += _orbit_sum(
            c,
            lambda k, c=c, w=w: w if r.contains(shift_chord(c, k)) else Fraction(0),
            _breaks(c, corners),
        )
    return total


def _generic_position(mu: PeriodicCurrent) -> Fraction:
    """A phase avoiding every endpoint phase of the current"""
    used = sorted({p.t % 1 for c in mu.orbit_reps for p in (c.src, c.dst)} | {Fraction(0), Fraction(1)})
    widest = max(zip(used, used[1:]), key=lambda pair: pair[1] - pair[0])
    return (widest[0] + widest[1]) / 2


def translation_length(mu: PeriodicCurrent, m: int) -> Fraction:
    """Mass of the box [g^|m| x, x] x [g-, g+] for a generic x on N"""
    if m == 0:
        raise ContractError("Translation length needs a nonzero power")
    x = side_point(NORTH, _generic_position(mu))
    return periodic_box_measure(mu, Box(shift(x, abs(m)), x, GAMMA_MINUS, GAMMA_PLUS))


class OrbitSubmeasure:
    """Lower submeasure of a periodic current cut along the loop through four generic points.

    Short chords are full, long same-side chords are empty, crossing chords
    of type A are full up to a power threshold and those of type B from one.
    """

    def __init__(self, mu: PeriodicCurrent):
        self.mu = mu
        g = _generic_position(mu)
        x0, y0 = side_point(NORTH, g), side_point(SOUTH, g)
        self.thresholds: Dict[Chord, int] = {}
        for c in mu.orbit_reps:
            kind = chord_type(c)
            if kind == CROSS_A:
                self.thresholds[c] = min(floor(x0.t - c.src.t), floor(y0.t - c.dst.t))
            elif kind == CROSS_B:
                self.thresholds[c] = max(-floor(c.src.t - y0.t), -floor(c.dst.t - x0.t))

    def fraction(self, c: Chord, k: int) -> Fraction:
        """Share of the weight of the k-th translate of representative c"""
        kind = chord_type(c)
        if kind in (SHORT_NORTH, SHORT_SOUTH):
            return Fraction(1)
        if kind in (LONG_NORTH, LONG_SOUTH):
            return Fraction(0)
        if kind == CROSS_A:
            return Fraction(1) if k <= self.thresholds[c] else Fraction(0)
        return Fraction(1) if k >= self.thresholds[c] else Fraction(0)

    def cuts(self, c: Chord) -> List[Fraction]:
        kind = chord_type(c)
        if kind == CROSS_A:
            return [self.thresholds[c] + Fraction(1, 2)]
        if kind == CROSS_B:
            return [self.thresholds[c] - Fraction(1, 2)]
        return []


def periodic_potential(mu: PeriodicCurrent, nu: OrbitSubmeasure, x: PeriodicPoint, y: PeriodicPoint) -> Fraction:
    """-nu(chords above (x, y)) - (mu - nu)(chords below), summed over all translates"""
    if x == y:
        raise DiagonalError(f"Potential is undefined on the diagonal ({x}, {y})")
    total = Fraction(0)
    for c, w in mu.items():
        def weight_at(k, c=c, w=w):
            moved = shift_chord(c, k)
            if arc_contains((moved.src, moved.dst), (x, y)):
                return -w * nu.fraction(c, k)
            if arc_contains((x, y), (moved.src, moved.dst)):
                return -w * (1 - nu.fraction(c, k))
            return Fraction(0)

        total += _orbit_sum(c, weight_at, _breaks(c, (x, y)) + nu.cuts(c))
    return total


def displacement(mu: PeriodicCurrent, m: int) -> Fraction:
    """Oscillation of the source partial sums of g^m nu - nu over the N side"""
    nu = OrbitSubmeasure(mu)
    moved: Dict[PeriodicPoint, Fraction] = {}
    for c, w in mu.items():
        if chord_type(c) != CROSS_A:
            continue
        K = nu.thresholds[c]
        powers = range(K + 1, K + m + 1) if m > 0 else range(K + m + 1, K + 1)
        sign = 1 if m > 0 else -1
        for k in powers:
            src = shift(c.src, k)
            moved[src] = moved.get(src, Fraction(0)) + sign * w
    running, sums = Fraction(0), [Fraction(0)]
    for _, w in sorted(moved.items()):
        running += w
        sums.append(running)
    return max(sums) - min(sums)


def symmetrized_period_check(mu: PeriodicCurrent) -> Tuple[Fraction, Fraction]:
    """(displacement by one step, cross ratio of the potential at x, gx against the fixed points)"""
    nu = OrbitSubmeasure(mu)
    x = side_point(NORTH, _generic_position(mu))
    gx = shift(x, 1)
    m = lambda a, b: periodic_potential(mu, nu, a, b)
    lhs = displacement(mu, 1)
    rhs = m(x, GAMMA_PLUS) + m(gx, GAMMA_MINUS) - m(x, GAMMA_MINUS) - m(gx, GAMMA_PLUS)
    logger.info(f"Symmetrized period check: lhs={lhs}, rhs={rhs}")
    return lhs, rhs


def period_ray_check(mu: PeriodicCurrent) -> Tuple[Fraction, Fraction]:
    """Mass of [g-, gx] x [g+, gy] against [g-, x] x [g+, y] for generic x on S and y on N"""
    g = _generic_position(mu)
    x, y = side_point(SOUTH, g), side_point(NORTH, g)
    moved = periodic_box_measure(mu, Box(GAMMA_MINUS, shift(x, 1), GAMMA_PLUS, shift(y, 1)))
    still = periodic_box_measure(mu, Box(GAMMA_MINUS, x, GAMMA_PLUS, y))
    return moved, still


def orbit_chords(mu: PeriodicCurrent, k_range: Iterable[int]) -> List[Tuple[Chord, Fraction]]:
    """Explicit translates of every representative for the given powers"""
    return [(shift_chord(c, k), w) for c, w in mu.items() for k in k_range]
