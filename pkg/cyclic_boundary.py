#!/usr/bin/env python3
"""
Cyclic Boundary for currentlab
Exact cyclic order on the rational circle, chords, segments, boxes and taxi cycles
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Sequence, Tuple

from errors import ValidationError

logger = logging.getLogger(__name__)

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


@dataclass(frozen=True, order=True)
class BoundaryPoint:
    """A point of the circle R/Z stored as an exact angle in [0, 1)"""

    angle: Fraction

    def __post_init__(self):
        if isinstance(self.angle, float):
            raise ValidationError(f"Angles must be exact rationals, got float {self.angle!r}")
        object.__setattr__(self, "angle", Fraction(self.angle) % 1)

    def __str__(self):
        return format_angle(self)


def point(value) -> BoundaryPoint:
    """Coerce a Fraction, int, string or BoundaryPoint to a BoundaryPoint"""
    if isinstance(value, BoundaryPoint):
        return value
    if isinstance(value, str):
        return parse_angle(value)
    return BoundaryPoint(Fraction(value))


def parse_angle(text: str) -> BoundaryPoint:
    """Parse the "p/q" angle format with 0 <= p/q < 1"""
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"Malformed angle {text!r}: {str(e)}")
    if not 0 <= value < 1:
        raise ValidationError(f"Angle {text!r} is outside [0, 1)")
    return BoundaryPoint(value)


def format_angle(p: BoundaryPoint) -> str:
    return str(p.angle)


def rotate(p: BoundaryPoint, r) -> BoundaryPoint:
    return BoundaryPoint(p.angle + Fraction(r))


def ccw(a: Any, b: Any, c: Any) -> bool:
    """True iff a, b, c are distinct and appear in positive cyclic order.

    Works for any totally ordered point type whose linear order is the cyclic
    order cut open at some base point.
    """
    if a == b or b == c or a == c:
        return False
    return (a < b < c) or (b < c < a) or (c < a < b)


def in_closed_arc(z: Any, a: Any, b: Any) -> bool:
    """Membership of z in the closed positively oriented arc from a to b"""
    if z == a or z == b:
        return True
    if a == b:
        return False
    return ccw(a, z, b)


def arc_contains(outer: Tuple[Any, Any], inner: Tuple[Any, Any]) -> bool:
    """Closed-arc containment arc(inner) ⊆ arc(outer)"""
    (oa, ob), (ia, ib) = outer, inner
    return in_closed_arc(ia, oa, ob) and in_closed_arc(ib, ia, ob)


@dataclass(frozen=True, order=True)
class Chord:
    """An oriented chord (src -> dst), the desk-scale oriented geodesic"""

    src: BoundaryPoint
    dst: BoundaryPoint

    def __post_init__(self):
        if self.src == self.dst:
            raise ValidationError(f"Chord endpoints coincide at {self.src}")

    @property
    def reversed(self) -> "Chord":
        return Chord(self.dst, self.src)

    def endpoints(self):
        return (self.src, self.dst)

    def __str__(self):
        return f"({self.src}->{self.dst})"


def chord(src, dst) -> Chord:
    return Chord(point(src), point(dst))


def chord_leq(p: Chord, q: Chord) -> bool:
    """Nesting order: arc(p) ⊆ arc(q) with closed arcs"""
    return arc_contains((q.src, q.dst), (p.src, p.dst))


def chord_lt(p: Chord, q: Chord) -> bool:
    return p != q and chord_leq(p, q)


def _strictly_inside(z, a, b) -> bool:
    return ccw(a, z, b)


def crossing_sign(p: Chord, q: Chord) -> int:
    """+1 when q crosses p from the inside of arc(p) outwards, -1 the other way, 0 otherwise"""
    if len({p.src, p.dst, q.src, q.dst}) < 4:
        return 0
    src_inside = _strictly_inside(q.src, p.src, p.dst)
    dst_inside = _strictly_inside(q.dst, p.src, p.dst)
    if src_inside == dst_inside:
        return 0
    return 1 if src_inside else -1


@dataclass(frozen=True)
class Segment:
    """A horizontal segment [start, end] x {fixed} or a vertical one {fixed} x [start, end].

    The traversed arc is the one from start to end that avoids the fixed
    coordinate; it may run against the positive orientation.
    """

    kind: str
    fixed: Any
    start: Any
    end: Any

    def __post_init__(self):
        if self.kind not in (HORIZONTAL, VERTICAL):
            raise ValidationError(f"Unknown segment kind {self.kind!r}")
        if self.start == self.fixed or self.end == self.fixed:
            raise ValidationError(f"Segment {self} touches the diagonal")

    @property
    def is_degenerate(self) -> bool:
        return self.start == self.end

    @property
    def is_positive(self) -> bool:
        if self.is_degenerate:
            return True
        return not in_closed_arc(self.fixed, self.start, self.end)

    @property
    def tail(self) -> Tuple[Any, Any]:
        if self.kind == HORIZONTAL:
            return (self.start, self.fixed)
        return (self.fixed, self.start)

    @property
    def head(self) -> Tuple[Any, Any]:
        if self.kind == HORIZONTAL:
            return (self.end, self.fixed)
        return (self.fixed, self.end)

    def signed_length(self) -> Fraction:
        """Signed angular length of the traversed arc (BoundaryPoint segments only)"""
        if self.is_degenerate:
            return Fraction(0)
        if self.is_positive:
            return (self.end.angle - self.start.angle) % 1
        return -((self.start.angle - self.end.angle) % 1)

    def flip(self) -> "Segment":
        return Segment(self.kind, self.fixed, self.end, self.start)

    def __str__(self):
        return f"{self.kind}[{self.fixed}; {self.start}->{self.end}]"


def horizontal(y, x_from, x_to) -> Segment:
    return Segment(HORIZONTAL, y, x_from, x_to)


def vertical(x, y_from, y_to) -> Segment:
    return Segment(VERTICAL, x, y_from, y_to)


@dataclass(frozen=True)
class Box:
    """The rectangle [x1, x2] x [y1, y2] with x1 < x2 < y1 < y2 cyclically"""

    x1: Any
    x2: Any
    y1: Any
    y2: Any

    def __post_init__(self):
        if not (ccw(self.x1, self.x2, self.y1) and ccw(self.x1, self.y1, self.y2)):
            raise ValidationError(
                f"Box corners {self.x1}, {self.x2}, {self.y1}, {self.y2} are not in strict cyclic order"
            )

    def corners(self):
        return (self.x1, self.x2, self.y1, self.y2)

    def contains(self, c: Chord) -> bool:
        return in_closed_arc(c.src, self.x1, self.x2) and in_closed_arc(c.dst, self.y1, self.y2)


def box(x1, x2, y1, y2) -> Box:
    return Box(point(x1), point(x2), point(y1), point(y2))


@dataclass(frozen=True)
class TaxiCycle:
    """A closed concatenation of horizontal and vertical segments"""

    segments: Tuple[Segment, ...]

    def __post_init__(self):
        segments = tuple(self.segments)
        object.__setattr__(self, "segments", segments)
        if not segments:
            raise ValidationError("A taxi cycle needs at least one segment")
        for current, following in zip(segments, segments[1:] + segments[:1]):
            if current.head != following.tail:
                raise ValidationError(f"Taxi cycle is broken between {current} and {following}")

    def corners(self) -> List[Tuple[Any, Any]]:
        return [s.tail for s in self.segments]

    def __len__(self):
        return len(self.segments)


def winding_number(z: TaxiCycle) -> int:
    """Degree of the projection of z to the source circle"""
    total = sum((s.signed_length() for s in z.segments if s.kind == HORIZONTAL), Fraction(0))
    if total.denominator != 1:
        raise ValidationError(f"Taxi cycle does not close up on the source circle (degree {total})")
    return int(total)


def box_boundary(r: Box) -> TaxiCycle:
    """The oriented boundary ∂r starting at the corner (x1, y1)"""
    return TaxiCycle((
        vertical(r.x1, r.y1, r.y2),
        horizontal(r.y2, r.x1, r.x2),
        vertical(r.x2, r.y2, r.y1),
        horizontal(r.y1, r.x2, r.x1),
    ))


def winding_loop(x, y, x2, y2) -> TaxiCycle:
    """The loop through (x,y), (x,y2), (x2,y2), (x2,y) for x < y < x2 < y2; winding number one"""
    if not (ccw(x, y, x2) and ccw(x, x2, y2)):
        raise ValidationError("Winding loop corners must satisfy x < y < x2 < y2 cyclically")
    return TaxiCycle((
        vertical(x, y, y2),
        horizontal(y2, x, x2),
        vertical(x2, y2, y),
        horizontal(y, x2, x),
    ))


def triple_cycle(x, y, z) -> TaxiCycle:
    """The six-segment cycle (x,y)->(x,z)->(y,z)->(y,x)->(z,x)->(z,y)->(x,y)"""
    if len({x, y, z}) < 3:
        raise ValidationError("Triple cycle needs three distinct points")
    return TaxiCycle((
        vertical(x, y, z),
        horizontal(z, x, y),
        vertical(y, z, x),
        horizontal(x, y, z),
        vertical(z, x, y),
        horizontal(y, z, x),
    ))


def reverse(z: TaxiCycle) -> TaxiCycle:
    return TaxiCycle(tuple(s.flip() for s in reversed(z.segments)))


def _rotated(segments: Sequence[Segment], corner) -> Tuple[Segment, ...]:
    for i, s in enumerate(segments):
        if s.tail == corner:
            return tuple(segments[i:]) + tuple(segments[:i])
    raise ValidationError(f"Corner {corner} is not on the cycle")


def concatenate(z1: TaxiCycle, z2: TaxiCycle) -> TaxiCycle:
    """Concatenate two cycles at their first shared corner"""
    corners2 = set(z2.corners())
    for corner in z1.corners():
        if corner in corners2:
            return TaxiCycle(_rotated(z1.segments, corner) + _rotated(z2.segments, corner))
    raise ValidationError("Cycles share no corner")
