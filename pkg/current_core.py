#!/usr/bin/env python3
"""
Current Core for currentlab
Finite weighted chord systems on the disk: box measures, crossing pairings, symmetry
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from cyclic_boundary import BoundaryPoint, Box, Chord, crossing_sign, rotate
from errors import EmptyCurrentError, GenericPositionError, ValidationError

logger = logging.getLogger(__name__)

WeightSource = Union[Mapping[Chord, object], Iterable[Tuple[Chord, object]]]


def _pairs(weights: WeightSource):
    if isinstance(weights, Mapping):
        return weights.items()
    return weights


class DiscreteCurrent:
    """A finite positive combination of delta masses on oriented chords.

    Duplicate chords are merged on construction; weights are exact and
    strictly positive. ``labels`` optionally names the endpoints for I/O and
    is not part of equality.
    """

    def __init__(self, weights: WeightSource = (), labels: Optional[Mapping[BoundaryPoint, str]] = None):
        merged: Dict[Chord, Fraction] = {}
        for c, w in _pairs(weights):
            if isinstance(w, float):
                raise ValidationError(f"Weight of {c} must be an exact rational, got float {w!r}")
            w = Fraction(w)
            if w <= 0:
                raise ValidationError(f"Weight of {c} must be positive, got {w}")
            merged[c] = merged.get(c, Fraction(0)) + w
        self._weights = dict(sorted(merged.items()))
        self.labels = dict(labels or {})

    def weight(self, c: Chord) -> Fraction:
        return self._weights.get(c, Fraction(0))

    @property
    def support(self) -> List[Chord]:
        return list(self._weights)

    def items(self):
        return self._weights.items()

    def __iter__(self) -> Iterator[Chord]:
        return iter(self._weights)

    def __len__(self):
        return len(self._weights)

    def __contains__(self, c):
        return c in self._weights

    def __eq__(self, other):
        if not isinstance(other, DiscreteCurrent):
            return NotImplemented
        return self._weights == other._weights

    def __hash__(self):
        return hash(tuple(self._weights.items()))

    def __repr__(self):
        body = ", ".join(f"{c}: {w}" for c, w in self._weights.items())
        return f"DiscreteCurrent({{{body}}})"

    def endpoints(self) -> List[BoundaryPoint]:
        return gap_boundaries(self)

    def label(self, p: BoundaryPoint) -> str:
        return self.labels.get(p, str(p))

    def chord_name(self, c: Chord) -> str:
        return f"{self.label(c.src)}->{self.label(c.dst)}"


class SignedChordMeasure:
    """Signed finite measure on chords; zero entries are dropped"""

    def __init__(self, weights: WeightSource = ()):
        merged: Dict[Chord, Fraction] = {}
        for c, w in _pairs(weights):
            merged[c] = merged.get(c, Fraction(0)) + Fraction(w)
        self._weights = {c: w for c, w in sorted(merged.items()) if w != 0}

    @classmethod
    def from_difference(cls, plus: Mapping[Chord, Fraction], minus: Mapping[Chord, Fraction]) -> "SignedChordMeasure":
        chords = set(plus) | set(minus)
        return cls((c, plus.get(c, 0) - minus.get(c, 0)) for c in chords)

    def items(self):
        return self._weights.items()

    def weight(self, c: Chord) -> Fraction:
        return self._weights.get(c, Fraction(0))

    def __len__(self):
        return len(self._weights)

    def total(self) -> Fraction:
        return sum(self._weights.values(), Fraction(0))

    def positive_mass(self) -> Fraction:
        return sum((w for w in self._weights.values() if w > 0), Fraction(0))

    def source_pushforward(self) -> Dict[BoundaryPoint, Fraction]:
        """Push the measure forward along (x, y) -> x, sorted by source angle"""
        pushed: Dict[BoundaryPoint, Fraction] = {}
        for c, w in self._weights.items():
            pushed[c.src] = pushed.get(c.src, Fraction(0)) + w
        return dict(sorted(pushed.items()))


def total_mass(mu: DiscreteCurrent) -> Fraction:
    return sum((w for _, w in mu.items()), Fraction(0))


def gap_boundaries(mu: DiscreteCurrent) -> List[BoundaryPoint]:
    """Sorted distinct chord endpoints"""
    points = set()
    for c in mu:
        points.add(c.src)
        points.add(c.dst)
    return sorted(points)


def sample_gaps(mu: DiscreteCurrent) -> List[BoundaryPoint]:
    """Midpoint of every open arc between consecutive endpoints, in cyclic order"""
    ends = gap_boundaries(mu)
    if not ends:
        raise EmptyCurrentError("Cannot sample gaps of the empty current")
    reps = []
    for i, e in enumerate(ends):
        nxt = ends[i + 1].angle if i + 1 < len(ends) else ends[0].angle + 1
        reps.append(BoundaryPoint((e.angle + nxt) / 2))
    return reps


def gap_index(mu: DiscreteCurrent, x: BoundaryPoint) -> int:
    """Index into sample_gaps of the gap containing x"""
    ends = gap_boundaries(mu)
    if x in ends:
        raise GenericPositionError(f"Point {x} is a chord endpoint", point=x)
    below = [i for i, e in enumerate(ends) if e < x]
    return below[-1] if below else len(ends) - 1


def check_generic(mu: DiscreteCurrent, points: Iterable[BoundaryPoint]) -> None:
    """Raise GenericPositionError naming a chord one of whose endpoints is among points"""
    points = set(points)
    for c in mu:
        if c.src in points or c.dst in points:
            raise GenericPositionError(
                f"Chord {mu.chord_name(c)} has an endpoint at an evaluation point", chord=c
            )


def box_measure(mu: DiscreteCurrent, r: Box) -> Fraction:
    """Total weight of chords with source in [x1, x2] and target in [y1, y2]"""
    check_generic(mu, r.corners())
    return sum((w for c, w in mu.items() if r.contains(c)), Fraction(0))


def crossing_pairing(mu1: DiscreteCurrent, mu2: DiscreteCurrent, signed: bool = False) -> Fraction:
    total = Fraction(0)
    for p, wp in mu1.items():
        for q, wq in mu2.items():
            s = crossing_sign(p, q)
            if s:
                total += wp * wq * (s if signed else 1)
    return total


def is_symmetric(mu: DiscreteCurrent) -> bool:
    return all(mu.weight(c.reversed) == w for c, w in mu.items())


def is_lamination(mu: DiscreteCurrent) -> bool:
    """Symmetric and without self-crossings"""
    return is_symmetric(mu) and crossing_pairing(mu, mu) == 0


def reverse_current(mu: DiscreteCurrent) -> DiscreteCurrent:
    return DiscreteCurrent(((c.reversed, w) for c, w in mu.items()), labels=mu.labels)


def rotate_current(mu: DiscreteCurrent, r) -> DiscreteCurrent:
    return DiscreteCurrent(
        ((Chord(rotate(c.src, r), rotate(c.dst, r)), w) for c, w in mu.items()),
        labels={rotate(p, r): name for p, name in mu.labels.items()},
    )
