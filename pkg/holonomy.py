#!/usr/bin/env python3
"""
Holonomy for currentlab
Lower submeasures, potentials, cross ratios and holonomy of taxi cycles on the disk
"""

import heapq
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from current_core import DiscreteCurrent, check_generic, sample_gaps, total_mass
from cyclic_boundary import (
    HORIZONTAL,
    BoundaryPoint,
    Chord,
    TaxiCycle,
    arc_contains,
    chord_lt,
    triple_cycle,
)
from errors import ContractError, DiagonalError, MassRangeError, NotLowerSubmeasureError

logger = logging.getLogger(__name__)

NEG_INF = float("-inf")


@lru_cache(maxsize=512)
def strictly_below(mu: DiscreteCurrent) -> Dict[Chord, Tuple[Chord, ...]]:
    """For every support chord, the support chords strictly nested inside it"""
    support = mu.support
    return {p: tuple(q for q in support if chord_lt(q, p)) for p in support}


def linear_extension(mu: DiscreteCurrent, key: Optional[Callable[[Chord], object]] = None) -> List[Chord]:
    """Topological order of the support, minimal chords first, ties broken by key"""
    key = key or (lambda c: c)
    below = strictly_below(mu)
    above: Dict[Chord, List[Chord]] = {c: [] for c in below}
    pending = {c: len(qs) for c, qs in below.items()}
    for p, qs in below.items():
        for q in qs:
            above[q].append(p)
    heap = [(key(c), c) for c, count in pending.items() if count == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, c = heapq.heappop(heap)
        order.append(c)
        for p in above[c]:
            pending[p] -= 1
            if pending[p] == 0:
                heapq.heappush(heap, (key(p), p))
    return order


class LowerSubmeasure:
    """A sub-assignment 0 <= nu <= mu that fills everything strictly below its support"""

    def __init__(self, parent: DiscreteCurrent, values: Mapping[Chord, object]):
        extra = [c for c in values if c not in parent]
        if extra:
            raise NotLowerSubmeasureError(f"Chord {extra[0]} is not in the support of the parent current")
        self.parent = parent
        self.values: Dict[Chord, Fraction] = {c: Fraction(values.get(c, 0)) for c in parent}
        check_lower_submeasure(self)

    def value(self, c: Chord) -> Fraction:
        return self.values.get(c, Fraction(0))

    def complement(self, c: Chord) -> Fraction:
        return self.parent.weight(c) - self.value(c)

    def mass(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def is_symmetric(self) -> bool:
        return all(self.value(c.reversed) == self.complement(c) for c in self.parent)

    def _key(self):
        return tuple(self.values.items())

    def __eq__(self, other):
        if not isinstance(other, LowerSubmeasure):
            return NotImplemented
        return self.parent == other.parent and self.values == other.values

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        body = ", ".join(f"{c}: {v}" for c, v in self.values.items())
        return f"LowerSubmeasure({{{body}}})"


def check_lower_submeasure(nu: LowerSubmeasure) -> None:
    mu = nu.parent
    for c, v in nu.values.items():
        if v < 0 or v > mu.weight(c):
            raise NotLowerSubmeasureError(f"Value {v} on {mu.chord_name(c)} is outside [0, {mu.weight(c)}]")
    for p, qs in strictly_below(mu).items():
        if nu.value(p) > 0:
            for q in qs:
                if nu.value(q) != mu.weight(q):
                    raise NotLowerSubmeasureError(
                        f"{mu.chord_name(p)} carries mass but {mu.chord_name(q)} below it is not full"
                    )


def _as_mass(T) -> Fraction:
    if isinstance(T, float):
        raise MassRangeError(f"Mass level must be an exact rational, got float {T!r}")
    return Fraction(T)


def _fill(mu: DiscreteCurrent, T, order: List[Chord]) -> LowerSubmeasure:
    T = _as_mass(T)
    total = total_mass(mu)
    if not 0 <= T <= total:
        raise MassRangeError(f"Mass level {T} is outside [0, {total}]", T=T, total=total)
    remaining = T
    values = {}
    for c in order:
        take = min(mu.weight(c), remaining)
        values[c] = take
        remaining -= take
    return LowerSubmeasure(mu, values)


def base_submeasure(mu: DiscreteCurrent, T) -> LowerSubmeasure:
    """Greedy fill of mass T along the deterministic linear extension"""
    return _fill(mu, T, linear_extension(mu))


def random_base_submeasure(mu: DiscreteCurrent, T, rng: random.Random) -> LowerSubmeasure:
    """Greedy fill along a random linear extension"""
    ranks = {c: rng.random() for c in mu}
    return _fill(mu, T, linear_extension(mu, key=lambda c: (ranks[c], c)))


@dataclass(frozen=True)
class HolonomyContext:
    """A current with a mass level T; ``base`` is any lower submeasure of mass T"""

    mu: DiscreteCurrent
    T: Fraction
    base: LowerSubmeasure

    def __post_init__(self):
        if self.base.parent != self.mu:
            raise ContractError("Base submeasure belongs to a different current")
        if self.base.mass() != self.T:
            raise ContractError(f"Base submeasure has mass {self.base.mass()}, expected {self.T}")

    def potential(self, x: BoundaryPoint, y: BoundaryPoint) -> Fraction:
        return submeasure_potential(self.base, x, y)


def holonomy_context(mu: DiscreteCurrent, T=None, base: Optional[LowerSubmeasure] = None) -> HolonomyContext:
    """Build a context; T defaults to |mu|/2, and the base to the greedy fill"""
    T = total_mass(mu) / 2 if T is None else _as_mass(T)
    if base is None:
        base = base_submeasure(mu, T)
    return HolonomyContext(mu, T, base)


def submeasure_potential(nu: LowerSubmeasure, x: BoundaryPoint, y: BoundaryPoint) -> Fraction:
    """m(x,y) = -nu(chords above (x,y)) - (mu - nu)(chords below (x,y))"""
    if x == y:
        raise DiagonalError(f"Potential is undefined on the diagonal ({x}, {y})")
    mu = nu.parent
    check_generic(mu, (x, y))
    m = Fraction(0)
    for c in mu:
        if arc_contains((c.src, c.dst), (x, y)):
            m -= nu.value(c)
        elif arc_contains((x, y), (c.src, c.dst)):
            m -= nu.complement(c)
    return m


def potential(ctx: HolonomyContext, x: BoundaryPoint, y: BoundaryPoint) -> Fraction:
    return ctx.potential(x, y)


def cross_ratio(ctx: HolonomyContext, x1, x2, y1, y2) -> Fraction:
    """Additive cross ratio m(x1,y1) + m(x2,y2) - m(x1,y2) - m(x2,y1)"""
    if x1 == x2 or y1 == y2:
        return Fraction(0)
    m = ctx.potential
    return m(x1, y1) + m(x2, y2) - m(x1, y2) - m(x2, y1)


def cycle_holonomy(ctx: HolonomyContext, z: TaxiCycle) -> Fraction:
    """Sum over horizontal segments of m(head) - m(tail)"""
    total = Fraction(0)
    for s in z.segments:
        if s.kind != HORIZONTAL or s.is_degenerate:
            continue
        total += ctx.potential(*s.head) - ctx.potential(*s.tail)
    return total


def triple_ratio(ctx: HolonomyContext, x, y, z) -> Fraction:
    return cycle_holonomy(ctx, triple_cycle(x, y, z))


def submeasure_holonomy(ctx: HolonomyContext, nu: LowerSubmeasure) -> Fraction:
    """h(nu) = mass(nu) - T"""
    if nu.parent != ctx.mu:
        raise ContractError("Submeasure belongs to a different current")
    check_lower_submeasure(nu)
    return nu.mass() - ctx.T


def loop_mass(mu: DiscreteCurrent, x, y, x2, y2) -> Fraction:
    """Mass on or below the winding-one loop through (x,y), (x,y2), (x2,y2), (x2,y)"""
    return sum(
        (w for c, w in mu.items()
         if arc_contains((x, y2), (c.src, c.dst)) or arc_contains((x2, y), (c.src, c.dst))),
        Fraction(0),
    )


def potential_matrix(ctx: HolonomyContext) -> Tuple[List[BoundaryPoint], List[List[object]]]:
    """m on all pairs of gap representatives, -inf on the diagonal cells"""
    if len(ctx.mu) == 0:
        return [], []
    gaps = sample_gaps(ctx.mu)
    matrix = [
        [NEG_INF if i == j else ctx.potential(x, y) for j, y in enumerate(gaps)]
        for i, x in enumerate(gaps)
    ]
    logger.info(f"Potential matrix over {len(gaps)} gaps at T={ctx.T}")
    return gaps, matrix
