#!/usr/bin/env python3
"""
Dual Space for currentlab
The holonomy-zero complex of a current as faces C(L, F, U), its metric, relative metric and tree specialization
"""

import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

import config
from current_core import (
    DiscreteCurrent,
    SignedChordMeasure,
    gap_boundaries,
    is_lamination,
    is_symmetric,
    sample_gaps,
    total_mass,
)
from cyclic_boundary import BoundaryPoint, Chord
from errors import ComplexityBudgetError, ContractError, NotLaminationError, ValidationError
from holonomy import HolonomyContext, LowerSubmeasure, linear_extension, strictly_below, submeasure_potential

logger = logging.getLogger(__name__)

ChordSet = FrozenSet[Chord]


def _mass(mu: DiscreteCurrent, chords: Iterable[Chord]) -> Fraction:
    return sum((mu.weight(c) for c in chords), Fraction(0))


@dataclass(frozen=True)
class Face:
    """Cell C(L, F, U): full on L, free on F, empty on U"""

    L: ChordSet
    F: ChordSet
    U: ChordSet

    def __post_init__(self):
        for name in ("L", "F", "U"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.L & self.F or self.L & self.U or self.F & self.U:
            raise ValidationError("Face parts must be disjoint")

    @property
    def dimension(self) -> int:
        return max(len(self.F) - 1, 0)

    def sort_key(self):
        return (self.dimension, sorted(self.L), sorted(self.F))

    def point(self, mu: DiscreteCurrent, T, values: Optional[Mapping[Chord, object]] = None) -> LowerSubmeasure:
        """A point of the face at level T; by default the one proportional to the weights on F"""
        free = Fraction(T) - _mass(mu, self.L)
        if values is None:
            total_free = _mass(mu, self.F)
            values = {c: mu.weight(c) * free / total_free for c in self.F} if self.F else {}
        values = {c: Fraction(v) for c, v in values.items()}
        if set(values) != set(self.F):
            raise ContractError("Face point must assign a value to exactly the free chords")
        if sum(values.values(), Fraction(0)) != free:
            raise ContractError(f"Free values sum to {sum(values.values())}, expected {free}")
        full = {c: mu.weight(c) for c in self.L}
        full.update(values)
        return LowerSubmeasure(mu, full)

    def describe(self, mu: DiscreteCurrent) -> Dict[str, List[str]]:
        return {part: sorted(mu.chord_name(c) for c in getattr(self, part)) for part in ("L", "F", "U")}


def is_valid_face(mu: DiscreteCurrent, face: Face) -> bool:
    """Everything strictly below a chord of L or F lies in L"""
    below = strictly_below(mu)
    return all(q in face.L for p in face.L | face.F for q in below[p])


def canonicalize(mu: DiscreteCurrent, T, L: Iterable[Chord], F: Iterable[Chord], U: Iterable[Chord]) -> Optional[Face]:
    """Collapse a partition whose level set sits on a boundary; None when it misses level T"""
    L, F, U = frozenset(L), frozenset(F), frozenset(U)
    low = _mass(mu, L)
    high = low + _mass(mu, F)
    if not low <= T <= high:
        return None
    if low == T:
        return Face(L, frozenset(), F | U)
    if high == T:
        return Face(L | F, frozenset(), U)
    return Face(L, F, U)


def subfaces(mu: DiscreteCurrent, T, face: Face) -> List[Face]:
    """Faces reached by pushing one free chord to full or to empty"""
    found: Set[Face] = set()
    for c in face.F:
        rest = face.F - {c}
        for candidate in (
            canonicalize(mu, T, face.L | {c}, rest, face.U),
            canonicalize(mu, T, face.L, rest, face.U | {c}),
        ):
            if candidate is not None and candidate != face:
                found.add(candidate)
    return sorted(found, key=Face.sort_key)


@dataclass
class DualComplex:
    mu: DiscreteCurrent
    T: Fraction
    faces: List[Face]
    adjacency: Dict[Face, List[Face]] = field(default_factory=dict)

    @property
    def dims(self) -> Dict[Face, int]:
        return {f: f.dimension for f in self.faces}

    @property
    def dimension(self) -> int:
        return max((f.dimension for f in self.faces), default=-1)

    @property
    def maximal(self) -> List[Face]:
        covered = {g for subs in self.adjacency.values() for g in subs}
        return [f for f in self.faces if f not in covered]

    def __len__(self):
        return len(self.faces)


def _down_sets(mu: DiscreteCurrent, T: Fraction) -> List[Tuple[ChordSet, ChordSet]]:
    """Down-sets D whose forced part can still reach level T, paired with their maximal elements"""
    order = linear_extension(mu)
    below = strictly_below(mu)
    suffix = [Fraction(0)] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + mu.weight(order[i])
    found = []

    def walk(i: int, chosen: FrozenSet[Chord], forced: FrozenSet[Chord], mass: Fraction):
        if _mass(mu, forced) > T or mass + suffix[i] < T:
            return
        if i == len(order):
            found.append((chosen, chosen - forced))
            return
        c = order[i]
        walk(i + 1, chosen, forced, mass)
        if all(q in chosen for q in below[c]):
            walk(i + 1, chosen | {c}, forced | set(below[c]), mass + mu.weight(c))

    walk(0, frozenset(), frozenset(), Fraction(0))
    return found


def _faces_of(mu: DiscreteCurrent, T: Fraction, support: ChordSet, down: ChordSet, tops: ChordSet) -> List[Face]:
    faces = []
    tops_sorted = sorted(tops)
    for size in range(len(tops_sorted) + 1):
        for free in itertools.combinations(tops_sorted, size):
            F = frozenset(free)
            L = down - F
            low = _mass(mu, L)
            if F and low < T < low + _mass(mu, F):
                faces.append(Face(L, F, support - down))
            elif not F and low == T:
                faces.append(Face(L, F, support - down))
    return faces


def enumerate_complex(ctx: HolonomyContext, budget: Optional[int] = None, workers: Optional[int] = None) -> DualComplex:
    """All canonical faces of the level-T slice with their subface relation"""
    mu, T = ctx.mu, ctx.T
    budget = config.enumeration_budget() if budget is None else budget
    if len(mu) > budget:
        raise ComplexityBudgetError(
            f"Support has {len(mu)} chords, enumeration budget is {budget}", support=len(mu), budget=budget
        )
    support = frozenset(mu.support)
    downs = _down_sets(mu, T)
    workers = workers or config.WORKERS
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(lambda d: _faces_of(mu, T, support, *d), downs))
    else:
        batches = [_faces_of(mu, T, support, *d) for d in downs]
    faces = sorted({f for batch in batches for f in batch}, key=Face.sort_key)
    adjacency = {f: subfaces(mu, T, f) for f in faces}
    complex_ = DualComplex(mu, T, faces, adjacency)
    logger.info(f"Enumerated {len(faces)} faces from {len(downs)} down-sets, dimension {complex_.dimension}")
    return complex_


def brute_force_faces(ctx: HolonomyContext) -> Set[Face]:
    """Every canonical face found by trying all three-way partitions of the support"""
    mu, T = ctx.mu, ctx.T
    support = mu.support
    found = set()
    for labels in itertools.product("LFU", repeat=len(support)):
        parts = {k: frozenset(c for c, lab in zip(support, labels) if lab == k) for k in "LFU"}
        face = Face(parts["L"], parts["F"], parts["U"])
        if not is_valid_face(mu, face):
            continue
        low = _mass(mu, face.L)
        if face.F and low < T < low + _mass(mu, face.F):
            found.add(face)
        elif not face.F and low == T:
            found.add(face)
    return found


def vertices(complex_: DualComplex) -> Dict[Face, LowerSubmeasure]:
    return {f: f.point(complex_.mu, complex_.T) for f in complex_.faces if f.dimension == 0}


def _face_vertices(complex_: DualComplex, face: Face) -> Set[Face]:
    if face.dimension == 0:
        return {face}
    result: Set[Face] = set()
    for sub in complex_.adjacency.get(face) or subfaces(complex_.mu, complex_.T, face):
        result |= _face_vertices(complex_, sub)
    return result


def skeleton(complex_: DualComplex) -> nx.Graph:
    """Vertices and edges of the complex, edges weighted by metric_d"""
    points = vertices(complex_)
    graph = nx.Graph()
    for f, nu in points.items():
        graph.add_node(f, point=nu)
    for f in complex_.faces:
        if f.dimension != 1:
            continue
        ends = sorted(_face_vertices(complex_, f), key=Face.sort_key)
        if len(ends) != 2:
            raise ContractError(f"Edge face has {len(ends)} vertices")
        a, b = ends
        graph.add_edge(a, b, weight=metric_d(points[a], points[b]), face=f)
    return graph


def is_tree(complex_: DualComplex) -> bool:
    if complex_.dimension > 1 or not complex_.faces:
        return False
    return nx.is_tree(skeleton(complex_))


def _check_same_level(nu1: LowerSubmeasure, nu2: LowerSubmeasure, ctx: Optional[HolonomyContext]) -> None:
    if nu1.parent != nu2.parent:
        raise ContractError("Points belong to different currents")
    if nu1.mass() != nu2.mass():
        raise ContractError(f"Points have different masses {nu1.mass()} and {nu2.mass()}")
    if ctx is not None and (ctx.mu != nu1.parent or nu1.mass() != ctx.T):
        raise ContractError(f"Points are not holonomy zero at level {ctx.T}")


def metric_d(nu1: LowerSubmeasure, nu2: LowerSubmeasure, ctx: Optional[HolonomyContext] = None) -> Fraction:
    """Oscillation of the partial sums of (nu2 - nu1) pushed to the source circle"""
    _check_same_level(nu1, nu2, ctx)
    diff = SignedChordMeasure.from_difference(nu2.values, nu1.values)
    running, sums = Fraction(0), [Fraction(0)]
    for _, w in diff.source_pushforward().items():
        running += w
        sums.append(running)
    return max(sums) - min(sums)


def displacement(nu: LowerSubmeasure, nu_shifted: LowerSubmeasure) -> Fraction:
    """How far a point moves under a shift of the current, measured in the dual metric"""
    return metric_d(nu, nu_shifted)


def _check_lamination_points(*points: LowerSubmeasure) -> None:
    mu = points[0].parent
    if not is_lamination(mu):
        raise NotLaminationError("Parent current is not a measured lamination")
    for nu in points:
        if nu.parent != mu:
            raise ContractError("Points belong to different currents")
        if not nu.is_symmetric():
            raise NotLaminationError(f"Point {nu!r} is not symmetric")


def rank2_distance(nu1: LowerSubmeasure, nu2: LowerSubmeasure) -> Fraction:
    _check_lamination_points(nu1, nu2)
    return SignedChordMeasure.from_difference(nu2.values, nu1.values).positive_mass()


def median(nu1: LowerSubmeasure, nu2: LowerSubmeasure, nu3: LowerSubmeasure) -> LowerSubmeasure:
    """Chordwise median of three symmetric points of a lamination"""
    _check_lamination_points(nu1, nu2, nu3)
    mu = nu1.parent
    values = {c: sorted((nu1.value(c), nu2.value(c), nu3.value(c)))[1] for c in mu}
    return LowerSubmeasure(mu, values)


def four_point_defect(points: Sequence[LowerSubmeasure],
                      dist: Callable[[LowerSubmeasure, LowerSubmeasure], Fraction] = metric_d) -> Fraction:
    """Largest gap between the two largest pairwise-sum combinations over all quadruples"""
    worst = Fraction(0)
    for a, b, c, d in itertools.combinations(points, 4):
        sums = sorted([dist(a, b) + dist(c, d), dist(a, c) + dist(b, d), dist(a, d) + dist(b, c)])
        worst = max(worst, sums[2] - sums[1])
    return worst


@dataclass(frozen=True)
class SymmetricFace:
    """Face of the symmetric dual with its constraint nu(c) + nu(c reversed) = w(c) on each free pair"""

    face: Face
    pairs: Tuple[Tuple[Chord, Chord], ...]

    @property
    def dimension(self) -> int:
        return len(self.pairs)

    def constraint(self, mu: DiscreteCurrent) -> Dict[Tuple[Chord, Chord], Fraction]:
        return {pair: mu.weight(pair[0]) for pair in self.pairs}

    def point(self, mu: DiscreteCurrent, values: Mapping[Chord, object]) -> LowerSubmeasure:
        """Symmetric point from values on the first chord of every pair"""
        full: Dict[Chord, Fraction] = {}
        for c, r in self.pairs:
            v = Fraction(values[c])
            if not 0 <= v <= mu.weight(c):
                raise ContractError(f"Value {v} for {mu.chord_name(c)} is outside [0, {mu.weight(c)}]")
            full[c], full[r] = v, mu.weight(c) - v
        return self.face.point(mu, total_mass(mu) / 2, full)


def symmetric_members(complex_: DualComplex) -> List[SymmetricFace]:
    """Faces whose relative interior meets the symmetric points nu(b,a) = w(a,b) - nu(a,b)"""
    mu = complex_.mu
    if not is_symmetric(mu):
        raise ContractError("Symmetric dual needs a symmetric current")
    if complex_.T != total_mass(mu) / 2:
        raise ContractError(f"Symmetric dual needs T = {total_mass(mu) / 2}, got {complex_.T}")
    members = []
    for f in complex_.faces:
        if {c.reversed for c in f.L} != f.U or {c.reversed for c in f.F} != f.F:
            continue
        pairs = tuple(sorted((c, c.reversed) for c in f.F if c < c.reversed))
        members.append(SymmetricFace(f, pairs))
    logger.info(f"{len(members)} of {len(complex_.faces)} faces carry symmetric points")
    return members


def symmetric_cube_dimension(face: Face) -> int:
    return len(face.F) // 2


def shared_point_bound_check(complex_: DualComplex, n: int) -> bool:
    return all(len(f.F) <= n for f in complex_.faces)


def estimate_dimension(ctx: HolonomyContext, samples: int = 200, seed: int = 0) -> int:
    """Lower bound on the dimension from random down-sets grown along random linear extensions"""
    mu, T = ctx.mu, ctx.T
    rng = random.Random(seed)
    below = strictly_below(mu)
    best = 0
    for _ in range(samples):
        ranks = {c: rng.random() for c in mu}
        order = linear_extension(mu, key=lambda c: (ranks[c], c))
        down: Set[Chord] = set()
        for c in order:
            grown = down | {c}
            forced = {q for p in grown for q in below[p]}
            if _mass(mu, forced) >= T:
                break
            down = grown
        forced = {q for p in down for q in below[p]}
        tops = down - forced
        low = _mass(mu, forced)
        if tops and low < T < low + _mass(mu, tops):
            best = max(best, len(tops) - 1)
    logger.info(f"Estimated dimension at least {best} from {samples} samples")
    return best


@dataclass(frozen=True)
class LPoint:
    """A holonomy-zero point with the additive constant of its trivialization"""

    nu: LowerSubmeasure
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        if isinstance(self.offset, float):
            raise ValidationError(f"Offset must be exact, got float {self.offset!r}")
        object.__setattr__(self, "offset", Fraction(self.offset))


def _anchor_gap(mu: DiscreteCurrent) -> int:
    ends = gap_boundaries(mu)
    zero = BoundaryPoint(Fraction(0))
    if zero in ends:
        return ends.index(zero)
    below = [i for i, e in enumerate(ends) if e < zero]
    return below[-1] if below else len(ends) - 1


def relative_distance(a: LPoint, b: LPoint, ctx: Optional[HolonomyContext] = None) -> Fraction:
    """sup of the section difference f_{a,b}, walking the source gaps from the one at angle 0"""
    _check_same_level(a.nu, b.nu, ctx)
    mu = a.nu.parent
    value = b.offset - a.offset
    if len(mu) == 0:
        return value
    ends = gap_boundaries(mu)
    gaps = sample_gaps(mu)
    start = _anchor_gap(mu)
    k = len(gaps)
    values = [value]
    for step in range(k):
        i = (start + step) % k
        x, x_next = gaps[i], gaps[(i + 1) % k]
        y = BoundaryPoint(ends[i].angle + ((x.angle - ends[i].angle) % 1) / 2)
        value += (
            submeasure_potential(b.nu, x, y) - submeasure_potential(b.nu, x_next, y)
            - submeasure_potential(a.nu, x, y) + submeasure_potential(a.nu, x_next, y)
        )
        values.append(value)
    if values[-1] != values[0]:
        raise ContractError(f"Section difference does not close up (drift {values[-1] - values[0]})")
    return max(values)
