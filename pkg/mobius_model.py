#!/usr/bin/env python3
"""
Mobius Model for currentlab
Floating-point SL(2,R) and Veronese checks of the period and cross-ratio identities
"""

import itertools
import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import config
from current_core import DiscreteCurrent
from cyclic_boundary import BoundaryPoint, Chord
from errors import (
    ContractError,
    DegenerateConfigurationError,
    DiagonalError,
    NotHyperbolicError,
    RoundingCollisionError,
    ValidationError,
)

logger = logging.getLogger(__name__)

INF = math.inf
CONFIGURATIONS = ("crossing", "nested", "separate")

# angle order of (a-, a+, b-, b+) around the circle for each relative position of the axes
_LAYOUT = {
    "crossing": (0, 2, 1, 3),
    "nested": (0, 3, 1, 2),
    "separate": (0, 1, 2, 3),
}


class MobiusMap:
    """A real 2x2 matrix scaled to determinant 1, acting on R plus infinity"""

    def __init__(self, matrix):
        m = np.array(matrix, dtype=float)
        if m.shape != (2, 2):
            raise ValidationError(f"Mobius map needs a 2x2 matrix, got shape {m.shape}")
        det = np.linalg.det(m)
        if det <= 0:
            raise ValidationError(f"Matrix determinant must be positive, got {det}")
        self.m = m / math.sqrt(det)

    def apply(self, x: float) -> float:
        (a, b), (c, d) = self.m
        if x == INF:
            return a / c if c != 0 else INF
        den = c * x + d
        if den == 0:
            return INF
        return (a * x + b) / den

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other"""
        return MobiusMap(self.m @ other.m)

    def inverse(self) -> "MobiusMap":
        (a, b), (c, d) = self.m
        return MobiusMap([[d, -b], [-c, a]])

    def trace(self) -> float:
        return float(np.trace(self.m))

    def conjugate(self, h: "MobiusMap") -> "MobiusMap":
        """h self h^-1"""
        return h.compose(self).compose(h.inverse())

    def is_hyperbolic(self) -> bool:
        return abs(self.trace()) > 2 + config.ROOT_ATOL

    def __matmul__(self, other):
        return self.compose(other)

    def __repr__(self):
        return f"MobiusMap({self.m.tolist()})"


def angle_to_real(theta: float) -> float:
    """Circle angle in radians to the real line via x = tan(theta/2)"""
    theta = math.remainder(theta, 2 * math.pi)
    if abs(abs(theta) - math.pi) < 1e-15:
        return INF
    return math.tan(theta / 2)


def real_to_angle(x: float) -> float:
    if x == INF:
        return math.pi
    return 2 * math.atan(x)


def hyperbolic(attracting: float, repelling: float, scale: float) -> MobiusMap:
    """g = C diag(scale, 1/scale) C^-1 with C = [[attracting, repelling], [1, 1]]"""
    if scale <= 1:
        raise ValidationError(f"Translation scale must exceed 1, got {scale}")
    C = np.array([[attracting, repelling], [1.0, 1.0]])
    return MobiusMap(C @ np.diag([scale, 1 / scale]) @ np.linalg.inv(C))


def _require_hyperbolic(g: MobiusMap) -> None:
    if not g.is_hyperbolic():
        raise NotHyperbolicError(f"Map with trace {g.trace():.6g} is not hyperbolic", trace=g.trace())


def _projective(v) -> float:
    if abs(v[1]) <= config.ROOT_ATOL * abs(v[0]):
        return INF
    return float(v[0] / v[1])


def fixed_points(g: MobiusMap) -> Tuple[float, float]:
    """(attracting, repelling) fixed points on R plus infinity"""
    _require_hyperbolic(g)
    values, vectors = np.linalg.eig(g.m)
    values, vectors = np.real(values), np.real(vectors)
    big = int(np.argmax(np.abs(values)))
    return _projective(vectors[:, big]), _projective(vectors[:, 1 - big])


def period(g: MobiusMap) -> float:
    _require_hyperbolic(g)
    return math.acosh(abs(g.trace()) / 2)


def log_cross_ratio(x1: float, x2: float, y1: float, y2: float) -> float:
    """log |(x1-y1)(x2-y2) / ((x1-y2)(x2-y1))| with factors through infinity cancelled"""
    for x in (x1, x2):
        for y in (y1, y2):
            if x == y:
                raise DiagonalError(f"Cross ratio has a diagonal pair ({x}, {y})")
    if x1 == x2 or y1 == y2:
        return 0.0
    num = [(x1, y1), (x2, y2)]
    den = [(x1, y2), (x2, y1)]
    # each point occurs once upstairs and once downstairs
    num = [x - y for x, y in num if INF not in (x, y)]
    den = [x - y for x, y in den if INF not in (x, y)]
    return math.log(abs(math.prod(num))) - math.log(abs(math.prod(den)))


def random_hyperbolic(rng: random.Random) -> MobiusMap:
    a, b = sorted(rng.uniform(-math.pi * 0.95, math.pi * 0.95) for _ in range(2))
    if rng.random() < 0.5:
        a, b = b, a
    return hyperbolic(angle_to_real(a), angle_to_real(b), rng.uniform(1.5, 6.0))


def _arc_distance(a: float, b: float) -> float:
    return abs(math.remainder(a - b, 2 * math.pi))


@dataclass(frozen=True)
class Interval:
    """Closed arc of the circle given by center angle and radius"""

    center: float
    radius: float

    def contains(self, x: float) -> bool:
        return _arc_distance(real_to_angle(x), self.center) <= self.radius

    def endpoints(self) -> Tuple[float, float]:
        return angle_to_real(self.center - self.radius), angle_to_real(self.center + self.radius)


@dataclass
class SchottkyPair:
    a: MobiusMap
    b: MobiusMap
    configuration: str
    certificate: Dict[str, Interval]

    def __post_init__(self):
        _require_hyperbolic(self.a)
        _require_hyperbolic(self.b)
        if self.configuration not in CONFIGURATIONS:
            raise ValidationError(f"Unknown configuration {self.configuration!r}")

    def generators(self) -> Dict[str, MobiusMap]:
        return {"a": self.a, "A": self.a.inverse(), "b": self.b, "B": self.b.inverse()}


def _ping_pong(g: MobiusMap, source: Interval, target: Interval) -> bool:
    """g maps the complement of source into target"""
    return all(target.contains(g.apply(x)) for x in source.endpoints())


def random_schottky_pair(rng: random.Random, configuration: str = "crossing",
                         conjugator: Optional[MobiusMap] = None) -> SchottkyPair:
    """Two hyperbolic maps in the requested relative position, scaled until ping-pong holds"""
    if configuration not in CONFIGURATIONS:
        raise ValidationError(f"Unknown configuration {configuration!r}")
    while True:
        angles = sorted(rng.uniform(-math.pi * 0.9, math.pi * 0.9) for _ in range(4))
        gaps = [_arc_distance(p, q) for p, q in itertools.combinations(angles, 2)]
        if min(gaps) > 0.2:
            break
    a_minus, a_plus, b_minus, b_plus = (angles[i] for i in _LAYOUT[configuration])
    radius = min(gaps) / 3
    intervals = {name: Interval(theta, radius) for name, theta in
                 (("a-", a_minus), ("a+", a_plus), ("b-", b_minus), ("b+", b_plus))}
    scale = 2.0
    for _ in range(config.MAX_DOUBLINGS):
        a = hyperbolic(angle_to_real(a_plus), angle_to_real(a_minus), scale)
        b = hyperbolic(angle_to_real(b_plus), angle_to_real(b_minus), scale)
        if (_ping_pong(a, intervals["a-"], intervals["a+"]) and _ping_pong(a.inverse(), intervals["a+"], intervals["a-"])
                and _ping_pong(b, intervals["b-"], intervals["b+"])
                and _ping_pong(b.inverse(), intervals["b+"], intervals["b-"])):
            break
        scale *= 2
    else:
        raise DegenerateConfigurationError("Ping-pong scaling did not converge")
    if conjugator is not None:
        a, b = a.conjugate(conjugator), b.conjugate(conjugator)
    logger.info(f"Schottky pair ({configuration}) with translation scale {scale}")
    return SchottkyPair(a, b, configuration, intervals)


def verify_abc(pair: SchottkyPair) -> Tuple[float, float]:
    """l(a) + l(b) - l(ba) against the cross ratio of ((ba)-, b-; a+, b a+)"""
    a, b = pair.a, pair.b
    ba = b.compose(a)
    lhs = period(a) + period(b) - period(ba)
    a_plus, _ = fixed_points(a)
    _, b_minus = fixed_points(b)
    _, ba_minus = fixed_points(ba)
    rhs = log_cross_ratio(ba_minus, b_minus, a_plus, b.apply(a_plus))
    return lhs, rhs


def hilbert_length_check(g: MobiusMap, x: float) -> Tuple[float, float]:
    """l(g) + l(g^-1) against the cross ratio of (x, gx; g+, g-)"""
    plus, minus = fixed_points(g)
    lhs = period(g) + period(g.inverse())
    rhs = log_cross_ratio(x, g.apply(x), plus, minus)
    return lhs, rhs


def veronese_rank_check(n: int, xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float]:
    """Largest (n+1)-minor and smallest n-minor of (x - y)^(n-1), each relative to its Hadamard bound"""
    if not 2 <= n <= config.MAX_VERONESE_N:
        raise ValidationError(f"Veronese rank must be in [2, {config.MAX_VERONESE_N}], got {n}")
    if len(xs) != n + 1 or len(ys) != n + 1:
        raise ValidationError(f"Need {n + 1} points on each side")
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise ContractError("Repeated coordinates in Veronese tuples")
    M = (np.subtract.outer(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))) ** (n - 1)

    def relative(block: np.ndarray) -> float:
        bound = float(np.prod(np.linalg.norm(block, axis=1)))
        if bound == 0:
            return 0.0
        return abs(float(np.linalg.det(block))) / bound

    top = relative(M)
    lowest = min(
        relative(M[np.ix_(rows, cols)])
        for rows in itertools.combinations(range(n + 1), n)
        for cols in itertools.combinations(range(n + 1), n)
    )
    return top, lowest


def _reduced_words(length: int) -> List[str]:
    inverse = {"a": "A", "A": "a", "b": "B", "B": "b"}
    words = [""]
    for _ in range(length):
        words = [w + s for w in words for s in "aAbB" if not w or inverse[w[-1]] != s]
    return [w for w in words if inverse[w[0]] != w[-1]]


def _is_power(word: str) -> bool:
    n = len(word)
    return any(n % k == 0 and word[:k] * (n // k) == word for k in range(1, n))


def cyclic_words(word_length: int) -> List[str]:
    """Cyclically reduced primitive-looking words of length 1..word_length"""
    if not 0 <= word_length <= config.MAX_WORD_LENGTH:
        raise ValidationError(f"Word length must be in [0, {config.MAX_WORD_LENGTH}], got {word_length}")
    return [w for n in range(1, word_length + 1) for w in _reduced_words(n) if not _is_power(w)]


def word_map(pair: SchottkyPair, word: str) -> MobiusMap:
    gens = pair.generators()
    g = MobiusMap(np.eye(2))
    for letter in word:
        g = g.compose(gens[letter])
    return g


def word_periods(pair: SchottkyPair, word_length: int) -> Dict[str, float]:
    return {w: period(word_map(pair, w)) for w in cyclic_words(word_length)}


def _to_boundary(x: float) -> Tuple[BoundaryPoint, float]:
    turn = (real_to_angle(x) / (2 * math.pi)) % 1.0
    return BoundaryPoint(Fraction(round(turn * config.ROUNDING_DENOMINATOR) % config.ROUNDING_DENOMINATOR,
                                  config.ROUNDING_DENOMINATOR)), turn


def export_delta_current(pair: SchottkyPair, word_length: int) -> DiscreteCurrent:
    """Unit-weight axes (g-, g+) of the cyclically reduced words, rounded onto the rational circle"""
    seen: Dict[BoundaryPoint, float] = {}
    chords: List[Tuple[Chord, int]] = []
    labels: Dict[BoundaryPoint, str] = {}
    for w in cyclic_words(word_length):
        plus, minus = fixed_points(word_map(pair, w))
        ends = []
        for tag, x in (("-", minus), ("+", plus)):
            p, turn = _to_boundary(x)
            if p in seen and abs(seen[p] - turn) > config.ROOT_ATOL:
                raise RoundingCollisionError(f"Fixed point {tag} of {w} collides after rounding at {p}", word=w)
            seen[p] = turn
            labels.setdefault(p, f"{w}{tag}")
            ends.append(p)
        chords.append((Chord(*ends), 1))
    logger.info(f"Exported {len(chords)} axes for words up to length {word_length}")
    return DiscreteCurrent(chords, labels=labels)


def run_smoke_check(seed: int = 0, trials: int = 5):
    """Quick identity check across the three configurations"""
    rng = random.Random(seed)
    print("🧪 Mobius model smoke check")
    worst = 0.0
    for configuration in CONFIGURATIONS:
        for _ in range(trials):
            pair = random_schottky_pair(rng, configuration)
            lhs, rhs = verify_abc(pair)
            worst = max(worst, abs(lhs - rhs) / (1 + abs(lhs)))
        print(f"✅ {configuration}: {trials} pairs checked")
    if worst < config.ABC_RTOL:
        print(f"🎯 Worst relative error {worst:.3e}")
        return True
    print(f"❌ Worst relative error {worst:.3e} exceeds {config.ABC_RTOL}")
    return False


if __name__ == "__main__":
    logging.basicConfig(level=config.log_level())
    run_smoke_check()
