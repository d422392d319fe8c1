#!/usr/bin/env python3
"""
Finsler Plane for currentlab
The triangular Finsler norm of the cubic differential dz^3, its Busemann functions and cross ratios
"""

import cmath
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

import config
from errors import ContractError, DegenerateConfigurationError, ValidationError

logger = logging.getLogger(__name__)

OMEGA = cmath.exp(2j * math.pi / 3)
ROOTS = (1 + 0j, OMEGA, OMEGA ** 2)
PLUS = "plus"
MINUS = "minus"
NEG_INF = float("-inf")


def _root_values(v: complex) -> List[float]:
    return [2 * (z * v).real for z in ROOTS]


def finsler_norm(v: complex) -> float:
    """max over the cube roots of unity of 2 Re(zeta v)"""
    return max(_root_values(complex(v)))


def distance(p: complex, q: complex) -> float:
    return finsler_norm(complex(q) - complex(p))


def _tolerance(v: complex) -> float:
    return config.ROOT_ATOL * max(1.0, abs(v))


def maximizing_roots(v: complex) -> Tuple[complex, ...]:
    v = complex(v)
    if v == 0:
        raise ContractError("Maximizing roots are undefined for the zero vector")
    values = _root_values(v)
    top = max(values)
    return tuple(z for z, value in zip(ROOTS, values) if value >= top - _tolerance(v))


def unit_triangle() -> Tuple[complex, complex, complex]:
    """Vertices of the unit ball; these are also the descending directions"""
    return tuple(-z for z in ROOTS)


class Polyline:
    def __init__(self, points: Sequence[complex]):
        points = [complex(p) for p in points]
        if len(points) < 2:
            raise ValidationError("A polyline needs at least two points")
        for p in points:
            if not (math.isfinite(p.real) and math.isfinite(p.imag)):
                raise ValidationError(f"Polyline point {p} is not finite")
        for p, q in zip(points, points[1:]):
            if p == q:
                raise ValidationError(f"Consecutive polyline points coincide at {p}")
        self.points = points

    def segments(self) -> List[complex]:
        return [q - p for p, q in zip(self.points, self.points[1:])]

    def length(self) -> float:
        return sum(finsler_norm(v) for v in self.segments())

    def __len__(self):
        return len(self.points)


def is_geodesic(path: Polyline) -> bool:
    """Some root is maximizing on every segment"""
    common = set(ROOTS)
    for v in path.segments():
        common &= set(maximizing_roots(v))
    return bool(common)


def descending_trajectory(base: complex, root: complex, t0: float, t1: float, steps: int = 4) -> Polyline:
    """Straight path base - t * root for t from t0 to t1"""
    if not any(abs(root - z) < config.ROOT_ATOL for z in ROOTS):
        raise ValidationError(f"{root} is not a cube root of unity")
    return Polyline([complex(base) - t * root for t in np.linspace(t0, t1, steps + 1)])


@dataclass(frozen=True)
class Horofunction:
    """x -> max over forms (a, c) of 2 Re(a x) + c, remembering the ray it came from"""

    forms: Tuple[Tuple[complex, float], ...]
    sign: str
    base: Optional[complex] = None
    direction: Optional[complex] = None

    def __post_init__(self):
        if not 1 <= len(self.forms) <= 2:
            raise ValidationError(f"Horofunction needs one or two forms, got {len(self.forms)}")
        if self.sign not in (PLUS, MINUS):
            raise ValidationError(f"Unknown horofunction sign {self.sign!r}")

    def __call__(self, x: complex) -> float:
        return max(2 * (a * complex(x)).real + c for a, c in self.forms)

    def shifted(self, r: float) -> "Horofunction":
        return Horofunction(tuple((a, c + r) for a, c in self.forms), self.sign, None, None)


def _unit_direction(direction: complex) -> complex:
    direction = complex(direction)
    if direction == 0:
        raise ContractError("Ray direction must be nonzero")
    return direction / finsler_norm(direction)


def busemann(ray_base: complex, direction: complex, sign: str) -> Horofunction:
    """Limit of d(x, base + t dir) - t (plus) or d(base - t dir, x) - t (minus)"""
    u = _unit_direction(direction)
    b = complex(ray_base)
    roots = maximizing_roots(u)
    if sign == PLUS:
        forms = tuple((-z, 2 * (z * b).real) for z in roots)
    elif sign == MINUS:
        forms = tuple((z, -2 * (z * b).real) for z in roots)
    else:
        raise ValidationError(f"Unknown horofunction sign {sign!r}")
    return Horofunction(forms, sign, b, u)


def pairing(g: Horofunction, h: Horofunction) -> float:
    """inf over the plane of g + h, or -inf when unbounded below.

    The sum is a max of at most four affine pieces; its infimum is the best
    convex combination of pieces whose gradients cancel, and an optimal one
    uses at most three pieces.
    """
    if g.sign != MINUS or h.sign != PLUS:
        raise ContractError("Pairing takes a minus horofunction and a plus horofunction")
    pieces = [(a + b, c + d) for a, c in g.forms for b, d in h.forms]
    best = NEG_INF
    tol = config.ROOT_ATOL * 10
    for size in (1, 2, 3):
        for chosen in itertools.combinations(pieces, size):
            A = np.array([[p[0].real for p in chosen], [p[0].imag for p in chosen], [1.0] * size])
            target = np.array([0.0, 0.0, 1.0])
            weights, *_ = np.linalg.lstsq(A, target, rcond=None)
            if np.max(np.abs(A @ weights - target)) > tol or np.min(weights) < -tol:
                continue
            best = max(best, float(sum(w * p[1] for w, p in zip(weights, chosen))))
    return best


def _alternating(g1, g2, h1, h2) -> float:
    values = [pairing(g1, h1), pairing(g2, h2), pairing(g1, h2), pairing(g2, h1)]
    if NEG_INF in values:
        raise DegenerateConfigurationError("A pairing in the cross ratio is -inf")
    return values[0] + values[1] - values[2] - values[3]


def stabilize_in_radius(value: Callable[[float], float]) -> float:
    """Double the radius until two consecutive values agree to CROSS_RATIO_RTOL"""
    R = config.START_RADIUS
    previous = value(R)
    for _ in range(config.MAX_DOUBLINGS):
        R *= 2
        current = value(R)
        if abs(current - previous) <= config.CROSS_RATIO_RTOL * max(1.0, abs(current)):
            logger.info(f"Cross distance stabilized at radius {R}")
            return current
        previous = current
    raise DegenerateConfigurationError(f"Cross distance did not stabilize by radius {R}")


def cross_distance(g1: Horofunction, g2: Horofunction, h1: Horofunction, h2: Horofunction) -> float:
    """Stabilized d(x1,y1) + d(x2,y2) - d(x1,y2) - d(x2,y1) along the four rays"""
    for f in (g1, g2, h1, h2):
        if f.base is None:
            raise ContractError("Cross distance needs horofunctions built from rays")

    def value(R: float) -> float:
        x1, x2 = g1.base - R * g1.direction, g2.base - R * g2.direction
        y1, y2 = h1.base + R * h1.direction, h2.base + R * h2.direction
        return distance(x1, y1) + distance(x2, y2) - distance(x1, y2) - distance(x2, y1)

    return stabilize_in_radius(value)


def ray_path(f: Horofunction, reach: float) -> Polyline:
    """The ray behind f up to distance reach: coming in for minus, going out for plus"""
    if f.base is None:
        raise ContractError("Only horofunctions built from rays have a path")
    if f.sign == MINUS:
        return Polyline([f.base - reach * f.direction, f.base])
    return Polyline([f.base, f.base + reach * f.direction])


def cross_ratio_b(g1: Horofunction, g2: Horofunction, h1: Horofunction, h2: Horofunction,
                  method: str = "pairing") -> float:
    """<g1,h1> + <g2,h2> - <g1,h2> - <g2,h1>"""
    if method == "pairing":
        return _alternating(g1, g2, h1, h2)
    if method == "cross-distance":
        return cross_distance(g1, g2, h1, h2)
    raise ValidationError(f"Unknown cross ratio method {method!r}")


def corridor(L: float) -> Tuple[Horofunction, Horofunction, Horofunction, Horofunction]:
    """Horofunctions of two horizontal descending trajectories through 0 and iL.

    Returned as (g1, g2, h1, h2) with the plus ends swapped so that the cross
    ratio is the Finsler length 2 sqrt(3) L of the corridor's vertical sides.
    """
    if L <= 0:
        raise ValidationError(f"Corridor width must be positive, got {L}")
    bottom, top = 0j, 1j * L
    direction = -1 + 0j
    return (
        busemann(bottom, direction, MINUS),
        busemann(top, direction, MINUS),
        busemann(top, direction, PLUS),
        busemann(bottom, direction, PLUS),
    )
