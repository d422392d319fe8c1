from __future__ import annotations

import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from current_core import DiscreteCurrent  # noqa: E402
from cyclic_boundary import chord  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"


def leaf(a, b, w=1) -> DiscreteCurrent:
    return DiscreteCurrent({chord(a, b): w, chord(b, a): w})


def random_lamination(rng: random.Random, leaves: int) -> DiscreteCurrent:
    """Nested or disjoint leaves with random rational weights"""
    denominator = 4 * leaves + 4
    slots = list(range(1, denominator))
    rng.shuffle(slots)
    ends = sorted(slots[: 2 * leaves])
    # a non-crossing matching of 2k sorted points via a random balanced bracket word
    opens, word = 0, []
    remaining = 2 * leaves
    while remaining:
        closes_needed = opens
        if opens and (rng.random() < 0.5 or closes_needed == remaining):
            word.append(")")
            opens -= 1
        else:
            word.append("(")
            opens += 1
        remaining -= 1
    weights = {}
    stack = []
    for position, symbol in zip(ends, word):
        if symbol == "(":
            stack.append(position)
        else:
            a = Fraction(stack.pop(), denominator)
            b = Fraction(position, denominator)
            w = Fraction(rng.randint(1, 6), rng.randint(1, 3))
            weights[chord(a, b)] = w
            weights[chord(b, a)] = w
    return DiscreteCurrent(weights)


def random_current(rng: random.Random, chords: int, denominator: int = 32) -> DiscreteCurrent:
    points = rng.sample(range(denominator), 2 * chords)
    weights = {}
    for i in range(chords):
        a, b = points[2 * i], points[2 * i + 1]
        weights[chord(Fraction(a, denominator), Fraction(b, denominator))] = rng.randint(1, 4)
    return DiscreteCurrent(weights)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240917)


@pytest.fixture
def lamination_factory() -> Callable[[random.Random, int], DiscreteCurrent]:
    return random_lamination


@pytest.fixture
def current_factory() -> Callable[..., DiscreteCurrent]:
    return random_current
