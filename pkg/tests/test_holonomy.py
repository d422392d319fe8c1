from __future__ import annotations

import random
from fractions import Fraction

import pytest

from conftest import leaf, random_current, random_lamination
from current_core import DiscreteCurrent, box_measure, total_mass
from cyclic_boundary import (
    box,
    box_boundary,
    chord,
    concatenate,
    point,
    reverse,
    triple_cycle,
    winding_loop,
    winding_number,
)
from errors import ContractError, DiagonalError, GenericPositionError, MassRangeError, NotLowerSubmeasureError
from holonomy import (
    LowerSubmeasure,
    NEG_INF,
    base_submeasure,
    cross_ratio,
    cycle_holonomy,
    holonomy_context,
    linear_extension,
    loop_mass,
    potential,
    potential_matrix,
    random_base_submeasure,
    submeasure_holonomy,
    triple_ratio,
)

F = Fraction
P = point


def _random_box(rng: random.Random):
    corners = sorted(F(2 * k + 1, 64) for k in rng.sample(range(32), 4))
    return box(*corners)


def test_base_submeasure_extremes() -> None:
    mu = leaf(0, F(1, 2))
    assert base_submeasure(mu, 0).mass() == 0
    full = base_submeasure(mu, 2)
    assert all(full.complement(c) == 0 for c in mu)
    half = base_submeasure(mu, 1)
    assert half.mass() == 1
    with pytest.raises(MassRangeError):
        base_submeasure(mu, 3)
    with pytest.raises(MassRangeError):
        base_submeasure(mu, -1)


def test_linear_extension_puts_nested_chords_first() -> None:
    inner, outer = chord(F(1, 8), F(3, 8)), chord(0, F(1, 2))
    mu = DiscreteCurrent({outer: 1, inner: 2})
    assert linear_extension(mu) == [inner, outer]
    nu = base_submeasure(mu, F(5, 2))
    assert nu.value(inner) == 2
    assert nu.value(outer) == F(1, 2)


def test_lower_submeasure_must_fill_below() -> None:
    inner, outer = chord(F(1, 8), F(3, 8)), chord(0, F(1, 2))
    mu = DiscreteCurrent({outer: 1, inner: 1})
    with pytest.raises(NotLowerSubmeasureError):
        LowerSubmeasure(mu, {outer: F(1, 2)})
    with pytest.raises(NotLowerSubmeasureError):
        LowerSubmeasure(mu, {inner: 2})
    with pytest.raises(NotLowerSubmeasureError):
        LowerSubmeasure(mu, {chord(F(1, 4), F(3, 4)): 0})


def test_potential_on_a_leaf() -> None:
    ctx = holonomy_context(leaf(0, F(1, 2)), 1)
    assert ctx.base.value(chord(0, F(1, 2))) == 1
    assert potential(ctx, P(F(1, 8)), P(F(3, 8))) == -1
    assert potential(ctx, P(F(3, 8)), P(F(1, 8))) == -1
    assert potential(ctx, P(F(3, 4)), P(F(1, 4))) == 0


def test_potential_errors() -> None:
    ctx = holonomy_context(leaf(0, F(1, 2)), 1)
    with pytest.raises(DiagonalError):
        potential(ctx, P(F(1, 8)), P(F(1, 8)))
    with pytest.raises(GenericPositionError):
        potential(ctx, P(0), P(F(1, 8)))


def test_potential_is_constant_on_gap_cells(rng: random.Random) -> None:
    mu = random_current(rng, 5)
    ctx = holonomy_context(mu, total_mass(mu) / 3)
    gaps, matrix = potential_matrix(ctx)
    ends = sorted({e for c in mu for e in (c.src, c.dst)})
    for _ in range(40):
        i, j = rng.sample(range(len(gaps)), 2)

        def jiggle(k):
            lo = ends[k].angle
            hi = ends[k + 1].angle if k + 1 < len(ends) else ends[0].angle + 1
            return P(lo + (hi - lo) * F(rng.randint(1, 99), 100))

        assert potential(ctx, jiggle(i), jiggle(j)) == matrix[i][j]


def test_potential_matrix_diagonal_is_minus_infinity() -> None:
    ctx = holonomy_context(leaf(0, F(1, 2)), 1)
    gaps, matrix = potential_matrix(ctx)
    assert len(gaps) == 2
    assert matrix[0][0] == NEG_INF and matrix[1][1] == NEG_INF
    assert potential_matrix(holonomy_context(DiscreteCurrent(), 0)) == ([], [])


def test_cross_ratio_matches_box_measure() -> None:
    ctx = holonomy_context(DiscreteCurrent({chord(0, F(1, 2)): 1}), 0)
    assert cross_ratio(ctx, P(F(15, 16)), P(F(1, 16)), P(F(7, 16)), P(F(9, 16))) == 1
    assert cross_ratio(ctx, P(F(1, 16)), P(F(1, 16)), P(F(7, 16)), P(F(9, 16))) == 0


def test_box_holonomy_is_box_measure(rng: random.Random) -> None:
    checked = 0
    for _ in range(100):
        mu = random_current(rng, rng.randint(1, 6))
        T = total_mass(mu) * F(rng.randint(0, 4), 4)
        ctx = holonomy_context(mu, T)
        for _ in range(5):
            r = _random_box(rng)
            assert cycle_holonomy(ctx, box_boundary(r)) == box_measure(mu, r)
            checked += 1
    assert checked >= 500


def test_cross_ratio_does_not_depend_on_the_base(rng: random.Random) -> None:
    mu = random_current(rng, 6)
    T = total_mass(mu) / 2
    contexts = [holonomy_context(mu, T)] + [
        holonomy_context(mu, T, random_base_submeasure(mu, T, rng)) for _ in range(4)
    ]
    for _ in range(10):
        x1, x2, y1, y2 = sorted(F(2 * k + 1, 64) for k in rng.sample(range(32), 4))
        values = {cross_ratio(ctx, P(x1), P(x2), P(y1), P(y2)) for ctx in contexts}
        assert len(values) == 1


def test_winding_loop_holonomy_is_loop_mass_minus_level() -> None:
    mu = leaf(0, F(1, 2))
    ctx = holonomy_context(mu, 1)
    x, y, x2, y2 = P(F(15, 16)), P(F(3, 8)), P(F(7, 16)), P(F(7, 8))
    loop = winding_loop(x, y, x2, y2)
    assert loop_mass(mu, x, y, x2, y2) == 2
    assert cycle_holonomy(ctx, loop) == 1
    assert cycle_holonomy(ctx, reverse(loop)) == -1


def test_triple_ratios() -> None:
    ctx = holonomy_context(leaf(0, F(1, 2)), 1)
    assert triple_ratio(ctx, P(F(1, 8)), P(F(1, 4)), P(F(3, 4))) == 0
    asymmetric = holonomy_context(DiscreteCurrent({chord(0, F(1, 2)): 1}), F(1, 2))
    assert triple_ratio(asymmetric, P(F(1, 4)), P(F(3, 4)), P(F(7, 8))) == F(1, 2)
    empty = holonomy_context(DiscreteCurrent(), 0)
    assert triple_ratio(empty, P(F(1, 4)), P(F(1, 2)), P(F(3, 4))) == 0


def test_triple_ratios_vanish_on_laminations(rng: random.Random) -> None:
    for _ in range(10):
        mu = random_lamination(rng, rng.randint(2, 4))
        ctx = holonomy_context(mu)
        gaps, _ = potential_matrix(ctx)
        for _ in range(5):
            x, y, z = rng.sample(gaps, 3)
            assert triple_ratio(ctx, x, y, z) == 0


def test_submeasure_holonomy() -> None:
    mu = leaf(0, F(1, 2))
    ctx = holonomy_context(mu, 1)
    assert submeasure_holonomy(ctx, ctx.base) == 0
    assert submeasure_holonomy(ctx, LowerSubmeasure(mu, {})) == -1
    assert submeasure_holonomy(ctx, LowerSubmeasure(mu, {c: 1 for c in mu})) == 1
    other = leaf(F(1, 4), F(3, 4))
    with pytest.raises(ContractError):
        submeasure_holonomy(ctx, LowerSubmeasure(other, {}))


def test_context_defaults_and_float_mass() -> None:
    ctx = holonomy_context(leaf(0, F(1, 2), 3))
    assert ctx.T == 3
    with pytest.raises(MassRangeError):
        holonomy_context(leaf(0, F(1, 2)), 0.5)
    with pytest.raises(ContractError):
        holonomy_context(leaf(0, F(1, 2)), 1, base_submeasure(leaf(0, F(1, 2)), 2))


def _generic_points(rng: random.Random, k: int):
    return [P(a) for a in sorted(F(2 * j + 1, 64) for j in rng.sample(range(32), k))]


def test_triangle_difference_is_a_difference_of_cross_ratios(rng: random.Random) -> None:
    for _ in range(40):
        mu = random_current(rng, rng.randint(1, 6))
        ctx = holonomy_context(mu, total_mass(mu) * F(rng.randint(0, 4), 4))
        x, x2, y, y2 = rng.sample(_generic_points(rng, 4), 4)
        lhs = triple_ratio(ctx, x, x2, y2) - triple_ratio(ctx, x, x2, y)
        rhs = cross_ratio(ctx, x, x2, y, y2) - cross_ratio(ctx, y, y2, x, x2)
        assert lhs == rhs


def test_winding_and_holonomy_add_under_concatenation(rng: random.Random) -> None:
    for _ in range(30):
        mu = random_current(rng, rng.randint(1, 5))
        ctx = holonomy_context(mu, total_mass(mu) * F(rng.randint(0, 4), 4))
        a, b, c, d, e = _generic_points(rng, 5)
        triangle = triple_cycle(a, c, e)
        loop = winding_loop(a, c, d, e)
        square = box_boundary(box(a, b, c, d))
        for z1, z2 in ((triangle, loop), (square, loop), (triangle, reverse(triangle)), (loop, loop)):
            joined = concatenate(z1, z2)
            assert winding_number(joined) == winding_number(z1) + winding_number(z2)
            assert cycle_holonomy(ctx, joined) == cycle_holonomy(ctx, z1) + cycle_holonomy(ctx, z2)


def test_triple_ratios_appear_off_the_half_level(rng: random.Random) -> None:
    checked = 0
    for _ in range(20):
        mu = random_lamination(rng, rng.randint(2, 4))
        half = total_mass(mu) / 2
        for T in (half - F(1, 7), half + F(1, 7)):
            ctx = holonomy_context(mu, T)
            gaps, _ = potential_matrix(ctx)
            if len(gaps) < 3:
                continue
            triples = [rng.sample(gaps, 3) for _ in range(5)]
            assert any(triple_ratio(ctx, *t) != 0 for t in triples)
            checked += 1
    assert checked >= 20
