from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsdim import (
    AffineImage,
    DigitSet,
    FinitePoints,
    HarmonicTail,
    InexactBaseError,
    Product,
    Schedule,
    ScheduleError,
    cell_intersects,
    sample_points,
    schedule_to_digit_sets,
)

import oracles

CANTOR = DigitSet.uniform(3, (0, 2), 6)


@st.composite
def digit_sets(draw, base=None, max_depth=5):
    base = base or draw(st.integers(2, 5))
    depth = draw(st.integers(1, max_depth))
    allowed = [
        draw(st.frozensets(st.integers(0, base - 1), min_size=1, max_size=base)) for _ in range(depth)
    ]
    return DigitSet(base, tuple(allowed))


rationals = st.fractions(min_value=0, max_value=1, max_denominator=64)


def test_harmonic_contains_zero():
    assert cell_intersects(HarmonicTail(3), 2, 2, [0])


def test_cantor_middle_third_removed():
    assert not cell_intersects(DigitSet.uniform(3, (0, 2), 4), 3, 1, [1])
    assert cell_intersects(DigitSet.uniform(3, (0, 2), 4), 3, 1, [2])


def test_schedule_cells_match_digit_enumeration():
    schedule = Schedule.minimal(2)
    m = schedule.m
    A, B = schedule_to_digit_sets(schedule, m[4])
    level = m[4]
    allowed = oracles.schedule_allowed(m, m[4], "A")
    hits = set(oracles.digit_prefixes(allowed, 10, level).tolist())
    for p in list(range(0, 10**level, 997)) + sorted(hits)[:50]:
        assert cell_intersects(A, 10, level, p) == (p in hits)


def test_cell_arity_mismatch():
    with pytest.raises(ValueError):
        cell_intersects(Product(CANTOR, CANTOR), 3, 1, [0])


def test_inexact_base_raises_and_relaxes():
    with pytest.raises(InexactBaseError):
        cell_intersects(CANTOR, 3, 7, [0])
    assert cell_intersects(CANTOR, 3, 7, [0], strict=False)
    # base-2 cell [1/4, 1/2) cuts the depth-1 interval [0, 1/3) of a depth-1 set
    shallow = DigitSet.uniform(3, (0, 2), 1)
    with pytest.raises(InexactBaseError):
        cell_intersects(shallow, 2, 2, [1])
    # a base-2 cell strictly inside the removed middle third is decided exactly
    deep = DigitSet.uniform(3, (0, 2), 1)
    assert not cell_intersects(deep, 2, 3, [3])


def test_finite_points_outside_unit_box_rejected():
    with pytest.raises(ValueError):
        FinitePoints(((Fraction(3, 2),),))


def test_point_one_lands_in_last_cell():
    one = FinitePoints(((Fraction(1),),))
    assert cell_intersects(one, 2, 3, [8])
    assert not cell_intersects(one, 2, 3, [7])


def test_digit_set_rejects_empty_position():
    with pytest.raises(ValueError):
        DigitSet(3, (frozenset(),))
    with pytest.raises(ValueError):
        DigitSet(3, ({3},))


def test_product_needs_1d_factors():
    with pytest.raises(ValueError):
        Product(Product(CANTOR, CANTOR), CANTOR)


def test_schedule_partition_example():
    s = Schedule((Fraction(1, 2),), (0, 1, 3, 7))
    A, B = schedule_to_digit_sets(s, 7)
    assert A.free_positions() == [1, 4, 5, 6, 7]
    assert B.free_positions() == [2, 3]
    assert set(A.free_positions()) | set(B.free_positions()) == set(range(1, 8))


def test_depth_zero_sets_are_origin():
    A, B = schedule_to_digit_sets(Schedule.minimal(1), 0)
    assert sample_points(A, 5) == [(Fraction(0),)]
    assert sample_points(B, 5) == [(Fraction(0),)]


def test_schedule_depth_beyond_coverage():
    s = Schedule.minimal(1)
    with pytest.raises(ScheduleError):
        schedule_to_digit_sets(s, s.m[-1] + 1)


@given(st.integers(1, 4), st.integers(0, 40))
def test_partition_property(blocks, depth):
    s = Schedule.minimal(blocks)
    depth = min(depth, s.m[-1])
    A, B = schedule_to_digit_sets(s, depth)
    fa, fb = set(A.free_positions()), set(B.free_positions())
    assert not fa & fb
    assert fa | fb == set(range(1, depth + 1))


def test_minimal_schedule_values():
    s = Schedule.minimal(3)
    assert s.m == (0, 1, 2, 3, 6, 12, 32, 96)
    assert s.t == (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))


@pytest.mark.parametrize(
    "t, m",
    [
        ((Fraction(1, 2),), (0, 1, 1)),
        ((Fraction(1, 2),), (0, 5, 6)),
        ((Fraction(1, 3),), (0, 1, 2)),
        ((Fraction(1, 2), Fraction(1, 3)), (0, 1, 2, 3, 4)),
        ((Fraction(1, 3), Fraction(1, 2)), (0, 1, 3, 6)),
        ((Fraction(1, 2),), (1, 2, 4)),
    ],
)
def test_schedule_rejects_violations(t, m):
    with pytest.raises(ScheduleError):
        Schedule(t, m)


def test_sampling_examples():
    pts = FinitePoints(((Fraction(0),), (Fraction(1, 2),)))
    assert sample_points(pts, 10) == [(Fraction(0),), (Fraction(1, 2),)]
    assert sorted(x for (x,) in sample_points(HarmonicTail(5), 100)) == sorted(
        [Fraction(0), Fraction(1)] + [Fraction(1, n) for n in range(2, 6)]
    )
    cantor = DigitSet.uniform(3, (0, 2), 3)
    got = sample_points(cantor, 8)
    assert len(got) == 8
    for (x,) in got:
        v = x * 27
        assert v.denominator == 1
        digits = [int(v) // 9 % 3, int(v) // 3 % 3, int(v) % 3]
        assert set(digits) <= {0, 2}


def test_sampling_budget_validation():
    with pytest.raises(ValueError):
        sample_points(CANTOR, 0)


def test_affine_image_reflection():
    # x -> 1 - x maps [0, 1/3) to (2/3, 1]; the point 0 goes to 1
    refl = AffineImage(-1, 1, FinitePoints(((Fraction(0),), (Fraction(1, 3),))))
    assert refl.bounds() == ((Fraction(2, 3), Fraction(1)),)
    assert cell_intersects(refl, 3, 1, [2])
    assert not cell_intersects(refl, 3, 1, [1])
    assert cell_intersects(refl, 3, 1, [3])


def test_affine_image_scaled_cantor():
    half = AffineImage(Fraction(1, 2), 0, DigitSet.uniform(3, (0, 2), 4))
    assert cell_intersects(half, 2, 1, [0])
    assert not cell_intersects(half, 2, 1, [1])


@settings(max_examples=60, deadline=None)
@given(digit_sets(), st.integers(0, 4), st.data())
def test_refinement_monotone(model, level, data):
    level = min(level, model.depth - 1)
    b = model.base
    child = data.draw(st.integers(0, b ** (level + 1) - 1))
    if cell_intersects(model, b, level + 1, child):
        assert cell_intersects(model, b, level, child // b)


@settings(max_examples=60, deadline=None)
@given(digit_sets(), st.integers(0, 5))
def test_same_base_cells_match_oracle(model, level):
    level = min(level, model.depth)
    b = model.base
    hits = set(oracles.digit_prefixes(model.allowed, b, level).tolist())
    for p in range(b**level):
        assert cell_intersects(model, b, level, p) == (p in hits)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_product_is_and(data):
    base = data.draw(st.integers(2, 4))
    a = data.draw(digit_sets(base=base))
    b = data.draw(digit_sets(base=base))
    level = data.draw(st.integers(0, min(a.depth, b.depth)))
    p = data.draw(st.integers(0, base**level - 1))
    q = data.draw(st.integers(0, base**level - 1))
    prod = Product(a, b)
    assert cell_intersects(prod, base, level, (p, q)) == (
        cell_intersects(a, base, level, p) and cell_intersects(b, base, level, q)
    )


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(rationals, rationals), min_size=1, max_size=8), st.integers(2, 4), st.integers(0, 4))
def test_finite_cells_match_floor(points, base, level):
    model = FinitePoints(tuple(points))
    hits = oracles.grid_cells(points, base, level)
    for cell in hits:
        assert cell_intersects(model, base, level, cell)
    for p in range(base**level):
        for q in range(base**level):
            assert cell_intersects(model, base, level, (p, q)) == ((p, q) in hits)


@settings(max_examples=40, deadline=None)
@given(digit_sets(), st.integers(1, 64))
def test_samples_lie_in_set(model, budget):
    pts = sample_points(model, budget)
    assert pts
    for (x,) in pts:
        assert 0 <= x <= 1
        cell = int(x * model.base**model.depth)
        assert cell_intersects(model, model.base, model.depth, cell)
