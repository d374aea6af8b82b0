"""Acceptance criteria, each checked against an independent brute-force oracle.

Every test records one PASS/FAIL line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""
import math
import time
from fractions import Fraction

import numpy as np
import sympy as sp

from hsdim import (
    CubeCountingDimension,
    DigitSet,
    HarmonicTail,
    Product,
    Schedule,
    ball_cover,
    check_ball_lemma,
    check_comparison,
    check_example_section6,
    check_product_inequality,
    check_projection_lemma,
    cover_ball_by_smaller,
    cube_count,
    estimate_dimension,
    premeasure_profile,
    schedule_to_digit_sets,
)
from hsdim.verify import random_digit_set, random_points

import oracles


def test_criterion_1_harmonic_counts(criterion):
    start = time.perf_counter()
    bad = []
    for n in range(2, 65):
        pts = list(HarmonicTail(n).points)
        delta = Fraction(1, n + n * n)
        # oracle: every gap exceeds delta, so no ball of radius delta holds two points
        min_gap = min(b[0] - a[0] for a, b in zip(pts, pts[1:]))
        oracle = len(pts) if min_gap > delta else None
        for r in (delta, delta / 2):
            cert = ball_cover(pts, r, mode="exact", exact_cap=len(pts))
            if not (cert.exact and cert.upper == cert.lower == n + 1 == oracle):
                bad.append((n, r))
    elapsed = time.perf_counter() - start
    criterion(
        1,
        "harmonic N_{delta_n}(A_n) = n+1 for n = 2..64, under 10 s",
        not bad and elapsed < 10,
        f"{len(bad)} mismatches, {elapsed:.2f} s",
    )


def test_criterion_2_harmonic_premeasure(criterion):
    half = sp.Rational(1, 2)
    profile = premeasure_profile(HarmonicTail(64), "ball", "deltas", [half])
    ns = list(range(2, 65))
    values = profile.values(half)
    exact_ok = all(
        sp.simplify(v - sp.sqrt(2) * (n + 1) / sp.sqrt(n + n * n)) == 0 for n, v in zip(ns, values)
    )
    # compare squares, which are rational: decreasing and above 2
    squares = [sp.nsimplify(v**2) for v in values]
    decreasing = all(a > b for a, b in zip(squares, squares[1:]))
    above = all(s > 2 for s in squares)
    gap = float(values[-1] / sp.sqrt(2)) - 1
    slope = estimate_dimension(profile).slope
    ok = exact_ok and decreasing and above and gap <= 0.02 and 0.45 <= slope <= 0.55
    criterion(
        2,
        "harmonic premeasure exact, decreasing to sqrt(2), slope in [0.45, 0.55]",
        ok,
        f"exact={exact_ok}, gap at n=64 {gap:.4%}, slope {slope:.4f}",
    )


def test_criterion_3_cantor(criterion):
    start = time.perf_counter()
    cantor = DigitSet.uniform(3, (0, 2), 12)
    allowed = [frozenset({0, 2})] * 12
    counts_ok = all(
        cube_count(cantor, 3, k, cell_cap=0).count == 2**k == oracles.digit_cell_count(allowed, 3, k)
        for k in range(0, 13)
    )
    est = CubeCountingDimension(base=3, levels=range(1, 13)).fit(cantor)
    target = math.log(2) / math.log(3)
    elapsed = time.perf_counter() - start
    ok = counts_ok and abs(est.dimension_ - target) <= 0.01 and elapsed < 5
    criterion(
        3,
        "Cantor base-3 counts 2^k for k <= 12, slope within 0.01 of log2/log3, under 5 s",
        ok,
        f"slope {est.dimension_:.5f}, {elapsed:.2f} s",
    )


def test_criterion_4_comparison_constants(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(4)
    violations = 0
    inexact = 0
    checks = 0
    for n in (1, 2):
        alpha, b_n = 3**n, (2 * n) ** n
        for _ in range(100):
            pts = random_points(rng, int(rng.integers(1, 13)), n)
            for k in (3, 4, 5):
                report = check_comparison(pts, k, exact_cap=12)
                grid = len(oracles.grid_cells(pts, 2, k))
                balls = oracles.min_ball_cover(pts, Fraction(1, 2 ** (k + 1)) ** 2)
                agree = report.computed["cube_count"] == grid and report.computed["ball_upper"] == balls
                inexact += not report.computed["ball_exact"]
                ok = grid <= alpha * balls and balls <= b_n * grid
                violations += not (ok and agree and report.passed)
                checks += 1
    elapsed = time.perf_counter() - start
    criterion(
        4,
        "N* <= 3^n N and N <= (2n)^n N* on 100 random sets per dimension, k in {3,4,5}, under 60 s",
        violations == 0 and inexact == 0 and elapsed < 60,
        f"{checks} checks, {violations} violations, {elapsed:.1f} s",
    )


def test_criterion_5_product_factorization(criterion):
    rng = np.random.default_rng(5)
    failures = 0
    for _ in range(50):
        base = (int(rng.choice((2, 3, 4))),)
        a, b = random_digit_set(rng, 6, base), random_digit_set(rng, 6, base)
        report = check_product_inequality(a, b, a.base, 5, Fraction(1, 2), Fraction(1, 3))
        for row in report.computed["levels"]:
            k = row["level"]
            oa = oracles.digit_cell_count(a.allowed, a.base, k)
            ob = oracles.digit_cell_count(b.allowed, b.base, k)
            op = oracles.product_cell_count(a.allowed, b.allowed, a.base, k)
            if not (row["A"] == oa and row["B"] == ob and row["AxB"] == op == oa * ob):
                failures += 1
        failures += not report.passed
    criterion(5, "N*(AxB) = N*(A) N*(B) for 50 random digit-set pairs, k <= 5", failures == 0, f"{failures} failures")


def test_criterion_6_digit_schedule(criterion):
    schedule = Schedule.minimal(3)
    m = schedule.m
    problems = []
    for j in (1, 2, 3):
        report = check_example_section6(schedule, j)
        if not report.passed:
            problems.append(f"report j={j}")
        depth = m[2 * j + 1]
        A, _ = schedule_to_digit_sets(schedule, depth)
        level = m[2 * j]
        count = cube_count(A, 10, level, cell_cap=0).count
        exponent = round(math.log10(count))
        if count != 10**exponent or Fraction(exponent, level) > schedule.t[j - 1]:
            problems.append(f"ratio j={j}")
        if level <= 6:
            oracle = oracles.digit_cell_count(oracles.schedule_allowed(m, depth, "A"), 10, level)
            if oracle != count:
                problems.append(f"enumeration j={j}")
    A, B = schedule_to_digit_sets(schedule, 12)
    allowed_a = oracles.schedule_allowed(m, 12, "A")
    allowed_b = oracles.schedule_allowed(m, 12, "B")
    for level in range(0, 7):
        closed = cube_count(Product(A, B), 10, level, cell_cap=0).count
        oracle = oracles.product_cell_count(allowed_a, allowed_b, 10, level)
        if not closed == oracle == 10**level:
            problems.append(f"product level {level}")
        if level <= 5:
            sub = cube_count(Product(A, B), 10, level, method="subdivide", cell_cap=0).count
            if sub != closed:
                problems.append(f"subdivision level {level}")
    criterion(
        6,
        "digit schedule j <= 3: enumerated counts, log10 ratio <= t_j, product count 10^m for m <= 6",
        not problems,
        ", ".join(problems) or f"m = {list(m)}",
    )


def _ceil_ratio_sqrt(ratio, n):
    m = 0
    while m * m < ratio * ratio * n:
        m += 1
    return m


def test_criterion_7_ball_lemma(criterion):
    rng = np.random.default_rng(7)
    violations = []
    for n in (1, 2):
        for ratio in (2, 3, 5):
            report = check_ball_lemma(n, ratio)
            fam = cover_ball_by_smaller(n, 1, Fraction(1, ratio))
            bound = _ceil_ratio_sqrt(ratio, n) ** n
            # independent probe: random exact points of the unit-diameter ball
            probes = 0
            while probes < 300:
                p = tuple(Fraction(int(v), 4096) for v in rng.integers(-2048, 2049, size=n))
                if oracles.sqdist(p, (0,) * n) > Fraction(1, 4):
                    continue
                probes += 1
                if not any(oracles.sqdist(p, c) <= fam.radius**2 for c in fam.centers):
                    violations.append((n, ratio, p))
                    break
            if not (report.passed and fam.count <= bound):
                violations.append((n, ratio))
    criterion(
        7,
        "ball of diameter delta covered by ceil(delta sqrt(n)/gamma)^n balls, n in {1,2}, ratio in {2,3,5}",
        not violations,
        f"{len(violations)} violations",
    )


def test_criterion_8_projection(criterion):
    rng = np.random.default_rng(8)
    violations = 0
    for _ in range(50):
        pts = random_points(rng, int(rng.integers(1, 13)), 2)
        for delta in (Fraction(1, 8), Fraction(1, 16)):
            report = check_projection_lemma(pts, delta, exact_cap=12)
            image = [(x + y,) for x, y in pts]
            lhs = oracles.min_ball_cover(image, 2 * delta * delta)
            rhs = oracles.min_ball_cover(pts, delta * delta)
            violations += not (report.passed and lhs <= rhs)
    criterion(
        8,
        "N_{sqrt2 delta}(x+y image) <= N_delta(E) on 50 random planar sets, delta in {1/8, 1/16}",
        violations == 0,
        f"{violations} violations",
    )
