"""Brute-force reference implementations, written independently of the library.

Everything here is deliberately naive: exhaustive subsets, explicit digit
enumeration, direct floor computations.
"""
import itertools
import math
from fractions import Fraction

import numpy as np


def sqdist(p, q):
    return sum((a - b) ** 2 for a, b in zip(p, q))


def min_ball_cover(points, r_squared):
    """Smallest number of closed balls of squared radius ``r_squared``, centred in the set."""
    pts = sorted(set(points))
    if not pts:
        return 0
    near = [frozenset(j for j, q in enumerate(pts) if sqdist(p, q) <= r_squared) for p in pts]
    everything = frozenset(range(len(pts)))
    for size in range(1, len(pts) + 1):
        for combo in itertools.combinations(range(len(pts)), size):
            if frozenset().union(*(near[i] for i in combo)) == everything:
                return size
    raise AssertionError("unreachable")


def max_packing(points, r):
    """Largest subset with pairwise distance at least ``r``."""
    pts = sorted(set(points))
    r2 = Fraction(r) ** 2
    for size in range(len(pts), 0, -1):
        for combo in itertools.combinations(pts, size):
            if all(sqdist(p, q) >= r2 for p, q in itertools.combinations(combo, 2)):
                return size
    return 0


def grid_cells(points, base, level):
    """Distinct cells ``floor(x * b^k)`` hit by a finite point set."""
    scale = base**level
    return {tuple(math.floor(Fraction(c) * scale) for c in p) for p in points}


def digit_prefixes(allowed, base, level):
    """Integers ``p < base^level`` whose leading digits are allowed at each position.

    ``allowed[i]`` is the digit set at position ``i + 1``; positions past the
    end allow only 0 (the truncated expansion stops there).
    """
    values = np.zeros(1, dtype=np.int64)
    for i in range(level):
        digits = sorted(allowed[i]) if i < len(allowed) else [0]
        values = (values[:, None] * base + np.array(digits, dtype=np.int64)[None, :]).ravel()
    return values


def digit_cell_count(allowed, base, level):
    """Cells of side ``base^-level`` meeting a digit set, by scanning every cell index.

    A cell ``p`` meets the set iff each of its ``level`` leading digits is allowed.
    Only valid for levels where ``base^level`` fits comfortably in memory.
    """
    p = np.arange(base**level, dtype=np.int64)
    ok = np.ones_like(p, dtype=bool)
    for i in range(level):
        digit = (p // base ** (level - 1 - i)) % base
        digits = sorted(allowed[i]) if i < len(allowed) else [0]
        ok &= np.isin(digit, digits)
    return int(ok.sum())


def schedule_allowed(m, depth, part):
    """Per-position digit sets for the block-zeroed decimal sets.

    The first set is free on positions ``(m_{2i}, m_{2i+1}]``, the second on the
    remaining positions; every other position is pinned to 0.
    """
    free_a = set()
    for i in range(0, len(m) - 1, 2):
        free_a.update(range(m[i] + 1, m[i + 1] + 1))
    full, zero = frozenset(range(10)), frozenset({0})
    out = []
    for pos in range(1, depth + 1):
        in_a = pos in free_a
        free = in_a if part == "A" else not in_a
        out.append(full if free else zero)
    return out


def product_cell_count(allowed_a, allowed_b, base, level):
    """Distinct 2-D cells hit by all pairs of depth-``level`` grid points of the two sets."""
    a = digit_prefixes(allowed_a, base, level)
    b = digit_prefixes(allowed_b, base, level)
    keys = (a[:, None] * base**level + b[None, :]).ravel()
    return int(np.unique(keys).size)
