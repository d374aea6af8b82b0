"""Finite, exact descriptions of subsets of the unit box in one or two dimensions.

Every model answers one question exactly: does the set meet a given b-adic
grid cell ``prod [p_i b^-k, (p_i + 1) b^-k)``? Coordinates are
:class:`fractions.Fraction` throughout, so boundary points are never subject
to rounding.

A :class:`DigitSet` of depth ``d`` stands for the union of all reals in
``[0, 1)`` whose first ``d`` base-b digits are allowed. Queries that this
truncation cannot settle for the limit set (cells finer than ``b^-d``, or
cells of another base that cut a depth-``d`` interval) raise
:class:`InexactBaseError` unless ``strict=False`` is passed, in which case
the truncation itself is queried.
"""
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

from .validation import as_fraction, check_base, check_level, check_point


class InexactBaseError(ValueError):
    """Cell membership of a digit set is not decidable at the materialized depth."""


class ScheduleError(ValueError):
    """A digit schedule violates its growth constraint."""


class Interval(NamedTuple):
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = False

    @classmethod
    def cell(cls, base, level, p):
        width = Fraction(1, base**level)
        return cls(p * width, (p + 1) * width)

    def is_empty(self):
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def contains(self, x):
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def relation(self, a, c):
        """Relation of the half-open ``[a, c)`` to this interval.

        Returns ``"disjoint"``, ``"inside"`` (``[a, c)`` contained in the
        interval) or ``"partial"``.
        """
        if self.is_empty() or c <= self.lo:
            return "disjoint"
        if a > self.hi or (a == self.hi and not self.hi_closed):
            return "disjoint"
        lower_ok = a > self.lo or (a == self.lo and self.lo_closed)
        if lower_ok and c <= self.hi:
            return "inside"
        return "partial"


def _box_of_cell(base, level, cell):
    return tuple(Interval.cell(base, level, p) for p in cell)


class SetModel:
    """Common interface of all set descriptions."""

    dim = 1

    def bounds(self):
        """Closed bounding box as a tuple of ``(lo, hi)`` pairs."""
        raise NotImplementedError

    def meets(self, box, strict=True):
        """Whether the set meets the product of the given intervals."""
        raise NotImplementedError

    def _cell(self, base, level, cell, strict):
        return self.meets(_box_of_cell(base, level, cell), strict)

    def sample(self, budget):
        raise NotImplementedError


@dataclass(frozen=True)
class FinitePoints(SetModel):
    points: tuple
    dim: int = None

    def __post_init__(self):
        pts = sorted({check_point(p) for p in self.points})
        dim = self.dim
        if pts:
            dim = len(pts[0]) if dim is None else dim
            if any(len(p) != dim for p in pts):
                raise ValueError("points have inconsistent dimensions")
        dim = 1 if dim is None else dim
        if dim not in (1, 2):
            raise ValueError(f"only 1-D and 2-D sets are supported, got dim={dim}")
        for p in pts:
            if any(c < 0 or c > 1 for c in p):
                raise ValueError(f"point {p} lies outside the unit box")
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "dim", dim)

    def bounds(self):
        if not self.points:
            return tuple((Fraction(0), Fraction(1)) for _ in range(self.dim))
        return tuple(
            (min(p[i] for p in self.points), max(p[i] for p in self.points))
            for i in range(self.dim)
        )

    def meets(self, box, strict=True):
        return any(all(iv.contains(x) for iv, x in zip(box, p)) for p in self.points)

    def cell_of(self, point, base, level):
        scale = base**level
        return tuple((c.numerator * scale) // c.denominator for c in point)

    def _cell(self, base, level, cell, strict):
        return any(self.cell_of(p, base, level) == cell for p in self.points)

    def sample(self, budget):
        n = len(self.points)
        if n <= budget:
            return list(self.points)
        if budget == 1:
            return [self.points[0]]
        idx = sorted({round(i * (n - 1) / (budget - 1)) for i in range(budget)})
        return [self.points[i] for i in idx]


@dataclass(frozen=True)
class HarmonicTail(SetModel):
    """The finite set ``{0} U {1/k : 1 <= k <= n_max}``."""

    n_max: int

    def __post_init__(self):
        if isinstance(self.n_max, bool) or not isinstance(self.n_max, int) or self.n_max < 1:
            raise ValueError(f"n_max must be a positive integer, got {self.n_max!r}")

    @cached_property
    def finite(self):
        pts = [(Fraction(0),)] + [(Fraction(1, k),) for k in range(1, self.n_max + 1)]
        return FinitePoints(tuple(pts))

    @property
    def points(self):
        return self.finite.points

    def truncate(self, n):
        return HarmonicTail(n)

    def bounds(self):
        return ((Fraction(0), Fraction(1)),)

    def meets(self, box, strict=True):
        return self.finite.meets(box, strict)

    def _cell(self, base, level, cell, strict):
        return self.finite._cell(base, level, cell, strict)

    def sample(self, budget):
        return self.finite.sample(budget)


@dataclass(frozen=True)
class DigitSet(SetModel):
    """Reals in [0, 1) whose r-th base-``base`` digit lies in ``allowed[r-1]``."""

    base: int
    allowed: tuple = field(default=())

    def __post_init__(self):
        base = check_base(self.base)
        allowed = []
        for r, digits in enumerate(self.allowed, start=1):
            digits = frozenset(int(d) for d in digits)
            if not digits:
                raise ValueError(f"no allowed digit at position {r}")
            if min(digits) < 0 or max(digits) >= base:
                raise ValueError(f"digits at position {r} must lie in 0..{base - 1}")
            allowed.append(digits)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "allowed", tuple(allowed))

    @classmethod
    def uniform(cls, base, digits, depth):
        """Same allowed digits at every position, e.g. the middle-third Cantor set."""
        return cls(base, (frozenset(digits),) * depth)

    @property
    def depth(self):
        return len(self.allowed)

    def free_positions(self):
        full = frozenset(range(self.base))
        return [r for r, d in enumerate(self.allowed, start=1) if d == full]

    def prefix_count(self, level):
        """Number of allowed digit strings of length ``level <= depth``."""
        return math.prod(len(d) for d in self.allowed[:level])

    def bounds(self):
        return ((Fraction(0), Fraction(1)),)

    def _prefix_allowed(self, p, length):
        b = self.base
        for r in range(length, 0, -1):
            p, digit = divmod(p, b)
            if digit not in self.allowed[r - 1]:
                return False
        return True

    def _cell(self, base, level, cell, strict):
        if base != self.base:
            return self.meets(_box_of_cell(base, level, cell), strict)
        (p,) = cell
        if p < 0 or p >= base**level:
            return False
        if level <= self.depth:
            return self._prefix_allowed(p, level)
        if not self._prefix_allowed(p // base ** (level - self.depth), self.depth):
            return False
        if strict:
            raise InexactBaseError(
                f"level {level} exceeds the materialized depth {self.depth}"
            )
        return True

    def meets(self, box, strict=True):
        (iv,) = box
        b = self.base
        ambiguous = False
        stack = [(0, 0)]
        while stack:
            r, prefix = stack.pop()
            width = Fraction(1, b**r)
            a = prefix * width
            rel = iv.relation(a, a + width)
            if rel == "disjoint":
                continue
            if rel == "inside":
                return True
            if r == self.depth:
                if not strict:
                    return True
                ambiguous = True
                continue
            for digit in sorted(self.allowed[r], reverse=True):
                stack.append((r + 1, prefix * b + digit))
        if ambiguous:
            raise InexactBaseError(
                f"inexact-base: base-{b} digit set of depth {self.depth} cannot "
                f"decide membership in {iv}"
            )
        return False

    def sample(self, budget):
        level = 0
        while level < self.depth and self.prefix_count(level + 1) <= budget:
            level += 1
        pad = [min(d) for d in self.allowed[level:]]
        out = []
        for head in itertools.product(*(sorted(d) for d in self.allowed[:level])):
            value = 0
            for digit in itertools.chain(head, pad):
                value = value * self.base + digit
            out.append((Fraction(value, self.base**self.depth),))
        return out


@dataclass(frozen=True)
class Product(SetModel):
    left: SetModel
    right: SetModel

    def __post_init__(self):
        if self.left.dim != 1 or self.right.dim != 1:
            raise ValueError("product factors must be one-dimensional")

    dim = 2

    def bounds(self):
        return self.left.bounds() + self.right.bounds()

    def meets(self, box, strict=True):
        return self.left.meets(box[:1], strict) and self.right.meets(box[1:], strict)

    def _cell(self, base, level, cell, strict):
        return self.left._cell(base, level, cell[:1], strict) and self.right._cell(
            base, level, cell[1:], strict
        )

    def sample(self, budget):
        side = max(1, math.isqrt(budget))
        return [p + q for p in self.left.sample(side) for q in self.right.sample(side)]


@dataclass(frozen=True)
class AffineImage(SetModel):
    """The image ``{scale * x + offset : x in inner}`` of a 1-D model."""

    scale: Fraction
    offset: Fraction
    inner: SetModel

    def __post_init__(self):
        object.__setattr__(self, "scale", as_fraction(self.scale))
        object.__setattr__(self, "offset", as_fraction(self.offset))
        if self.scale == 0:
            raise ValueError("affine scale must be nonzero")
        if self.inner.dim != 1:
            raise ValueError("affine images are one-dimensional only")

    def apply(self, x):
        return self.scale * x + self.offset

    def bounds(self):
        ((lo, hi),) = self.inner.bounds()
        a, b = self.apply(lo), self.apply(hi)
        return ((min(a, b), max(a, b)),)

    def meets(self, box, strict=True):
        (iv,) = box
        lo = (iv.lo - self.offset) / self.scale
        hi = (iv.hi - self.offset) / self.scale
        if self.scale > 0:
            pre = Interval(lo, hi, iv.lo_closed, iv.hi_closed)
        else:
            pre = Interval(hi, lo, iv.hi_closed, iv.lo_closed)
        return self.inner.meets((pre,), strict)

    def sample(self, budget):
        return [(self.apply(x),) for (x,) in self.inner.sample(budget)]


def cell_intersects(model, base, level, cell, *, strict=True):
    """Whether ``model`` meets the half-open b-adic cell with integer corner ``cell``.

    ``cell`` is an integer (1-D) or a sequence of integers, one per axis.
    """
    base = check_base(base)
    level = check_level(level)
    if isinstance(cell, int):
        cell = (cell,)
    cell = tuple(int(c) for c in cell)
    if len(cell) != model.dim:
        raise ValueError(
            f"cell has {len(cell)} coordinates but the set is {model.dim}-dimensional"
        )
    return model._cell(base, level, cell, strict)


def sample_points(model, budget):
    """At most ``budget`` exact points of ``model``, chosen deterministically."""
    if isinstance(budget, bool) or not isinstance(budget, int) or budget < 1:
        raise ValueError(f"budget must be a positive integer, got {budget!r}")
    return model.sample(budget)


@dataclass(frozen=True)
class Schedule:
    """Block lengths ``m`` and exponents ``t`` driving a complementary pair of digit sets.

    ``m[0] == 0`` and ``m`` strictly increases; ``t[j - 1]`` is the exponent
    for block index ``j >= 1`` and strictly decreases. For each ``j`` where the
    entries exist, the digits freed for the first set up to position
    ``m[2j]`` number at most ``t_j * m[2j]``, and those freed for the second
    set up to ``m[2j+1]`` number at most ``t_j * m[2j+1]``.
    """

    t: tuple
    m: tuple

    def __post_init__(self):
        t = tuple(as_fraction(x) for x in self.t)
        m = tuple(int(x) for x in self.m)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "m", m)
        if not m or m[0] != 0:
            raise ScheduleError("m must start with m_0 = 0")
        if any(b <= a for a, b in zip(m, m[1:])):
            raise ScheduleError("m must be strictly increasing")
        if any(x <= 0 for x in t):
            raise ScheduleError("t entries must be positive")
        if any(b >= a for a, b in zip(t, t[1:])):
            raise ScheduleError("t must be strictly decreasing")
        for j in range(1, len(t) + 1):
            if 2 * j < len(m) and self.first_sum(j) > t[j - 1] * m[2 * j]:
                raise ScheduleError(
                    f"constraint j={j}: sum of first-set blocks {self.first_sum(j)} "
                    f"> t_{j} * m_{2 * j} = {t[j - 1] * m[2 * j]}"
                )
            if 2 * j + 1 < len(m) and self.second_sum(j) > t[j - 1] * m[2 * j + 1]:
                raise ScheduleError(
                    f"constraint j={j}: sum of second-set blocks {self.second_sum(j)} "
                    f"> t_{j} * m_{2 * j + 1} = {t[j - 1] * m[2 * j + 1]}"
                )

    def first_sum(self, j):
        """``sum_{k<j} (m_{2k+1} - m_{2k})``: free digits of the first set up to ``m_{2j}``."""
        m = self.m
        return sum(m[2 * k + 1] - m[2 * k] for k in range(j))

    def second_sum(self, j):
        """``sum_{1<=k<=j} (m_{2k} - m_{2k-1})``: free digits of the second set up to ``m_{2j+1}``."""
        m = self.m
        return sum(m[2 * k] - m[2 * k - 1] for k in range(1, j + 1))

    @classmethod
    def minimal(cls, blocks, t=None):
        """Smallest schedule with ``m_1 = 1`` covering block indices ``1..blocks``.

        ``t`` maps ``j`` to ``t_j``; the default is ``1 / (j + 1)``.
        """
        t = t or (lambda j: Fraction(1, j + 1))
        ts = [as_fraction(t(j)) for j in range(1, blocks + 1)]
        m = [0, 1]
        for j in range(1, blocks + 1):
            first = sum(m[2 * k + 1] - m[2 * k] for k in range(j))
            m.append(max(m[-1] + 1, math.ceil(first / ts[j - 1])))
            second = sum(m[2 * k] - m[2 * k - 1] for k in range(1, j + 1))
            m.append(max(m[-1] + 1, math.ceil(second / ts[j - 1])))
        return cls(tuple(ts), tuple(m))


def schedule_to_digit_sets(schedule, depth):
    """Complementary base-10 digit sets driven by ``schedule``, to ``depth`` digits.

    The first set keeps digit positions in ``(m_{2i}, m_{2i+1}]`` free and
    zeroes ``(m_{2i+1}, m_{2i+2}]``; the second set does the opposite, so
    every position up to ``depth`` is free in exactly one of them.
    """
    depth = check_level(depth)
    if depth > schedule.m[-1]:
        raise ScheduleError(f"depth {depth} exceeds the schedule's last block end {schedule.m[-1]}")
    full = frozenset(range(10))
    zero = frozenset({0})
    first, second = [], []
    block = 0
    for r in range(1, depth + 1):
        while r > schedule.m[block + 1]:
            block += 1
        first_free = block % 2 == 0
        first.append(full if first_free else zero)
        second.append(zero if first_free else full)
    return DigitSet(10, tuple(first)), DigitSet(10, tuple(second))
