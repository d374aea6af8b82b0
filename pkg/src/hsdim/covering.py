"""Cube counts, ball covers and packings with exact arithmetic.

Two covering numbers are computed here:

* ``N*_{b^-k}(E)``, the number of half-open b-adic cells of side ``b^-k``
  meeting ``E`` (for a grid the minimal cover is exactly the set of cells hit);
* ``N_r(E)``, the least number of closed balls of radius ``r`` centred in
  ``E`` covering a finite ``E``. Greedy covers give upper bounds, 2r-separated
  subsets lower bounds, and a branch-and-bound search the exact value.

All distances are compared squared, so radii only need rational squares.
"""
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .sets import DigitSet, FinitePoints, HarmonicTail, Product
from .validation import (
    as_fraction,
    check_base,
    check_level,
    check_points,
    default_cell_cap,
    default_exact_cap,
    format_fraction,
)


class ExactCapError(ValueError):
    """Exhaustive search requested on more points than the configured cap."""


class ResourceCapError(RuntimeError):
    """A cell subdivision visited more cells than allowed."""


@dataclass(frozen=True)
class CubeCoverResult:
    base: int
    level: int
    count: int
    cells: tuple = None
    method: str = "closed"

    @property
    def side(self):
        return Fraction(1, self.base**self.level)

    def to_json(self):
        doc = {
            "base": self.base,
            "level": self.level,
            "count": self.count,
            "method": self.method,
        }
        if self.cells is not None:
            doc["cells"] = [list(c) for c in self.cells]
        return doc


def _closed_form(model, base, level, strict):
    """Count and, lazily, cells for models with a factorized count; None otherwise."""
    if isinstance(model, (FinitePoints, HarmonicTail)):
        fp = model.finite if isinstance(model, HarmonicTail) else model
        cells = sorted({fp.cell_of(p, base, level) for p in fp.points})
        return len(cells), lambda: cells
    if isinstance(model, DigitSet) and model.base == base:
        d = model.depth
        if level > d and strict:
            return None
        digits = [sorted(a) for a in model.allowed[: min(level, d)]]
        extra = level - min(level, d)
        count = model.prefix_count(min(level, d)) * base**extra

        def cells():
            out = []
            for head in itertools.product(*digits):
                p = 0
                for digit in head:
                    p = p * base + digit
                for tail in range(base**extra):
                    out.append((p * base**extra + tail,))
            return out

        return count, cells
    if isinstance(model, Product):
        left = _closed_form(model.left, base, level, strict)
        right = _closed_form(model.right, base, level, strict)
        if left is None or right is None:
            return None
        return left[0] * right[0], lambda: [p + q for p in left[1]() for q in right[1]()]
    return None


def _root_cells(model, base):
    spans = []
    for lo, hi in model.bounds():
        spans.append(range(math.floor(lo), math.floor(hi) + 1))
    return [tuple(c) for c in itertools.product(*spans)]


def _subdivide(model, base, level, strict, work_cap):
    frontier = [c for c in _root_cells(model, base) if model._cell(base, 0, c, strict)]
    visited = len(frontier)
    for k in range(1, level + 1):
        nxt = []
        offsets = list(itertools.product(range(base), repeat=model.dim))
        for parent in frontier:
            for off in offsets:
                child = tuple(p * base + o for p, o in zip(parent, off))
                visited += 1
                if model._cell(base, k, child, strict):
                    nxt.append(child)
            if work_cap is not None and visited > work_cap:
                raise ResourceCapError(
                    f"subdivision visited more than {work_cap} cells at level {k}"
                )
        frontier = nxt
    return sorted(frontier)


def cube_count(model, base, level, *, method="auto", cell_cap=None, strict=True, work_cap=None):
    """Number of level-``level`` b-adic cells meeting ``model``.

    ``method`` is ``"closed"`` (factorized digit/product counts, falling back
    to subdivision when no closed form applies), ``"subdivide"`` (recursive
    refinement pruned by cell membership) or ``"auto"`` (same as closed).
    Cells are listed only when the count is at most ``cell_cap``.
    """
    base = check_base(base)
    level = check_level(level)
    cell_cap = default_cell_cap() if cell_cap is None else cell_cap
    if method not in ("auto", "closed", "subdivide"):
        raise ValueError(f"unknown method {method!r}")
    closed = None if method == "subdivide" else _closed_form(model, base, level, strict)
    if closed is not None:
        count, cells = closed
        listed = tuple(sorted(cells())) if count <= cell_cap else None
        return CubeCoverResult(base, level, count, listed, "closed")
    cells = _subdivide(model, base, level, strict, work_cap)
    listed = tuple(cells) if len(cells) <= cell_cap else None
    return CubeCoverResult(base, level, len(cells), listed, "subdivide")


def _sqdist(p, q):
    return sum((a - b) ** 2 for a, b in zip(p, q))


def _radius_sq(r, r_squared):
    if (r is None) == (r_squared is None):
        raise ValueError("give exactly one of r and r_squared")
    if r is not None:
        r = as_fraction(r)
        if r <= 0:
            raise ValueError("radius must be positive")
        return r * r
    r_squared = as_fraction(r_squared)
    if r_squared <= 0:
        raise ValueError("squared radius must be positive")
    return r_squared


def _radius_from_sq(r2):
    num, den = math.isqrt(r2.numerator), math.isqrt(r2.denominator)
    if num * num == r2.numerator and den * den == r2.denominator:
        return Fraction(num, den)
    return None


def _radius_json(r2):
    r = _radius_from_sq(r2)
    return format_fraction(r) if r is not None else math.sqrt(r2)


@dataclass(frozen=True)
class BallCoverCertificate:
    """Bounds ``lower <= N_r(E) <= upper`` backed by explicit point lists.

    ``centers`` is a cover by closed balls of radius ``r`` centred in ``E``;
    ``witnesses`` is a subset of ``E`` with pairwise distances above ``2r``,
    so no ball of radius ``r`` holds two of them.
    """

    radius_sq: Fraction
    upper: int
    lower: int
    exact: bool
    centers: tuple
    witnesses: tuple

    @property
    def radius(self):
        """The radius as a Fraction, or None when it is irrational."""
        return _radius_from_sq(self.radius_sq)

    @property
    def value(self):
        """``N_r(E)`` when it is established, else None."""
        if self.exact or self.lower == self.upper:
            return self.upper
        return None

    def to_json(self):
        return {
            "radius": _radius_json(self.radius_sq),
            "radius_sq": format_fraction(self.radius_sq),
            "upper": self.upper,
            "lower": self.lower,
            "exact": self.exact,
            "centers": [[format_fraction(c) for c in p] for p in self.centers],
            "witnesses": [[format_fraction(c) for c in p] for p in self.witnesses],
        }


def _prepare(points):
    return sorted(set(check_points(points)))


def _integerize(points):
    """Scale points to integer coordinates; returns (int points, common denominator)."""
    den = math.lcm(*(c.denominator for p in points for c in p)) if points else 1
    return [tuple(c.numerator * (den // c.denominator) for c in p) for p in points], den


def _floor(x):
    return x.numerator // x.denominator


def _ceil(x):
    return -((-x.numerator) // x.denominator)


def _farthest_point_cover(ipts, lim):
    """Farthest-point traversal from the first point; stops once every squared distance is ``<= lim``."""
    if not ipts:
        return []
    centers = [0]
    dist = [_sqdist(p, ipts[0]) for p in ipts]
    while True:
        far = max(range(len(ipts)), key=lambda i: (dist[i], -i))
        if dist[far] <= lim:
            return centers
        centers.append(far)
        q = ipts[far]
        dist = [min(d, _sqdist(p, q)) for d, p in zip(dist, ipts)]


def _separated_subset(ipts, lim, strict=True):
    """Greedy maximal subset, in order, with pairwise squared distance ``> lim`` (``>= lim`` if not strict)."""
    chosen = []
    for i, p in enumerate(ipts):
        if strict:
            ok = all(_sqdist(p, ipts[j]) > lim for j in chosen)
        else:
            ok = all(_sqdist(p, ipts[j]) >= lim for j in chosen)
        if ok:
            chosen.append(i)
    return chosen


def _masks(ipts, lim):
    n = len(ipts)
    masks = [0] * n
    for i in range(n):
        for j in range(i, n):
            if _sqdist(ipts[i], ipts[j]) <= lim:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _disjoint_lower_bound(uncovered, masks):
    """Points of ``uncovered`` no single center covers two of; a valid lower bound."""
    used = 0
    count = 0
    for j in _bits(uncovered):
        if masks[j] & used == 0:
            used |= masks[j]
            count += 1
    return count


def minimum_cover(masks, initial):
    """Exact minimum number of masks whose union is everything (branch and bound).

    ``masks[i]`` is the set of points covered by a center at point ``i``; by
    symmetry it is also the set of centers covering point ``i``.
    ``initial`` is a known feasible solution (list of indices).
    """
    n = len(masks)
    full = (1 << n) - 1
    best = [list(initial)]

    def search(uncovered, chosen):
        if uncovered == 0:
            if len(chosen) < len(best[0]):
                best[0] = list(chosen)
            return
        if len(chosen) + _disjoint_lower_bound(uncovered, masks) >= len(best[0]):
            return
        pivot = min(_bits(uncovered), key=lambda j: (bin(masks[j]).count("1"), j))
        options = sorted(
            _bits(masks[pivot]), key=lambda c: (-bin(masks[c] & uncovered).count("1"), c)
        )
        for c in options:
            chosen.append(c)
            search(uncovered & ~masks[c], chosen)
            chosen.pop()

    search(full, [])
    return sorted(best[0])


def ball_cover(points, r=None, *, r_squared=None, mode="greedy", exact_cap=None):
    """Certificate for ``N_r`` of a finite point set (closed balls centred in the set).

    ``mode="exact"`` runs branch and bound and raises :class:`ExactCapError`
    when there are more than ``exact_cap`` distinct points.
    """
    r2 = _radius_sq(r, r_squared)
    pts = _prepare(points)
    if mode not in ("greedy", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    exact_cap = default_exact_cap() if exact_cap is None else exact_cap
    if mode == "exact" and len(pts) > exact_cap:
        raise ExactCapError(f"{len(pts)} points exceed the exact-cover cap {exact_cap}")
    if not pts:
        return BallCoverCertificate(r2, 0, 0, True, (), ())
    ipts, den = _integerize(pts)
    lim = _floor(r2 * den * den)
    centers = _farthest_point_cover(ipts, lim)
    witnesses = _separated_subset(ipts, _floor(4 * r2 * den * den))
    exact = len(centers) == len(witnesses)
    if mode == "exact" and not exact:
        centers = minimum_cover(_masks(ipts, lim), centers)
        exact = True
    return BallCoverCertificate(
        radius_sq=r2,
        upper=len(centers),
        lower=len(centers) if exact else len(witnesses),
        exact=exact,
        centers=tuple(pts[i] for i in sorted(centers)),
        witnesses=tuple(pts[i] for i in witnesses),
    )


@dataclass(frozen=True)
class PackingResult:
    """Centers with pairwise distance at least ``r`` (equal-radius packing condition)."""

    radius: Fraction
    count: int
    centers: tuple
    exact: bool

    def to_json(self):
        return {
            "radius": format_fraction(self.radius),
            "count": self.count,
            "exact": self.exact,
            "centers": [[format_fraction(c) for c in p] for p in self.centers],
        }


def maximum_independent_set(conflicts):
    """Largest index set with no two members in conflict (bitmask branch and bound)."""
    n = len(conflicts)
    best = [0]
    best_set = [0]

    def search(cand, size, chosen):
        if cand == 0:
            if size > best[0]:
                best[0], best_set[0] = size, chosen
            return
        if size + bin(cand).count("1") <= best[0]:
            return
        v = (cand & -cand).bit_length() - 1
        search(cand & ~conflicts[v] & ~(1 << v), size + 1, chosen | (1 << v))
        if conflicts[v] & cand:
            search(cand & ~(1 << v), size, chosen)

    search((1 << n) - 1, 0, 0)
    return list(_bits(best_set[0]))


def packing_number(points, r, *, exact_cap=None):
    """Maximal subset whose points are pairwise at distance ``>= r``.

    Exact (maximum) up to ``exact_cap`` points, greedy maximal beyond.
    """
    r = as_fraction(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    pts = _prepare(points)
    exact_cap = default_exact_cap() if exact_cap is None else exact_cap
    ipts, den = _integerize(pts)
    lim = _ceil(r * r * den * den)
    if len(pts) > exact_cap:
        chosen = _separated_subset(ipts, lim, strict=False)
        exact = False
    else:
        conflicts = [0] * len(pts)
        for i, j in itertools.combinations(range(len(pts)), 2):
            if _sqdist(ipts[i], ipts[j]) < lim:
                conflicts[i] |= 1 << j
                conflicts[j] |= 1 << i
        chosen = maximum_independent_set(conflicts)
        exact = True
    return PackingResult(r, len(chosen), tuple(pts[i] for i in sorted(chosen)), exact)


@dataclass(frozen=True)
class BallFamily:
    """Explicit family of closed balls, with the coverage check that was run on it."""

    dim: int
    radius: Fraction
    centers: tuple
    bound: int
    per_axis: int
    covered: bool
    net_size: int

    @property
    def count(self):
        return len(self.centers)

    def to_json(self):
        return {
            "dim": self.dim,
            "radius": format_fraction(self.radius),
            "count": self.count,
            "bound": self.bound,
            "per_axis": self.per_axis,
            "covered": self.covered,
            "net_size": self.net_size,
            "centers": [[format_fraction(c) for c in p] for p in self.centers],
        }


def _ceil_scaled_sqrt(ratio, n):
    """Smallest integer ``m`` with ``m >= ratio * sqrt(n)``, exactly."""
    target = ratio * ratio * n
    m = math.isqrt(target.numerator // target.denominator)
    while m * m < target:
        m += 1
    while m > 0 and (m - 1) ** 2 >= target:
        m -= 1
    return m


def _tile_centers(corner, side, m, n):
    step = side / m
    axis = [[c + (i + Fraction(1, 2)) * step for i in range(m)] for c in corner]
    return [tuple(p) for p in itertools.product(*axis)]


def _grid(corner, side, steps):
    h = side / steps
    axis = [[c + i * h for i in range(steps + 1)] for c in corner]
    return itertools.product(*axis)


def _covered(net, centers, r2):
    return all(any(_sqdist(p, c) <= r2 for c in centers) for p in net)


def _circle_points(center, radius, resolution):
    """Rational points on a circle via the tangent half-angle parametrization."""
    cx, cy = center
    out = [(cx - radius, cy)]
    for i in range(-resolution, resolution + 1):
        u = Fraction(i, resolution)
        den = 1 + u * u
        out.append((cx + radius * (1 - u * u) / den, cy + radius * 2 * u / den))
    for i in range(-resolution, resolution + 1):
        u = Fraction(i, resolution)
        den = 1 + u * u
        out.append((cx - radius * (1 - u * u) / den, cy + radius * 2 * u / den))
    return out


def cover_ball_by_smaller(n, delta, gamma, center=None):
    """Cover a closed ball of diameter ``delta`` by balls of diameter ``gamma``.

    The ball is enclosed in a cube of side ``delta`` which is tiled into
    ``m = ceil(delta * sqrt(n) / gamma)`` slabs per axis; each tile has
    diameter at most ``gamma`` and gets the ball of diameter ``gamma`` around
    its centre. Coverage is checked on an exact witness net of spacing
    ``delta / (4m) <= gamma / (4 sqrt(n))`` plus rational boundary points.
    """
    if n not in (1, 2):
        raise ValueError("only n = 1 and n = 2 are supported")
    delta, gamma = as_fraction(delta), as_fraction(gamma)
    if not 0 < gamma < delta:
        raise ValueError(f"need 0 < gamma < delta, got gamma={gamma}, delta={delta}")
    center = tuple(as_fraction(c) for c in center) if center else (Fraction(0),) * n
    m = _ceil_scaled_sqrt(delta / gamma, n)
    corner = tuple(c - delta / 2 for c in center)
    centers = _tile_centers(corner, delta, m, n)
    big_r2 = (delta / 2) ** 2
    small_r2 = (gamma / 2) ** 2
    net = [p for p in _grid(corner, delta, 4 * m) if _sqdist(p, center) <= big_r2]
    if n == 1:
        net += [(center[0] - delta / 2,), (center[0] + delta / 2,)]
    else:
        net += _circle_points(center, delta / 2, 4 * m)
    return BallFamily(
        dim=n,
        radius=gamma / 2,
        centers=tuple(centers),
        bound=m**n,
        per_axis=m,
        covered=_covered(net, centers, small_r2),
        net_size=len(net),
    )


def cover_cube_by_balls(n, side, corner=None):
    """Cover the closed cube ``corner + [0, side]^n`` by ``(2n)^n`` balls of diameter ``side / 2``.

    Each axis is split into ``2n`` slabs; a tile then has diameter
    ``side * sqrt(n) / (2n) <= side / 2``.
    """
    if n not in (1, 2):
        raise ValueError("only n = 1 and n = 2 are supported")
    side = as_fraction(side)
    corner = tuple(as_fraction(c) for c in corner) if corner else (Fraction(0),) * n
    m = 2 * n
    centers = _tile_centers(corner, side, m, n)
    net = list(_grid(corner, side, 4 * m))
    return BallFamily(
        dim=n,
        radius=side / 4,
        centers=tuple(centers),
        bound=(2 * n) ** n,
        per_axis=m,
        covered=_covered(net, centers, (side / 4) ** 2),
        net_size=len(net),
    )
