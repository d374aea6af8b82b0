"""Premeasure profiles, liminf proxies and log-log dimension fits.

A profile holds, for a decreasing list of scales, the covering counts and the
per-exponent values ``count * gauge^t`` where the gauge is ``2r`` for ball
covers of radius ``r`` and the cell side ``b^-k`` for cube covers. Counts,
scales and exponents are stored exactly; values are produced on demand as
exact sympy numbers (or floats for fitting and display).
"""
import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy as sp

from .covering import ExactCapError, ball_cover, cube_count
from .sets import FinitePoints, HarmonicTail, SetModel, sample_points
from .validation import (
    as_fraction,
    check_base,
    check_level,
    default_exact_cap,
    format_fraction,
)


def as_exponent(t):
    """Exact non-negative exponent; strings such as ``"log(2)/log(3)"`` are parsed by sympy."""
    if isinstance(t, sp.Basic):
        value = t
    elif isinstance(t, Fraction):
        value = sp.Rational(t.numerator, t.denominator)
    elif isinstance(t, int):
        value = sp.Integer(t)
    elif isinstance(t, float):
        value = sp.Rational(repr(t))
    else:
        value = sp.sympify(t, rational=True)
    if not value.is_real or value.is_negative or value.evalf() < 0:
        raise ValueError(f"exponent must be a non-negative real, got {t!r}")
    return value


def _rat(x):
    return sp.Rational(x.numerator, x.denominator)


def _log(x):
    x = Fraction(x)
    return math.log(x.numerator) - math.log(x.denominator)


def harmonic_deltas(n_max, n_min=2):
    """Radii ``1 / (n + n^2)`` for ``n = n_min..n_max`` (decreasing)."""
    return [Fraction(1, n + n * n) for n in range(n_min, n_max + 1)]


@dataclass(frozen=True)
class PremeasureProfile:
    """Counts and premeasure values over a decreasing sequence of scales."""

    kind: str
    scales: tuple
    counts: tuple
    lower: tuple
    upper: tuple
    t_grid: tuple
    exact: tuple = None
    base: int = None

    def __post_init__(self):
        if self.kind not in ("ball", "cube"):
            raise ValueError(f"kind must be 'ball' or 'cube', got {self.kind!r}")
        if any(b >= a for a, b in zip(self.scales, self.scales[1:])):
            raise ValueError("scales must be strictly decreasing")
        if not (len(self.scales) == len(self.counts) == len(self.lower) == len(self.upper)):
            raise ValueError("scales and counts differ in length")

    def gauge(self, i):
        """Argument of the gauge function at scale ``i``: ``2r`` or ``b^-k``."""
        return 2 * self.scales[i] if self.kind == "ball" else self.scales[i]

    def value(self, t, i, which="count"):
        """Exact ``count * gauge^t`` at scale index ``i``; ``which`` picks count, lower or upper."""
        count = {"count": self.counts, "lower": self.lower, "upper": self.upper}[which][i]
        return sp.Integer(count) * _rat(self.gauge(i)) ** as_exponent(t)

    def values(self, t, which="count"):
        return [self.value(t, i, which) for i in range(len(self.scales))]

    def float_values(self, t, which="count"):
        """Values as floats, computed in log space."""
        counts = {"count": self.counts, "lower": self.lower, "upper": self.upper}[which]
        tf = float(as_exponent(t))
        return np.array(
            [
                math.exp(math.log(c) + tf * _log(self.gauge(i))) if c > 0 else 0.0
                for i, c in enumerate(counts)
            ]
        )

    def count_rows(self):
        """Rows ``(scale, count, lower, upper)`` in scale order."""
        return [
            (format_fraction(s), c, lo, hi)
            for s, c, lo, hi in zip(self.scales, self.counts, self.lower, self.upper)
        ]

    def value_rows(self):
        """Rows ``(t, scale, value)``; values are floats of the exact numbers."""
        rows = []
        for t in self.t_grid:
            for i, s in enumerate(self.scales):
                rows.append((str(t), format_fraction(s), float(self.value(t, i).evalf(30))))
        return rows

    def write_counts_csv(self, fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["scale", "count", "lower", "upper"])
        writer.writerows(self.count_rows())

    def write_values_csv(self, fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "scale", "value"])
        for t, s, v in self.value_rows():
            writer.writerow([t, s, repr(v)])


def _finite_points(model, budget):
    if isinstance(model, HarmonicTail):
        return list(model.points)
    if isinstance(model, FinitePoints):
        return list(model.points)
    return sample_points(model, budget)


def _ball_certificate(points, r, mode, exact_cap):
    if mode == "greedy":
        return ball_cover(points, r, mode="greedy")
    try:
        return ball_cover(points, r, mode="exact", exact_cap=exact_cap)
    except ExactCapError:
        if mode == "exact":
            raise
        return ball_cover(points, r, mode="greedy")


def premeasure_profile(
    model,
    kind,
    scales,
    t_grid=(0,),
    *,
    base=None,
    mode="auto",
    budget=4096,
    exact_cap=None,
    strict=True,
):
    """Tabulate covering counts and premeasure values.

    For ``kind="cube"`` the scales are grid levels and ``base`` is required.
    For ``kind="ball"`` they are radii; the string ``"deltas"`` (harmonic sets
    only) pairs each radius ``1/(n+n^2)`` with the truncation ``{0, 1, ..., 1/n}``.
    Infinite models are replaced by ``sample_points(model, budget)`` on the
    ball side. ``mode`` is ``"exact"``, ``"greedy"`` or ``"auto"`` (exact when
    the point count is within ``exact_cap``).
    """
    if not isinstance(model, SetModel):
        model = FinitePoints(tuple(model))
    t_grid = tuple(as_exponent(t) for t in t_grid)
    exact_cap = default_exact_cap() if exact_cap is None else exact_cap
    if kind == "cube":
        if base is None:
            raise ValueError("cube profiles need a base")
        base = check_base(base)
        levels = sorted({check_level(k) for k in scales})
        if not levels:
            raise ValueError("scale list is empty")
        counts = [cube_count(model, base, k, strict=strict, cell_cap=0).count for k in levels]
        return PremeasureProfile(
            kind="cube",
            scales=tuple(Fraction(1, base**k) for k in levels),
            counts=tuple(counts),
            lower=tuple(counts),
            upper=tuple(counts),
            t_grid=t_grid,
            exact=(True,) * len(counts),
            base=base,
        )
    if kind != "ball":
        raise ValueError(f"kind must be 'ball' or 'cube', got {kind!r}")
    if isinstance(scales, str):
        if scales != "deltas" or not isinstance(model, HarmonicTail):
            raise ValueError("the 'deltas' scale spec applies to harmonic sets only")
        ns = range(2, model.n_max + 1)
        jobs = [(Fraction(1, n + n * n), list(model.truncate(n).points)) for n in ns]
        cap = max(exact_cap, model.n_max + 1)
    else:
        radii = sorted({as_fraction(r) for r in scales}, reverse=True)
        if not radii or radii[-1] <= 0:
            raise ValueError("radii must be positive and nonempty")
        pts = _finite_points(model, budget)
        jobs = [(r, pts) for r in radii]
        cap = exact_cap
    if not jobs:
        raise ValueError("scale list is empty")
    certs = [_ball_certificate(pts, r, mode, cap) for r, pts in jobs]
    return PremeasureProfile(
        kind="ball",
        scales=tuple(r for r, _ in jobs),
        counts=tuple(c.upper for c in certs),
        lower=tuple(c.lower for c in certs),
        upper=tuple(c.upper for c in certs),
        t_grid=t_grid,
        exact=tuple(c.exact for c in certs),
    )


def _compare(a, b):
    """Sign of ``a - b`` for exact sympy numbers (ties decided at 60 digits)."""
    diff = a - b
    if diff == 0:
        return 0
    approx = sp.N(diff, 60)
    scale = max(1, abs(sp.N(a, 20)), abs(sp.N(b, 20)))
    if abs(approx) < sp.Float("1e-45") * scale:
        return 0
    return 1 if approx > 0 else -1


def _suffix_minima(values, cmp):
    witness = []
    best = None
    for i in range(len(values) - 1, -1, -1):
        if best is None or cmp(values[i], best) <= 0:
            witness.append(i)
            best = values[i]
    return sorted(witness)


@dataclass(frozen=True)
class LiminfEstimate:
    """Tail minimum of a premeasure sequence with the scales that witness it.

    This is a finite-scale proxy; it makes no claim about convergence.
    """

    t: object
    value: object
    index: int
    scale: Fraction
    witness: tuple
    tail_start: int

    @property
    def approx(self):
        return float(sp.N(self.value, 30))

    def to_json(self):
        return {
            "t": str(self.t),
            "value": self.approx,
            "exact_value": str(self.value),
            "index": self.index,
            "scale": format_fraction(self.scale),
            "witness": list(self.witness),
            "tail_start": self.tail_start,
            "estimate": True,
        }


def liminf_value(profile, t, tail=0.5):
    """Minimum of ``count * gauge^t`` over the last ``tail`` fraction of the scales.

    The witness subsequence lists the scales whose value is no larger than
    every value at a finer scale.
    """
    n = len(profile.scales)
    if n < 3:
        raise ValueError("liminf needs at least 3 scales")
    if not 0 < tail <= 1:
        raise ValueError("tail must lie in (0, 1]")
    t = as_exponent(t)
    values = profile.values(t)
    start = n - max(1, math.ceil(n * tail))
    best = start
    for i in range(start + 1, n):
        if _compare(values[i], values[best]) < 0:
            best = i
    witness = _suffix_minima(values, _compare)
    return LiminfEstimate(t, values[best], best, profile.scales[best], tuple(witness), start)


@dataclass(frozen=True)
class DimensionEstimate:
    """Least-squares slope of ``log count`` against ``log(1/scale)``."""

    slope: float
    intercept: float
    residual: float
    window: tuple
    mode: str
    indices: tuple

    def to_json(self):
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "window": [format_fraction(s) for s in self.window],
            "mode": self.mode,
            "indices": list(self.indices),
            "n_points": len(self.indices),
            "label": "premeasure-based",
        }


def estimate_dimension(profile, mode="all"):
    """Fit the box-counting slope of a profile.

    ``mode="all"`` uses every scale; ``mode="liminf"`` keeps only the scales
    where ``log count / log(1/scale)`` is no larger than at any finer scale,
    which tracks the lower (liminf) growth rate of oscillating counts.
    """
    if mode not in ("all", "liminf"):
        raise ValueError(f"mode must be 'all' or 'liminf', got {mode!r}")
    n = len(profile.scales)
    if n < 4:
        raise ValueError("dimension estimates need at least 4 scales")
    x = np.array([-_log(s) for s in profile.scales])
    y = np.array([math.log(c) if c > 0 else -math.inf for c in profile.counts])
    if not np.all(np.isfinite(y)):
        raise ValueError("profile contains empty covers")
    idx = list(range(n))
    if mode == "liminf":
        usable = [i for i in idx if x[i] > 0]
        ratios = [float(y[i] / x[i]) for i in usable]
        idx = _suffix_minima(ratios, lambda a, b: int(a > b) - int(a < b))
        idx = [usable[i] for i in idx]
    window = (profile.scales[idx[0]], profile.scales[idx[-1]])
    xs, ys = x[idx], y[idx]
    if np.all(ys == ys[0]):
        return DimensionEstimate(0.0, float(ys[0]), 0.0, window, mode, tuple(idx))
    if len(idx) < 2 or np.ptp(xs) == 0:
        slope = float(ys[-1] / xs[-1])
        return DimensionEstimate(slope, 0.0, 0.0, window, mode, tuple(idx))
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = float(np.max(np.abs(ys - (slope * xs + intercept))))
    return DimensionEstimate(float(slope), float(intercept), residual, window, mode, tuple(idx))
