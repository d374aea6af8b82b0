"""Input validation helpers shared by the engines, estimators and CLI."""
import numbers
import os
from fractions import Fraction

import numpy as np

DEFAULT_EXACT_CAP = 64
DEFAULT_CELL_CAP = 4096


def as_fraction(value):
    """Convert ``value`` to an exact :class:`Fraction`.

    Accepts ints, Fractions, ``"p/q"`` or decimal strings, and floats
    (converted exactly from their binary value).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    if isinstance(value, numbers.Real):
        value = float(value)
        if not np.isfinite(value):
            raise ValueError(f"not a finite number: {value!r}")
        return Fraction(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def format_fraction(value):
    """Canonical ``"p/q"`` text for a rational (``"p"`` when integral)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def check_point(point, dim=None):
    if isinstance(point, (str, numbers.Number)):
        point = (point,)
    point = tuple(as_fraction(c) for c in point)
    if not point:
        raise ValueError("empty coordinate vector")
    if dim is not None and len(point) != dim:
        raise ValueError(f"expected a {dim}-vector, got {len(point)} coordinates")
    return point


def check_points(X, *, max_dim=2, unit_box=False):
    """Validate a point collection and return it as exact tuples.

    ``X`` may be a numpy array of shape (n_points, n_dims), a 1-D array
    (treated as points on the line) or any nested sequence of numbers or
    ``"p/q"`` strings. All points must share one dimension ``<= max_dim``.
    """
    if isinstance(X, np.ndarray):
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2:
            raise ValueError(f"expected a 2-D array of points, got ndim={X.ndim}")
        X = X.tolist()
    points = [check_point(p) for p in X]
    if not points:
        return []
    dim = len(points[0])
    if any(len(p) != dim for p in points):
        raise ValueError("points have inconsistent dimensions")
    if dim > max_dim:
        raise ValueError(f"only dimensions <= {max_dim} are supported, got {dim}")
    if unit_box:
        for p in points:
            if any(c < 0 or c > 1 for c in p):
                raise ValueError(f"point {p} lies outside the unit box")
    return points


def check_positive_rational(value, name="value"):
    value = as_fraction(value)
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def check_base(base):
    if isinstance(base, bool) or not isinstance(base, numbers.Integral) or base < 2:
        raise ValueError(f"base must be an integer >= 2, got {base!r}")
    return int(base)


def check_level(level):
    if isinstance(level, bool) or not isinstance(level, numbers.Integral) or level < 0:
        raise ValueError(f"level must be a non-negative integer, got {level!r}")
    return int(level)


def _env_cap(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    cap = int(raw)
    if cap <= 0:
        raise ValueError(f"{name} must be positive")
    return cap


def default_exact_cap():
    """Largest point count for exhaustive covers (``HSDIM_EXACT_CAP``)."""
    return _env_cap("HSDIM_EXACT_CAP", DEFAULT_EXACT_CAP)


def default_cell_cap():
    """Largest cube count whose cells are listed (``HSDIM_CELL_CAP``)."""
    return _env_cap("HSDIM_CELL_CAP", DEFAULT_CELL_CAP)
