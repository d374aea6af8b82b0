"""scikit-learn compatible wrappers around the profile and dimension routines.

``fit`` takes one set, either a :class:`~hsdim.sets.SetModel` or an array of
points with shape ``(n_points, n_dims)``, and stores its profile and slope::

    est = CubeCountingDimension(base=3, levels=range(1, 9)).fit(cantor)
    est.dimension_   # ~0.6309
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .measures import estimate_dimension, premeasure_profile
from .sets import FinitePoints, SetModel
from .validation import check_points


def check_set(X):
    """Return ``X`` as a set model, converting point arrays exactly."""
    if isinstance(X, SetModel):
        return X
    points = check_points(X, unit_box=True)
    if not points:
        raise ValueError("cannot fit an empty point set")
    return FinitePoints(tuple(points))


class _ProfileDimension(TransformerMixin, BaseEstimator):
    def _profile(self, model):
        raise NotImplementedError

    def fit(self, X, y=None):
        model = check_set(X)
        self.profile_ = self._profile(model)
        self.estimate_ = estimate_dimension(self.profile_, self.fit_mode)
        self.dimension_ = self.estimate_.slope
        self.scales_ = np.array([float(s) for s in self.profile_.scales])
        self.counts_ = list(self.profile_.counts)
        self.n_features_in_ = model.dim
        return self

    def transform(self, X):
        """Premeasure values of ``X``, shape ``(n_scales, n_exponents)``."""
        check_is_fitted(self, "profile_")
        profile = self._profile(check_set(X))
        return np.column_stack([profile.float_values(t) for t in profile.t_grid])

    def premeasure(self, t):
        """Premeasure values of the fitted set at exponent ``t``, one per scale."""
        check_is_fitted(self, "profile_")
        return self.profile_.float_values(t)


class CubeCountingDimension(_ProfileDimension):
    """Box-counting slope from b-adic cell counts.

    Parameters
    ----------
    base : int
        Grid base; cells have side ``base**-k``.
    levels : iterable of int
        Grid levels to count at.
    t_grid : sequence
        Exponents for :meth:`transform`.
    fit_mode : {"all", "liminf"}
        Fit on every level, or only on the liminf witness levels.
    strict : bool
        Raise instead of answering for the truncation when a digit set is
        queried beyond its materialized depth.
    """

    def __init__(self, base=2, levels=(1, 2, 3, 4, 5, 6), t_grid=(0,), fit_mode="all", strict=True):
        self.base = base
        self.levels = levels
        self.t_grid = t_grid
        self.fit_mode = fit_mode
        self.strict = strict

    def _profile(self, model):
        return premeasure_profile(
            model, "cube", list(self.levels), self.t_grid, base=self.base, strict=self.strict
        )


class BallCoveringDimension(_ProfileDimension):
    """Slope of the equal-radius ball covering numbers ``N_r`` (centres in the set).

    ``radii`` is a list of radii, or the string ``"deltas"`` for harmonic
    sets. Sets that are not finite are sampled with ``budget`` points.
    """

    def __init__(self, radii="deltas", t_grid=(0,), mode="auto", exact_cap=None, budget=4096, fit_mode="all"):
        self.radii = radii
        self.t_grid = t_grid
        self.mode = mode
        self.exact_cap = exact_cap
        self.budget = budget
        self.fit_mode = fit_mode

    def _profile(self, model):
        return premeasure_profile(
            model,
            "ball",
            self.radii,
            self.t_grid,
            mode=self.mode,
            exact_cap=self.exact_cap,
            budget=self.budget,
        )
