"""scikit-learn style wrapper around a model space.

``fit`` takes a curvature profile (text or :class:`CurvatureProfile`),
closes its warp and stores the model. ``transform`` maps radii to the
columns ``[f, f']`` and ``predict`` maps ball radii to first Dirichlet
eigenvalues.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils import column_or_1d
from sklearn.utils.validation import check_is_fitted

from .errors import DomainError
from .profile import CurvatureProfile, parse_profile
from .radial import lambda1_ball, model_space
from .theorem import DEFAULT_T_MAX, build_model
from .warp import check_admissibility, find_closing_length


class WarpedSpaceEstimator(TransformerMixin, BaseEstimator):
    """Warp and ball eigenvalues of the model space for one profile.

    Parameters
    ----------
    n : int
        Dimension of the model.
    m : int
        Angular index used by ``predict``.
    t_max : float
        Search range for the closing length.
    tol : float
        Integrator tolerance.
    require_closing : bool
        If True, ``fit`` rejects profiles whose warp does not close
        symmetrically. Otherwise a non-closing profile is integrated on
        ``[0, t_max]``.
    """

    def __init__(self, n=3, m=0, t_max=DEFAULT_T_MAX, tol=1e-10, require_closing=False):
        self.n = n
        self.m = m
        self.t_max = t_max
        self.tol = tol
        self.require_closing = require_closing

    def _validate(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"m must be a non-negative integer, got {self.m!r}")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")

    def fit(self, X, y=None):
        self._validate()
        profile = X if isinstance(X, CurvatureProfile) else parse_profile(str(X))
        if self.require_closing:
            model = build_model(profile, self.n, self.t_max, self.tol)
        else:
            closing = find_closing_length(profile, self.t_max, self.tol)
            length = closing.l if closing.closes else self.t_max
            model = model_space(profile, self.n, length, self.tol)
        self.profile_ = profile
        self.model_ = model
        self.closing_length_ = model.l if model.closes else None
        self.admissibility_ = check_admissibility(model.warp)
        return self

    def _radii(self, X, upper):
        t = column_or_1d(np.asarray(X, dtype=float).reshape(-1), warn=False)
        if np.any(~np.isfinite(t)) or np.any(t < 0) or np.any(t > upper):
            raise DomainError(f"radii must lie in [0, {upper}]")
        return t

    def transform(self, X):
        """Rows ``[f(t), f'(t)]`` for each radius in ``X``."""
        check_is_fitted(self, "model_")
        t = self._radii(X, self.model_.l)
        warp = self.model_.warp
        return np.column_stack([warp.f(t), warp.df(t)])

    def predict(self, X):
        """First Dirichlet eigenvalue of the ball of each radius in ``X``."""
        check_is_fitted(self, "model_")
        radii = self._radii(X, self.model_.l)
        if np.any(radii == 0):
            raise DomainError("ball radius must be positive")
        return np.array([lambda1_ball(self.model_, r, self.m, self.tol).lam for r in radii])
