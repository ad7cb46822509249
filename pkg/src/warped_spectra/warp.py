"""Warping function f of the model metric dt^2 + f(t)^2 |dxi|^2.

f solves the linear initial value problem f'' + k f = 0, f(0) = 0, f'(0) = 1.
Stepping is done by scipy's DOP853 (8th order, embedded error estimate).
The dense representation is a piecewise quintic Hermite interpolant through
(f, f', f'' = -k f) at every accepted step; the step size is capped at
``STEP_CAP / sqrt|k|`` so that the interpolant's second derivative stays
well inside the integrator tolerance.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import DOP853
from scipy.interpolate import BPoly, PPoly
from scipy.optimize import brentq

from .errors import DomainError, IntegrationError, ProfileEvaluationError
from .profile import evaluate

DEFAULT_TOL = 1e-10
STEP_CAP = 0.02
# bound on |f_interp - f_true| relative to the integrator tolerance
INTERPOLATION_CONSTANT = 10.0

_SLACK = 1e-12


def _check_tolerance(tolerance):
    if not 1e-13 <= tolerance <= 1e-4:
        raise ValueError(f"tolerance must lie in [1e-13, 1e-4], got {tolerance}")


def _step_cap(k, length):
    cap = length / 32.0
    if k != 0.0:
        cap = min(cap, STEP_CAP / math.sqrt(abs(k)))
    return cap


def _march(profile, t_end, tolerance, y0=(0.0, 1.0), stop_at_zero=False):
    """Integrate y'' = -k y from t=0. Returns (t, y, y', k) node arrays and the
    first downward zero of y (or None). With ``stop_at_zero`` the march ends there."""

    def k_at(t):
        k = profile._scalar(t)
        if not math.isfinite(k):
            raise ProfileEvaluationError(f"profile {profile.text!r} is not finite at t={t!r}")
        return k

    def rhs(t, y):
        return np.array([y[1], -k_at(t) * y[0]])

    k0 = evaluate(profile, 0.0)
    evaluate(profile, t_end)  # domain check for the whole march
    solver = DOP853(
        rhs, 0.0, np.array(y0, dtype=float), t_end,
        rtol=tolerance, atol=tolerance * 1e-2, max_step=_step_cap(k0, t_end),
    )
    ts, fs, dfs, ks = [0.0], [float(y0[0])], [float(y0[1])], [k0]
    root = None
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise IntegrationError(f"warp integration failed near t={solver.t:.6g}: {message}")
        t, (f, df) = solver.t, solver.y
        if root is None and fs[-1] > 0.0 and f <= 0.0 and ts[-1] > 0.0:
            dense = solver.dense_output()
            a = ts[-1]
            root = t if f == 0.0 else brentq(lambda s: dense(s)[0], a, t, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            if stop_at_zero:
                if root > a:
                    f, df = dense(root)
                    ts.append(root)
                    fs.append(float(f))
                    dfs.append(float(df))
                    ks.append(k_at(root))
                break
        kt = k_at(t)
        ts.append(t)
        fs.append(float(f))
        dfs.append(float(df))
        ks.append(kt)
        solver.max_step = _step_cap(kt, t_end)
    return np.array(ts), np.array(fs), np.array(dfs), np.array(ks), root


@dataclass(frozen=True, eq=False)
class WarpFunction:
    """Dense solution f on ``[0, l]``. Immutable; safe to share."""

    profile: object
    l: float
    nodes: np.ndarray
    values: np.ndarray  # columns f, f', f''
    tolerance: float

    def __post_init__(self):
        yi = [row for row in self.values]
        bpoly = BPoly.from_derivatives(self.nodes, yi, extrapolate=False)
        pp = PPoly.from_bernstein_basis(bpoly)
        object.__setattr__(self, "_pp", pp)
        object.__setattr__(self, "_dpp", pp.derivative())
        object.__setattr__(self, "_ddpp", pp.derivative(2))
        # power-basis coefficients per interval, highest degree first, for scalar calls
        object.__setattr__(self, "_coef", [tuple(c) for c in pp.c.T.tolist()])
        object.__setattr__(self, "_breaks", pp.x.tolist())

    @property
    def rtol(self):
        return self.tolerance

    @property
    def atol(self):
        return self.tolerance * 1e-2

    def _check(self, t):
        arr = np.asarray(t, dtype=float)
        slack = _SLACK * max(1.0, self.l)
        if np.any(arr < -slack) or np.any(arr > self.l + slack) or np.any(np.isnan(arr)):
            raise DomainError(f"t outside warp domain [0, {self.l}]")
        return np.clip(arr, 0.0, self.l)

    def __call__(self, t):
        return eval_warp(self, t)

    def f(self, t):
        return self._pp(self._check(t))[()]

    def df(self, t):
        return self._dpp(self._check(t))[()]

    def ddf(self, t):
        """Second derivative of the dense interpolant (not -k f)."""
        return self._ddpp(self._check(t))[()]

    def scalar(self, t):
        """(f, f') at a float t without domain checks; used in inner ODE loops."""
        breaks = self._breaks
        i = bisect.bisect_right(breaks, t) - 1
        if i < 0:
            i = 0
        elif i >= len(self._coef):
            i = len(self._coef) - 1
        c = self._coef[i]
        x = t - breaks[i]
        f = c[0]
        df = 0.0
        for a in c[1:]:
            df = df * x + f
            f = f * x + a
        return f, df

    def to_dict(self, samples=257):
        t = np.linspace(0.0, self.l, samples)
        f, df = self(t)
        return {
            "l": self.l,
            "tolerance": self.tolerance,
            "density": samples,
            "samples": np.column_stack([t, f, df]).tolist(),
        }

    def to_csv(self, samples=257):
        t = np.linspace(0.0, self.l, samples)
        f, df = self(t)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "f", "fprime"])
        for row in zip(t, f, df):
            writer.writerow([format(v, ".17g") for v in row])
        return buf.getvalue()


def integrate_warp(profile, l, tolerance=DEFAULT_TOL):
    """Integrate f'' + k f = 0, f(0)=0, f'(0)=1 across ``[0, l]``."""
    _check_tolerance(tolerance)
    if not l > 0:
        raise DomainError(f"l must be positive, got {l}")
    ts, fs, dfs, ks, _ = _march(profile, float(l), tolerance)
    values = np.column_stack([fs, dfs, -ks * fs])
    values[0] = (0.0, 1.0, 0.0)
    return WarpFunction(profile, float(l), ts, values, float(tolerance))


def eval_warp(warp, t):
    """(f(t), f'(t)) from the dense output."""
    x = warp._check(t)
    return warp._pp(x)[()], warp._dpp(x)[()]


@dataclass(frozen=True)
class Closing:
    """Outcome of a closing-length search. ``l`` is None when f stays positive."""

    l: float | None
    t_max: float

    @property
    def closes(self):
        return self.l is not None


def find_closing_length(profile, t_max, tolerance=DEFAULT_TOL):
    """First zero of f in ``(0, t_max]``, located on the dense output."""
    _check_tolerance(tolerance)
    if not t_max > 0:
        raise DomainError(f"t_max must be positive, got {t_max}")
    *_, root = _march(profile, float(t_max), tolerance, stop_at_zero=True)
    return Closing(None if root is None else float(root), float(t_max))


@dataclass(frozen=True)
class AdmissibilityReport:
    closes: bool
    positive_interior: bool
    end_slope: float
    max_symmetry_defect: float
    ode_residual: float
    end_value: float
    tolerance: float
    grid: int

    @property
    def admissible(self):
        return self.closes and self.positive_interior

    def to_dict(self):
        return dict(self.__dict__)


def check_admissibility(warp, tolerance=1e-8, grid=1025):
    """Check f(l)=0, f > 0 inside, and measure slope, symmetry and ODE residual."""
    grid = max(int(grid), 1025)
    t = np.linspace(0.0, warp.l, grid)
    f, df = warp(t)
    k = evaluate(warp.profile, t)
    end_value = float(f[-1])
    residual = float(np.max(np.abs(warp.ddf(t) + k * f)))
    return AdmissibilityReport(
        closes=abs(end_value) <= tolerance,
        positive_interior=bool(np.all(f[1:-1] > 0.0)),
        end_slope=float(df[-1]),
        max_symmetry_defect=float(np.max(np.abs(f - f[::-1]))),
        ode_residual=residual,
        end_value=end_value,
        tolerance=float(tolerance),
        grid=grid,
    )


def wronskian_drift(profile, l, tolerance=DEFAULT_TOL, grid=1025):
    """Max deviation of W = f g' - f' g from its initial value -1, where g is
    the companion solution with g(0)=1, g'(0)=0."""
    _check_tolerance(tolerance)
    ts, gs, dgs, ks, _ = _march(profile, float(l), tolerance, y0=(1.0, 0.0))
    companion = WarpFunction(profile, float(l), ts, np.column_stack([gs, dgs, -ks * gs]), tolerance)
    warp = integrate_warp(profile, l, tolerance)
    t = np.linspace(0.0, l, grid)
    f, df = warp(t)
    g, dg = companion(t)
    return float(np.max(np.abs(f * dg - df * g + 1.0)))
