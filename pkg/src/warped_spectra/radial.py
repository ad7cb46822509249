"""First Dirichlet eigenvalues of geodesic balls by shooting.

Separating variables on the model space turns Delta u + lam u = 0 on the ball
of radius r into, for each angular index m,

    phi'' + (n-1) (f'/f) phi' + (lam - m(m+n-2)/f^2) phi = 0,   phi(r) = 0,

with the regular solution phi ~ t^m at the centre. The coefficient (n-1)/t is
singular at t=0, so integration starts at a small offset from a two-term
Frobenius series.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson, solve_ivp
from scipy.optimize import brentq

from .errors import BracketError, DomainError, IntegrationError
from .warp import DEFAULT_TOL, check_admissibility, integrate_warp

DEFAULT_EIGEN_TOL = 1e-10
MAX_BISECTIONS = 256
SAMPLES_PER_STEP = 8
_SERIES_OFFSET = 1e-6


@dataclass(frozen=True, eq=False)
class ModelSpace:
    """The warped product [0, l) x_f S^(n-1)."""

    n: int
    warp: object
    metadata: str = ""
    closes: bool = False

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.n}")

    @property
    def l(self):
        return self.warp.l

    @property
    def profile(self):
        return self.warp.profile

    def summary(self, samples=9):
        t = np.linspace(0.0, self.l, samples)
        return {
            "n": self.n,
            "l": self.l,
            "closes": self.closes,
            "profile": self.metadata,
            "f_samples": np.column_stack([t, self.warp.f(t)]).tolist(),
        }


def model_space(profile, n, length, tolerance=DEFAULT_TOL, admissibility_tol=1e-8):
    """Model on ``[0, length]`` without requiring closure (flat or hyperbolic
    profiles are fine for ball problems). ``closes`` records whether f(length)=0."""
    warp = integrate_warp(profile, length, tolerance)
    report = check_admissibility(warp, admissibility_tol)
    return ModelSpace(int(n), warp, profile.text, report.admissible)


@dataclass(frozen=True)
class ShootResult:
    lambda_trial: float
    phi_end: float
    dphi_end: float
    interior_nodes: int
    trace: tuple | None = None  # (t, phi) samples

    @property
    def overshoot(self):
        return self.interior_nodes > 0 or self.phi_end < 0.0


@dataclass(frozen=True)
class EigenResult:
    lam: float
    m: int
    r: float
    t: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    node_count: int
    residuals: dict
    method: str = "shooting"

    def to_dict(self):
        return {
            "lambda": self.lam,
            "m": self.m,
            "r": self.r,
            "nodes": self.node_count,
            "residuals": dict(self.residuals),
            "method": self.method,
        }

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "phi"])
        for t, p in zip(self.t, self.phi):
            writer.writerow([format(t, ".17g"), format(p, ".17g")])
        return buf.getvalue()


def _angular(model, m):
    return m * (m + model.n - 2)


def _series_coefficient(model, m, lam):
    # phi = t^m (1 + a t^2 + ...) with f = t - k(0) t^3/6 + ...
    k0 = model.warp.profile(0.0)
    n = model.n
    return -(lam - k0 * (m * (n - 1) + _angular(model, m)) / 3.0) / (4 * m + 2 * n)


def _offset(model):
    return _SERIES_OFFSET * model.l


def _check_radius(model, r):
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r}")
    if model.closes and r >= model.l:
        raise DomainError(f"radius {r} must be below the closing length {model.l}")
    if r > model.l * (1 + 1e-12):
        raise DomainError(f"radius {r} exceeds the warp domain {model.l}")


def _count_sign_changes(values):
    s = np.sign(values)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _integrate(model, m, lam, r, tolerance):
    n1 = model.n - 1
    mu = _angular(model, m)
    scalar = model.warp.scalar
    eps = _offset(model)
    a = _series_coefficient(model, m, lam)
    # state is phi / eps^m to keep magnitudes O(1) at the start
    if m == 0:
        y0 = [1.0 + a * eps * eps, 2.0 * a * eps]
    else:
        y0 = [1.0 + a * eps * eps, m / eps + a * (m + 2) * eps]

    def rhs(t, y):
        f, df = scalar(t)
        return [y[1], -n1 * df / f * y[1] - (lam - mu / (f * f)) * y[0]]

    sol = solve_ivp(rhs, (eps, r), y0, method="DOP853", rtol=tolerance,
                    atol=tolerance * 1e-2, dense_output=True)
    if not sol.success:
        raise IntegrationError(f"shooting failed at lam={lam}: {sol.message}")
    return sol, eps, a


def shoot(model, m, lambda_trial, r, tolerance=DEFAULT_TOL, trace=False):
    """Integrate the radial equation for a trial eigenvalue out to radius r."""
    _check_radius(model, r)
    if m < 0:
        raise DomainError("angular index must be >= 0")
    sol, eps, a = _integrate(model, m, float(lambda_trial), float(r), tolerance)
    steps = sol.t
    frac = np.arange(SAMPLES_PER_STEP) / SAMPLES_PER_STEP
    ts = (steps[:-1, None] + np.diff(steps)[:, None] * frac).ravel()
    scale = eps ** m
    interior = sol.sol(ts)[0]
    nodes = _count_sign_changes(interior)
    phi_end, dphi_end = sol.y[0, -1] * scale, sol.y[1, -1] * scale
    samples = None
    if trace:
        t_all = np.concatenate([[0.0], ts, [r]])
        phi = np.concatenate([[1.0 if m == 0 else 0.0], interior * scale, [phi_end]])
        samples = (t_all, phi)
    return ShootResult(float(lambda_trial), float(phi_end), float(dphi_end), nodes, samples)


def lambda1_ball(model, r, m=0, tolerance=DEFAULT_EIGEN_TOL, ode_tolerance=DEFAULT_TOL):
    """Smallest Dirichlet eigenvalue of the ball of radius r in angular sector m."""
    _check_radius(model, r)
    r = float(r)
    shots = 0

    def fire(lam):
        nonlocal shots
        shots += 1
        return shoot(model, m, lam, r, ode_tolerance)

    lo, lo_shot = 0.0, None
    hi = max(math.pi ** 2 / r ** 2, 4 * model.n / r ** 2)
    hi_shot = fire(hi)
    for _ in range(200):
        if hi_shot.overshoot:
            break
        lo, lo_shot = hi, hi_shot
        hi *= 2.0
        hi_shot = fire(hi)
    else:
        raise BracketError(f"no overshoot found below lam={hi:g}")

    # isolate: upper end must lie between the first and second eigenvalue
    for _ in range(MAX_BISECTIONS):
        if hi_shot.phi_end < 0.0 and hi_shot.interior_nodes <= 1:
            break
        if hi - lo <= tolerance * max(1.0, lo):
            break
        mid = 0.5 * (lo + hi)
        s = fire(mid)
        if s.overshoot:
            hi, hi_shot = mid, s
        else:
            lo, lo_shot = mid, s
    else:
        raise BracketError("eigenvalue isolation did not converge")

    if hi - lo > tolerance * max(1.0, lo):
        if lo_shot is None:
            lo_shot = fire(lo)
        # phi_end changes sign exactly once on [lo, hi]
        lam = brentq(lambda x: fire(x).phi_end, lo, hi,
                     xtol=0.5 * tolerance * max(1.0, lo), rtol=4 * np.finfo(float).eps,
                     maxiter=MAX_BISECTIONS)
    else:
        lam = 0.5 * (lo + hi)

    final = shoot(model, m, lam, r, ode_tolerance, trace=True)
    t, phi = final.trace
    result = EigenResult(
        lam=float(lam), m=int(m), r=r, t=t, phi=phi,
        node_count=final.interior_nodes,
        residuals={"boundary": abs(final.phi_end), "shots": shots},
        method="shooting",
    )
    grid = np.linspace(0.0, r, 2001)
    rq = rayleigh_quotient(model, eigenfunction_samples(model, result, grid, ode_tolerance), r, m=m)
    result.residuals["rayleigh_defect"] = abs(rq - lam) / lam
    return result


def eigenfunction_samples(model, result, grid, ode_tolerance=DEFAULT_TOL):
    """phi at the points of ``grid`` (inside [0, r]), normalised as in the shot."""
    grid = np.asarray(grid, dtype=float)
    if np.any(grid < 0) or np.any(grid > result.r * (1 + 1e-12)):
        raise DomainError(f"grid must lie in [0, {result.r}]")
    m = result.m
    sol, eps, a = _integrate(model, m, result.lam, result.r, ode_tolerance)
    out = np.empty_like(grid)
    near = grid < eps
    out[near] = grid[near] ** m * (1.0 + a * grid[near] ** 2)
    if not near.all():
        out[~near] = sol.sol(np.minimum(grid[~near], result.r))[0] * eps ** m
    return out


def _fd_derivative(y, h):
    """Fourth-order finite-difference derivative on a uniform grid."""
    y = np.asarray(y, dtype=float)
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
    # one-sided five-point stencils at the two ends
    d[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12 * h)
    d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12 * h)
    d[-1] = (25 * y[-1] - 48 * y[-2] + 36 * y[-3] - 16 * y[-4] + 3 * y[-5]) / (12 * h)
    d[-2] = (3 * y[-1] + 10 * y[-2] - 18 * y[-3] + 6 * y[-4] - y[-5]) / (12 * h)
    return d


def rayleigh_quotient(model, phi, r, m=0):
    """Radial Rayleigh quotient of samples ``phi`` on ``linspace(0, r, len(phi))``.

    Uses the weight f^(n-1); for m >= 1 the angular term m(m+n-2) phi^2 f^(n-3)
    is added to the numerator.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 1 or len(phi) < 5:
        raise ValueError("phi must be a 1-D sample array of length >= 5")
    t = np.linspace(0.0, r, len(phi))
    h = t[1] - t[0]
    f = model.warp.f(t)
    w = f ** (model.n - 1)
    dphi = _fd_derivative(phi, h)
    num = dphi ** 2 * w
    if m:
        with np.errstate(divide="ignore", invalid="ignore"):
            pot = _angular(model, m) * phi ** 2 * f ** (model.n - 3)
        num = num + np.where(f > 0, pot, 0.0)
    den = simpson(phi ** 2 * w, x=t)
    if not den > 0:
        raise ValueError("degenerate Rayleigh quotient: phi vanishes identically")
    return float(simpson(num, x=t) / den)
