"""Radial curvature profiles k(t).

A profile is an immutable callable on ``[0, t_max]``. Four kinds exist:
``constant``, ``rational`` (numerator/denominator polynomials in t),
``expression`` (a parsed tree using sin, cos, sinh, cosh, exp, sqrt, abs)
and ``tabulated`` (monotone cubic through sorted samples).

Evaluation never lets an IEEE infinity or NaN escape: a pole inside the
domain raises :class:`ProfileEvaluationError`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.interpolate import PchipInterpolator

from . import _expr
from .errors import DomainError, ProfileEvaluationError

_DOMAIN_SLACK = 1e-12

DEFAULT_SYMMETRY_TOL = 1e-9
DEFAULT_SYMMETRY_SAMPLES = 1024


class CurvatureProfile:
    """Base class; use :func:`parse_profile` or the constructors below."""

    kind = "abstract"

    def __init__(self, text, t_max=math.inf):
        if not t_max > 0:
            raise DomainError(f"t_max must be positive, got {t_max}")
        self.text = text
        self.t_max = float(t_max)

    def _raw(self, t):
        raise NotImplementedError

    def __call__(self, t):
        return evaluate(self, t)

    def _scalar(self, t):
        # unchecked fast path for integrators; caller validates the domain
        with np.errstate(all="ignore"):
            return float(self._raw(np.array([t]))[0])

    def scaled(self, s):
        raise NotImplementedError

    def to_text(self):
        """Text that :func:`parse_profile` maps back to an identical profile."""
        raise NotImplementedError

    def to_dict(self):
        t_max = self.t_max if math.isfinite(self.t_max) else None
        return {"kind": self.kind, "text": self.to_text(), "domain": [0.0, t_max]}

    def __repr__(self):
        return f"{type(self).__name__}({self.text!r}, t_max={self.t_max})"


class ConstantProfile(CurvatureProfile):
    kind = "constant"

    def __init__(self, K, text=None, t_max=math.inf):
        self.K = float(K)
        super().__init__(repr(self.K) if text is None else text, t_max)

    def _raw(self, t):
        return np.full_like(t, self.K)

    def _scalar(self, t):
        return self.K

    def scaled(self, s):
        return ConstantProfile(s * s * self.K, t_max=self.t_max / s)

    def to_text(self):
        return repr(self.K)


class RationalProfile(CurvatureProfile):
    """``num(t)/den(t)``; coefficients ascending in powers of t."""

    kind = "rational"

    def __init__(self, numerator, denominator, text=None, t_max=math.inf):
        self.numerator = np.asarray(numerator, dtype=float)
        self.denominator = np.asarray(denominator, dtype=float)
        if not np.any(self.denominator):
            raise ProfileEvaluationError("denominator polynomial is identically zero")
        self._num = self.numerator[::-1].tolist()
        self._den = self.denominator[::-1].tolist()
        super().__init__(self.to_text() if text is None else text, t_max)

    def _raw(self, t):
        return P.polyval(t, self.numerator) / P.polyval(t, self.denominator)

    def _scalar(self, t):
        num = den = 0.0
        for c in self._num:
            num = num * t + c
        for c in self._den:
            den = den * t + c
        return num / den if den != 0.0 else math.nan

    def scaled(self, s):
        powers = s ** np.arange(max(len(self.numerator), len(self.denominator)))
        num = s * s * self.numerator * powers[: len(self.numerator)]
        den = self.denominator * powers[: len(self.denominator)]
        return RationalProfile(num, den, t_max=self.t_max / s)

    def to_text(self):
        return f"({_poly_text(self.numerator)})/({_poly_text(self.denominator)})"


class ExpressionProfile(CurvatureProfile):
    kind = "expression"

    def __init__(self, tree, text=None, t_max=math.inf):
        self.tree = tree
        super().__init__(_expr.to_text(tree) if text is None else text, t_max)

    def _raw(self, t):
        return _expr.evaluate(self.tree, t)

    def scaled(self, s):
        tree = _expr.BinOp("*", _expr.Num(float(s * s)), _expr.substitute_scaled(self.tree, s))
        return ExpressionProfile(tree, t_max=self.t_max / s)

    def to_text(self):
        return _expr.to_text(self.tree)


class TabulatedProfile(CurvatureProfile):
    """Monotone cubic (PCHIP) through strictly increasing samples starting at t=0."""

    kind = "tabulated"

    def __init__(self, t, k, text=None):
        t = np.asarray(t, dtype=float)
        k = np.asarray(k, dtype=float)
        if t.ndim != 1 or t.shape != k.shape or len(t) < 2:
            raise ValueError("tabulated profile needs matching 1-D arrays of length >= 2")
        if t[0] != 0.0:
            raise DomainError("tabulated abscissae must start at t=0")
        if np.any(np.diff(t) <= 0):
            raise DomainError("tabulated abscissae must be strictly increasing")
        if not np.all(np.isfinite(k)):
            raise ProfileEvaluationError("tabulated curvature values must be finite")
        self.t = t
        self.k = k
        self._interp = PchipInterpolator(t, k, extrapolate=False)
        super().__init__(text or f"tabulated[{len(t)}]", t[-1])

    def _raw(self, t):
        # the domain check allows rounding slack past the last sample
        return self._interp(np.clip(t, 0.0, self.t_max))

    def scaled(self, s):
        return TabulatedProfile(self.t / s, s * s * self.k)

    def to_text(self):
        return self.text

    def to_dict(self):
        d = super().to_dict()
        d["t"] = self.t.tolist()
        d["k"] = self.k.tolist()
        return d


def _poly_text(coeffs):
    terms = [repr(float(coeffs[0]))]
    for i, c in enumerate(coeffs[1:], start=1):
        terms.append(f"{repr(float(c))}*t^{i}")
    return "+".join(terms)


def parse_profile(text, t_max=math.inf):
    """Parse an expression in ``t`` into the most specific profile kind.

    >>> parse_profile("12/(45-(t-3)^2)").kind
    'rational'
    """
    tree = _expr.parse(text)
    rational = _expr.as_rational(tree)
    if rational is None:
        return ExpressionProfile(tree, text=text, t_max=t_max)
    num, den = rational
    if len(num) == 1 and len(den) == 1:
        with np.errstate(all="ignore"):
            K = num[0] / den[0]
        if math.isfinite(K):
            return ConstantProfile(K, text=text, t_max=t_max)
        # e.g. "1/0": the failure surfaces when the profile is evaluated
        return ExpressionProfile(tree, text=text, t_max=t_max)
    return RationalProfile(num, den, text=text, t_max=t_max)


def constant_profile(K, t_max=math.inf):
    return ConstantProfile(K, t_max=t_max)


def profile_from_dict(data):
    """Inverse of ``CurvatureProfile.to_dict``."""
    kind = data.get("kind")
    domain = data.get("domain") or [0.0, None]
    t_max = math.inf if domain[1] is None else float(domain[1])
    if kind == "tabulated":
        return TabulatedProfile(data["t"], data["k"], text=data.get("text"))
    if kind not in ("constant", "rational", "expression"):
        raise ValueError(f"unknown profile kind {kind!r}")
    return parse_profile(data["text"], t_max=t_max)


def load_profile(path):
    """Read a profile file: a JSON object as written by ``to_dict``, or a bare expression."""
    with open(path, encoding="utf-8") as fh:
        content = fh.read()
    stripped = content.strip()
    if stripped.startswith("{"):
        return profile_from_dict(json.loads(stripped))
    return parse_profile(stripped)


def evaluate(profile, t):
    """k(t) for a scalar or array ``t`` inside ``[0, t_max]``."""
    scalar = np.ndim(t) == 0
    arr = np.asarray(t, dtype=float)
    slack = _DOMAIN_SLACK * max(1.0, profile.t_max if math.isfinite(profile.t_max) else 1.0)
    if np.any(arr < -slack) or np.any(arr > profile.t_max + slack) or np.any(np.isnan(arr)):
        raise DomainError(f"t outside [0, {profile.t_max}] for profile {profile.text!r}")
    with np.errstate(all="ignore"):
        k = profile._raw(np.atleast_1d(arr))
    if not np.all(np.isfinite(k)):
        bad = float(np.atleast_1d(arr)[~np.isfinite(k)][0])
        raise ProfileEvaluationError(f"profile {profile.text!r} is not finite at t={bad!r}")
    return float(k[0]) if scalar else k.reshape(arr.shape)


@dataclass(frozen=True)
class SymmetryReport:
    l: float
    max_asymmetry: float
    tolerance: float
    symmetric: bool
    samples: int

    def to_dict(self):
        return dict(self.__dict__)


def check_symmetry(profile, l, tolerance=DEFAULT_SYMMETRY_TOL, samples=DEFAULT_SYMMETRY_SAMPLES):
    """Compare k(t) with k(l - t) on ``samples`` equispaced points of (0, l/2)."""
    if not l > 0:
        raise DomainError("l must be positive")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    t = 0.5 * l * np.arange(1, samples + 1) / (samples + 1)
    asym = float(np.max(np.abs(evaluate(profile, t) - evaluate(profile, l - t))))
    return SymmetryReport(float(l), asym, float(tolerance), asym <= tolerance, int(samples))


def scale_profile(profile, s):
    """The profile ``s**2 * k(s*t)`` on ``[0, t_max/s]``; lengths shrink by ``1/s``."""
    if not s > 0:
        raise DomainError(f"scale factor must be positive, got {s}")
    return profile.scaled(float(s))


BUILTINS = ("sphere", "flat", "paper-a", "paper-b")


def builtin_profile(name, K=1.0):
    """Named profiles: ``sphere`` (constant K), ``flat`` (K=0) and the two
    rational examples with polynomial warps closing at 6 and 8."""
    if name == "sphere":
        if not K > 0:
            raise DomainError("sphere needs K > 0")
        return ConstantProfile(K)
    if name == "flat":
        return ConstantProfile(0.0)
    if name == "paper-a":
        return parse_profile("12/(45-(t-3)^2)")
    if name == "paper-b":
        return parse_profile("12/(80-(t-4)^2)")
    raise ValueError(f"unknown builtin profile {name!r}; choose from {', '.join(BUILTINS)}")
