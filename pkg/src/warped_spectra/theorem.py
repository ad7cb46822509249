"""Hypothesis and consistency checks for the rigidity theorem.

What is checkable from a curvature profile is checked: symmetry of k about
l/2, closure and positivity of f, the threshold eigenvalue lam+ (first
Dirichlet eigenvalue of the ball of radius l/2), and the closed spectrum of
the model itself. The diameter and the closed eigenvalue of an abstract
manifold cannot be computed here; they are recorded as user declarations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import oracle
from .errors import ModelError, OracleDisagreement
from .profile import check_symmetry, evaluate
from .radial import ModelSpace, lambda1_ball
from .warp import DEFAULT_TOL, check_admissibility, find_closing_length, integrate_warp

DEFAULT_T_MAX = 100.0
ADMISSIBILITY_TOL = 1e-8
AGREEMENT_RTOL = 1e-4
AGREEMENT_ATOL = 1e-6
REPORT_RTOL = 1e-5
MATCH_RTOL = 1e-4
ORACLE_N = 2048


def agreement_bound(lam):
    return max(AGREEMENT_ATOL, AGREEMENT_RTOL * abs(lam))


def build_model(profile, n, t_max=None, tolerance=DEFAULT_TOL):
    """Close the warp of ``profile`` and return the model, or raise ModelError."""
    if t_max is None:
        t_max = profile.t_max if math.isfinite(profile.t_max) else DEFAULT_T_MAX
    closing = find_closing_length(profile, t_max, tolerance)
    if not closing.closes:
        raise ModelError(f"warp for {profile.text!r} does not close on (0, {t_max}]")
    l = closing.l
    symmetry = check_symmetry(profile, l)
    if not symmetry.symmetric:
        raise ModelError(
            f"profile {profile.text!r} is not symmetric about l/2={l / 2:.12g} "
            f"(max |k(t)-k(l-t)| = {symmetry.max_asymmetry:.3g})"
        )
    warp = integrate_warp(profile, l, tolerance)
    report = check_admissibility(warp, ADMISSIBILITY_TOL)
    if not report.positive_interior:
        raise ModelError("warp is not positive on (0, l)")
    if not report.closes:
        raise ModelError(f"warp does not return to zero at l (f(l) = {report.end_value:.3g})")
    return ModelSpace(int(n), warp, profile.text, closes=True)


def compute_lambda_plus(model, tolerance=1e-10, N=ORACLE_N):
    """lam+ by shooting on the ball of radius l/2, confirmed by the oracle."""
    if not model.closes:
        raise ModelError("lam+ is defined only for closing models")
    r = model.l / 2
    shot = lambda1_ball(model, r, 0, tolerance)
    fd = float(oracle.ball_eigenvalue(model, r, 0, N)[0])
    gap = abs(shot.lam - fd)
    if gap > agreement_bound(shot.lam):
        raise OracleDisagreement(f"shooting {shot.lam!r} vs oracle {fd!r} (gap {gap:.3g})")
    residuals = dict(shot.residuals, oracle=fd, oracle_gap=gap, oracle_N=N)
    return replace(shot, residuals=residuals, method="cross-checked")


@dataclass
class HypothesisReport:
    assumption1: dict
    assumption2: dict
    assumption3: dict
    conclusion_applicable: bool
    model_summary: dict

    def to_dict(self):
        return {
            "assumption1": self.assumption1,
            "assumption2": self.assumption2,
            "assumption3": self.assumption3,
            "conclusion_applicable": self.conclusion_applicable,
            "model_summary": self.model_summary,
        }


def check_hypotheses(model, claimed_lambda1=None, tolerance=1e-6, diameter=None):
    """Fill in the three assumptions for a manifold matching the model data.

    The isometry conclusion is never asserted; ``conclusion_applicable`` only
    says that all hypotheses are met or declared.
    """
    declared = model.l if diameter is None else float(diameter)
    a1_ok = abs(declared - model.l) <= 1e-8 * max(1.0, model.l)
    symmetry = check_symmetry(model.profile, model.l)
    admissibility = check_admissibility(model.warp, ADMISSIBILITY_TOL)
    try:
        lam_plus = compute_lambda_plus(model)
        lam_value, lam_error = lam_plus.lam, None
    except Exception as exc:  # report, don't raise
        lam_value, lam_error = math.nan, str(exc)
    satisfied = None
    if claimed_lambda1 is not None and math.isfinite(lam_value):
        satisfied = bool(claimed_lambda1 >= lam_value - tolerance * max(1.0, lam_value))
    a2_ok = symmetry.symmetric and admissibility.admissible
    applicable = bool(a1_ok and a2_ok and math.isfinite(lam_value) and lam_value > 0 and satisfied is True)
    return HypothesisReport(
        assumption1={"l": declared, "model_l": model.l, "matches_model": a1_ok, "source": "user-declared"},
        assumption2={"symmetry": symmetry.to_dict(), "admissibility": admissibility.to_dict(), "holds": a2_ok},
        assumption3={
            "lambda_plus": lam_value,
            "user_claimed_lambda1": claimed_lambda1,
            "satisfied": satisfied,
            "tolerance": tolerance,
            "error": lam_error,
        },
        conclusion_applicable=applicable,
        model_summary=model.summary(),
    )


@dataclass
class ConsistencyReport:
    lambda_plus: float
    lambda1_closed: float
    closed_m0: list
    closed_m1: list
    thm22_holds: bool
    antisymmetric_match: bool
    ground_state_radial: bool
    cheng_equality_residual: float
    lambda_ball_m1: float
    tolerances: dict = field(default_factory=dict)
    golden: dict | None = None

    @property
    def ok(self):
        return (self.thm22_holds and self.antisymmetric_match and self.ground_state_radial
                and self.cheng_equality_residual <= agreement_bound(self.lambda_plus))

    def to_dict(self):
        d = dict(self.__dict__)
        d["ok"] = self.ok
        return d


def verify_model_consistency(model, tolerance=REPORT_RTOL, N=ORACLE_N):
    """Instantiate the closed-vs-ball comparison and the equality case on M* itself."""
    lam_plus = compute_lambda_plus(model, N=N)
    lp = lam_plus.lam
    m0 = oracle.closed_eigenvalues(model, 0, N, count=4)
    m1 = oracle.closed_eigenvalues(model, 1, N, count=2)
    # m0[0] is the constant mode
    lambda1_closed = float(min(m0[1], m1[0]))
    match = float(np.min(np.abs(m0[1:] - lp))) / lp
    ball_m1 = lambda1_ball(model, model.l / 2, 1).lam
    return ConsistencyReport(
        lambda_plus=lp,
        lambda1_closed=lambda1_closed,
        closed_m0=m0.tolist(),
        closed_m1=m1.tolist(),
        thm22_holds=bool(lambda1_closed <= lp * (1 + tolerance)),
        antisymmetric_match=bool(match <= MATCH_RTOL),
        ground_state_radial=bool(ball_m1 > lp),
        cheng_equality_residual=lam_plus.residuals["oracle_gap"],
        lambda_ball_m1=ball_m1,
        tolerances={"thm22_rtol": tolerance, "match_rtol": MATCH_RTOL,
                    "agreement": agreement_bound(lp), "oracle_N": N},
        golden=golden_reference(model),
    )


def golden_reference(model, path=None):
    """Golden-file entries pinned for this model, or None if it is not a pinned example."""
    from .reference_examples import GOLDEN_MODELS, golden_path, load_golden
    from .profile import builtin_profile

    for name, n in GOLDEN_MODELS:
        if n == model.n and builtin_profile(name).text == model.metadata:
            prefix = f"{name}/n={n}/"
            cases = {k: v["lambda"] for k, v in load_golden(path)["cases"].items() if k.startswith(prefix)}
            return {"path": str(golden_path(path)), "cases": cases}
    return None


@dataclass(frozen=True)
class ClosedFormCase:
    n: int
    K: float
    l: float
    f_closed_form: str
    lambda_plus_closed_form: float

    def f(self, t):
        s = math.sqrt(self.K)
        return np.sin(s * np.asarray(t)) / s


def constant_curvature_case(n, K):
    """Round sphere of curvature K: f = sin(sqrt(K) t)/sqrt(K), lam+ = nK."""
    if int(n) != n or n < 2:
        raise ValueError("n must be an integer >= 2")
    if not K > 0:
        raise ValueError("K must be positive")
    return ClosedFormCase(int(n), float(K), math.pi / math.sqrt(K), "sin(sqrt(K) t)/sqrt(K)", n * K)


def explore_question(model, N=ORACLE_N, grid=4097):
    """(k_min, n*k_min, closed first eigenvalue) for inspection; no verdict."""
    t = np.linspace(0.0, model.l, grid)[1:-1]
    k_min = float(np.min(evaluate(model.profile, t)))
    m0 = oracle.closed_eigenvalues(model, 0, N, count=2)
    m1 = oracle.closed_eigenvalues(model, 1, N, count=1)
    lam1 = float(min(m0[1], m1[0]))
    return {"n": model.n, "k_min": k_min, "n_k_min": model.n * k_min, "lambda1_closed": lam1}
