"""Reference examples and the golden file of oracle eigenvalues.

The two rational profiles have no closed-form eigenvalues, so their reference
values come from the finite-difference oracle at N=4096 with Richardson
extrapolation against N=2048, written once to ``data/golden.json``.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from . import oracle
from .jsonio import dumps
from .profile import builtin_profile
from .radial import lambda1_ball
from .theorem import agreement_bound, build_model, compute_lambda_plus
from .warp import find_closing_length, integrate_warp

GOLDEN_ENV = "WARPED_SPECTRA_GOLDEN"
GOLDEN_N = 4096
DEFAULT_GOLDEN = Path(__file__).parent / "data" / "golden.json"

CLOSED_FORMS = {
    "paper-a": (6.0, lambda t: 15 / 8 - (t - 3) ** 2 / 4 + (t - 3) ** 4 / 216),
    "paper-b": (8.0, lambda t: ((t - 4) ** 4 - 96 * (t - 4) ** 2 + 1280) / 512),
}
GOLDEN_MODELS = [("paper-a", 2), ("paper-a", 3), ("paper-b", 2), ("paper-b", 3)]


def golden_path(path=None):
    if path:
        return Path(path)
    env = os.environ.get(GOLDEN_ENV)
    return Path(env) if env else DEFAULT_GOLDEN


def load_golden(path=None):
    with open(golden_path(path), encoding="utf-8") as fh:
        return json.load(fh)


def _oracle_values(model, N):
    ball = float(oracle.ball_eigenvalue(model, model.l / 2, 0, N)[0])
    m0 = oracle.closed_eigenvalues(model, 0, N, count=2)
    m1 = oracle.closed_eigenvalues(model, 1, N, count=1)
    return {"lambda_plus": ball, "lambda1_closed": float(min(m0[1], m1[0]))}


def generate_golden(N=GOLDEN_N):
    cases = {}
    for name, n in GOLDEN_MODELS:
        model = build_model(builtin_profile(name), n)
        for key, value in _oracle_values(model, N).items():
            cases[f"{name}/n={n}/{key}"] = {"lambda": value, "N": N, "scheme": oracle.SCHEME}
    return {
        "_meta": {
            "generator": "warped_spectra.reference_examples.generate_golden",
            "scheme": oracle.SCHEME,
            "grids": [N // 2, N],
            "warp_tolerance": 1e-10,
        },
        "cases": cases,
    }


def write_golden(path=None, N=GOLDEN_N):
    target = golden_path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dumps(generate_golden(N)), encoding="utf-8")
    return target


def _check(checks, cid, value, expected, tol, relative=False):
    err = abs(value - expected)
    if relative:
        err /= abs(expected)
    checks.append({"id": cid, "value": value, "expected": expected, "error": err,
                   "tolerance": tol, "pass": bool(err <= tol)})


def run_examples(path=None):
    """Recompute every reference example and compare with closed forms and the golden file."""
    golden = load_golden(path)
    checks = []

    for K in (0.25, 1.0, 4.0):
        profile = builtin_profile("sphere", K)
        l_exact = math.pi / math.sqrt(K)
        _check(checks, f"sphere/K={K}/closing_length", find_closing_length(profile, 100.0).l, l_exact, 1e-8)
        warp = integrate_warp(profile, l_exact)
        t = np.linspace(0, l_exact, 2001)
        err = float(np.max(np.abs(warp.f(t) - np.sin(math.sqrt(K) * t) / math.sqrt(K))))
        _check(checks, f"sphere/K={K}/warp_max_error", err, 0.0, 1e-8)
    for n in (2, 3, 4, 5):
        model = build_model(builtin_profile("sphere", 1.0), n)
        lam = lambda1_ball(model, model.l / 2).lam
        _check(checks, f"sphere/K=1/n={n}/lambda_plus", lam, float(n), 1e-6, relative=True)

    for name, (l_exact, f_exact) in CLOSED_FORMS.items():
        profile = builtin_profile(name)
        _check(checks, f"{name}/closing_length", find_closing_length(profile, 100.0).l, l_exact, 1e-8)
        warp = integrate_warp(profile, l_exact)
        t = np.linspace(0, l_exact, 2001)
        err = float(np.max(np.abs(warp.f(t) - f_exact(t))))
        _check(checks, f"{name}/warp_max_error", err, 0.0, 1e-8)

    cases = golden["cases"]
    for name, n in GOLDEN_MODELS:
        model = build_model(builtin_profile(name), n)
        prefix = f"{name}/n={n}"
        ref_plus = cases[f"{prefix}/lambda_plus"]
        N = int(ref_plus["N"])
        values = _oracle_values(model, N)
        for key, value in values.items():
            ref = cases[f"{prefix}/{key}"]["lambda"]
            _check(checks, f"{prefix}/{key}/oracle", value, ref, 1e-9, relative=True)
        lam = compute_lambda_plus(model).lam
        _check(checks, f"{prefix}/lambda_plus/shooting", lam, ref_plus["lambda"],
               agreement_bound(ref_plus["lambda"]))
        excess = values["lambda1_closed"] - lam
        checks.append({"id": f"{prefix}/thm22", "value": values["lambda1_closed"], "expected": lam,
                       "error": max(0.0, excess), "tolerance": 1e-5 * lam, "pass": bool(excess <= 1e-5 * lam)})

    return {"golden": str(golden_path(path)), "checks": checks,
            "all_pass": all(c["pass"] for c in checks)}
