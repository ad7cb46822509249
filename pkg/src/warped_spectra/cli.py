"""Command-line front end.

Data goes to stdout (or ``--out``), diagnostics to stderr. Exit codes:
0 success, 1 a check failed, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import oracle
from .errors import DomainError, ModelError, ProfileSyntaxError, WarpedSpectraError
from .jsonio import dumps, plain
from .reference_examples import run_examples, write_golden
from .profile import BUILTINS, builtin_profile, load_profile, parse_profile
from .radial import eigenfunction_samples, lambda1_ball, model_space
from .theorem import (
    DEFAULT_T_MAX,
    agreement_bound,
    build_model,
    check_hypotheses,
    compute_lambda_plus,
    explore_question,
    verify_model_consistency,
)
from .warp import check_admissibility, find_closing_length, integrate_warp

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _common(parser):
    src = parser.add_mutually_exclusive_group()
    src.add_argument("--k", dest="expr", help="curvature expression in t, e.g. '12/(45-(t-3)^2)'")
    src.add_argument("--profile", help="profile file (JSON object or bare expression)")
    src.add_argument("--builtin", choices=BUILTINS, help="named profile")
    parser.add_argument("--K", type=float, default=1.0, help="curvature for --builtin sphere (default 1)")
    parser.add_argument("--n", type=int, default=3, help="dimension (default 3)")
    parser.add_argument("--r", type=float, help="ball radius")
    parser.add_argument("--m", type=int, default=0, help="angular index (default 0)")
    parser.add_argument("--N", type=int, default=2048, help="finite-difference grid size (default 2048)")
    parser.add_argument("--tol", type=float, default=1e-10, help="integrator tolerance (default 1e-10)")
    parser.add_argument("--t-max", type=float, default=DEFAULT_T_MAX, help="search range for closing (default 100)")
    parser.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("--golden", help="golden file (default: packaged, or $WARPED_SPECTRA_GOLDEN)")


def build_parser():
    parser = argparse.ArgumentParser(prog="warped-spectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "warp": "integrate the warping function and report admissibility",
        "closing-length": "first zero of the warping function",
        "eigen": "first Dirichlet eigenvalue of a ball (shooting, cross-checked)",
        "spectrum": "closed-manifold spectrum of the model (finite differences)",
        "check": "hypothesis report for the rigidity theorem",
        "consistency": "closed-vs-ball consistency report on the model itself",
        "examples": "run the reference examples and diff against the golden file",
        "sweep": "parameter sweep over r or K, CSV output",
        "explore-question": "(k_min, n k_min, closed first eigenvalue) for inspection",
    }
    subs = {}
    for name, help_text in specs.items():
        subs[name] = sub.add_parser(name, help=help_text)
        _common(subs[name])
    subs["spectrum"].add_argument("--count", type=int, default=5, help="number of eigenvalues")
    subs["check"].add_argument("--claimed-lambda1", type=float, help="declared lower bound for the closed eigenvalue")
    subs["check"].add_argument("--diameter", type=float, help="declared diameter (default: closing length)")
    subs["examples"].add_argument("--write-golden", action="store_true", help="regenerate the golden file first")
    sw = subs["sweep"]
    sw.add_argument("--param", choices=("r", "K"), default="r")
    sw.add_argument("--min", type=float, required=True, dest="lo")
    sw.add_argument("--max", type=float, required=True, dest="hi")
    sw.add_argument("--count", type=int, default=8)
    return parser


def _profile(args):
    if args.expr is not None:
        return parse_profile(args.expr)
    if args.profile is not None:
        return load_profile(args.profile)
    if args.builtin is not None:
        return builtin_profile(args.builtin, args.K)
    raise _UsageError("one of --k, --profile or --builtin is required")


def _ball_model(args, profile, r):
    closing = find_closing_length(profile, args.t_max, args.tol)
    if closing.closes:
        if r >= closing.l:
            raise DomainError(f"radius {r} must be below the closing length {closing.l}")
        return model_space(profile, args.n, closing.l, args.tol)
    return model_space(profile, args.n, r, args.tol)


def _csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _pretty(data, indent=0):
    lines = []
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(" " * indent + f"{key}:")
            lines.append(_pretty(value, indent + 2))
        elif isinstance(value, list) and len(value) > 8:
            lines.append(" " * indent + f"{key}: [{len(value)} items]")
        else:
            lines.append(" " * indent + f"{key}: {value}")
    return "\n".join(lines)


def _render(args, data, csv_text=None):
    if args.format == "csv" and csv_text is not None:
        return csv_text
    if args.format == "pretty":
        return _pretty(plain(data)) + "\n"
    return dumps(data)


def cmd_warp(args):
    profile = _profile(args)
    closing = find_closing_length(profile, args.t_max, args.tol)
    l = closing.l if closing.closes else args.t_max
    warp = integrate_warp(profile, l, args.tol)
    report = check_admissibility(warp)
    data = {"profile": profile.to_dict(), "closes": closing.closes, "warp": warp.to_dict(),
            "admissibility": report.to_dict()}
    ok = report.admissible if closing.closes else report.positive_interior
    return data, warp.to_csv(), EXIT_OK if ok else EXIT_CHECK


def cmd_closing_length(args):
    profile = _profile(args)
    closing = find_closing_length(profile, args.t_max, args.tol)
    data = {"profile": profile.text, "closes": closing.closes, "l": closing.l, "t_max": closing.t_max}
    return data, None, EXIT_OK


def cmd_eigen(args):
    if args.r is None:
        raise _UsageError("eigen requires --r")
    profile = _profile(args)
    model = _ball_model(args, profile, args.r)
    result = lambda1_ball(model, args.r, args.m)
    fd = float(oracle.ball_eigenvalue(model, args.r, args.m, args.N)[0])
    gap = abs(result.lam - fd)
    data = result.to_dict()
    data["method"] = "cross-checked"
    data["residuals"].update(oracle=fd, oracle_gap=gap, oracle_N=args.N)
    data["n"] = model.n
    status = EXIT_OK
    if gap > agreement_bound(result.lam):
        print(f"shooting and oracle disagree: {result.lam!r} vs {fd!r}", file=sys.stderr)
        status = EXIT_NUMERIC
    grid = np.linspace(0.0, args.r, 257)
    phi = eigenfunction_samples(model, result, grid)
    return data, _csv(["t", "phi"], zip(grid.tolist(), phi.tolist())), status


def cmd_spectrum(args):
    model = build_model(_profile(args), args.n, args.t_max, args.tol)
    values = oracle.closed_eigenvalues(model, args.m, args.N, args.count)
    data = {"n": model.n, "l": model.l, "m": args.m, "N": args.N, "scheme": oracle.SCHEME,
            "eigenvalues": values.tolist()}
    return data, _csv(["index", "lambda"], enumerate(values.tolist())), EXIT_OK


def cmd_check(args):
    model = build_model(_profile(args), args.n, args.t_max, args.tol)
    report = check_hypotheses(model, args.claimed_lambda1, diameter=args.diameter)
    failed = (not report.assumption1["matches_model"] or not report.assumption2["holds"]
              or report.assumption3["satisfied"] is False)
    return report.to_dict(), None, EXIT_CHECK if failed else EXIT_OK


def cmd_consistency(args):
    model = build_model(_profile(args), args.n, args.t_max, args.tol)
    report = verify_model_consistency(model, N=args.N)
    return report.to_dict(), None, EXIT_OK if report.ok else EXIT_CHECK


def cmd_examples(args):
    if args.write_golden:
        path = write_golden(args.golden)
        print(f"wrote {path}", file=sys.stderr)
    data = run_examples(args.golden)
    rows = [(c["id"], c["value"], c["expected"], c["error"], c["tolerance"], c["pass"]) for c in data["checks"]]
    text = _csv(["id", "value", "expected", "error", "tolerance", "pass"], rows)
    return data, text, EXIT_OK if data["all_pass"] else EXIT_CHECK


def cmd_sweep(args):
    if args.count < 1:
        raise _UsageError("--count must be >= 1")
    values = np.linspace(args.lo, args.hi, args.count).tolist()
    rows = []
    if args.param == "r":
        profile = _profile(args)
        model = _ball_model(args, profile, max(values))
        for r in values:
            rows.append((r, lambda1_ball(model, r, args.m).lam))
        header = ["r", "lambda"]
    else:
        for K in values:
            if not K > 0:
                raise DomainError("K sweep needs positive curvatures")
            model = build_model(builtin_profile("sphere", K), args.n, math.pi / math.sqrt(K) * 1.5, args.tol)
            rows.append((K, model.l, compute_lambda_plus(model, N=args.N).lam, args.n * K))
        header = ["K", "l", "lambda_plus", "nK"]
    data = {"param": args.param, "n": args.n, "rows": [dict(zip(header, row)) for row in rows]}
    if args.format == "json":
        return data, None, EXIT_OK
    args.format = "csv"
    return data, _csv(header, rows), EXIT_OK


def cmd_explore_question(args):
    model = build_model(_profile(args), args.n, args.t_max, args.tol)
    return explore_question(model, N=args.N), None, EXIT_OK


COMMANDS = {
    "warp": cmd_warp,
    "closing-length": cmd_closing_length,
    "eigen": cmd_eigen,
    "spectrum": cmd_spectrum,
    "check": cmd_check,
    "consistency": cmd_consistency,
    "examples": cmd_examples,
    "sweep": cmd_sweep,
    "explore-question": cmd_explore_question,
}


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if not 1e-13 <= args.tol <= 1e-4:
        print("error: --tol must lie in [1e-13, 1e-4]", file=sys.stderr)
        return EXIT_USAGE
    try:
        data, csv_text, status = COMMANDS[args.command](args)
    except (_UsageError, ProfileSyntaxError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except WarpedSpectraError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = _render(args, data, csv_text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
