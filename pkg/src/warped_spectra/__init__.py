"""Spectra of rotationally symmetric model spaces dt^2 + f(t)^2 |dxi|^2."""

from .errors import (
    BracketError,
    DomainError,
    IntegrationError,
    ModelError,
    OracleDisagreement,
    ProfileEvaluationError,
    ProfileSyntaxError,
    WarpedSpectraError,
)
from .estimators import WarpedSpaceEstimator
from .oracle import (
    ball_eigenvalue,
    closed_eigenvalues,
    discretize_ball,
    discretize_closed,
    eigenvector,
    node_count,
    richardson_extrapolate,
    smallest_eigenvalues,
    sturm_count,
)
from .profile import (
    CurvatureProfile,
    builtin_profile,
    check_symmetry,
    constant_profile,
    evaluate,
    load_profile,
    parse_profile,
    profile_from_dict,
    scale_profile,
)
from .radial import ModelSpace, eigenfunction_samples, lambda1_ball, model_space, rayleigh_quotient, shoot
from .theorem import (
    build_model,
    check_hypotheses,
    compute_lambda_plus,
    constant_curvature_case,
    explore_question,
    verify_model_consistency,
)
from .warp import check_admissibility, eval_warp, find_closing_length, integrate_warp, wronskian_drift

__version__ = "0.1.0"
