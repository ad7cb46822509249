import math

import pytest

from warped_spectra import build_model, builtin_profile, model_space, parse_profile


def bessel_j0_series(x, terms=60):
    """J0 from its power series, summed term by term."""
    total, term = 0.0, 1.0
    for k in range(terms):
        if k:
            term *= -(x * x / 4.0) / (k * k)
        total += term
    return total


def j0_first_root():
    """First positive zero of J0 by bisection on the series; independent of scipy.special."""
    lo, hi = 2.0, 3.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if bessel_j0_series(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@pytest.fixture(scope="session")
def j01():
    return j0_first_root()


_MODELS = {}


def closed_model(name, n, K=1.0):
    key = (name, n, K)
    if key not in _MODELS:
        _MODELS[key] = build_model(builtin_profile(name, K), n)
    return _MODELS[key]


def flat_model(n=2, length=1.0):
    key = ("flat", n, length)
    if key not in _MODELS:
        _MODELS[key] = model_space(parse_profile("0"), n, length)
    return _MODELS[key]


@pytest.fixture
def sphere2():
    return closed_model("sphere", 2)


@pytest.fixture
def sphere3():
    return closed_model("sphere", 3)


@pytest.fixture
def rational_a3():
    return closed_model("paper-a", 3)


@pytest.fixture
def flat_disk():
    return flat_model()


HALF_PI = math.pi / 2


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
