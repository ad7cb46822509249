import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from warped_spectra import WarpedSpaceEstimator, builtin_profile
from warped_spectra.errors import DomainError, ModelError


def test_params_round_trip():
    est = WarpedSpaceEstimator(n=2, m=1, tol=1e-9)
    params = est.get_params()
    assert params == {"n": 2, "m": 1, "t_max": 100.0, "tol": 1e-9, "require_closing": False}
    est.set_params(n=4)
    assert clone(est).get_params()["n"] == 4


def test_fit_transform_sphere():
    est = WarpedSpaceEstimator(n=2).fit("1")
    assert est.closing_length_ == pytest.approx(math.pi)
    out = est.transform([0.0, 1.0, math.pi / 2])
    np.testing.assert_allclose(out, [[0, 1], [math.sin(1), math.cos(1)], [1, 0]], atol=1e-9)


def test_predict_matches_closed_form():
    est = WarpedSpaceEstimator(n=3).fit(builtin_profile("sphere"))
    np.testing.assert_allclose(est.predict([math.pi / 2]), [3.0], rtol=1e-6)


def test_predict_decreasing_in_radius():
    est = WarpedSpaceEstimator(n=2).fit("12/(45-(t-3)^2)")
    lams = est.predict(np.array([[1.0], [2.0], [3.0]]))
    assert lams.shape == (3,)
    assert np.all(np.diff(lams) < 0)


def test_non_closing_profile():
    est = WarpedSpaceEstimator(n=2, t_max=1.0).fit("0")
    assert est.closing_length_ is None
    assert est.predict([1.0])[0] == pytest.approx(5.783185962946784, rel=1e-8)


def test_require_closing():
    with pytest.raises(ModelError):
        WarpedSpaceEstimator(require_closing=True).fit("t")


def test_not_fitted():
    with pytest.raises(NotFittedError):
        WarpedSpaceEstimator().transform([1.0])


@pytest.mark.parametrize("params", [{"n": 1}, {"n": 2.5}, {"m": -1}, {"t_max": 0.0}])
def test_invalid_params(params):
    with pytest.raises(ValueError):
        WarpedSpaceEstimator(**params).fit("1")


def test_radii_validation():
    est = WarpedSpaceEstimator(n=2).fit("1")
    with pytest.raises(DomainError):
        est.transform([4.0])
    with pytest.raises(DomainError):
        est.predict([0.0])
    with pytest.raises(DomainError):
        est.transform([np.nan])
