import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eig, eigh_tridiagonal

from conftest import closed_model, flat_model
from warped_spectra import (
    ball_eigenvalue,
    closed_eigenvalues,
    discretize_ball,
    discretize_closed,
    eigenvector,
    lambda1_ball,
    model_space,
    node_count,
    parse_profile,
    richardson_extrapolate,
    smallest_eigenvalues,
    sturm_count,
)
from warped_spectra.errors import DomainError, ModelError
from warped_spectra.oracle import TridiagonalPencil

HALF_PI = math.pi / 2


def _pencil(diag, off, mass=None):
    diag = np.asarray(diag, dtype=float)
    mass = np.ones_like(diag) if mass is None else np.asarray(mass, dtype=float)
    return TridiagonalPencil(diag, np.asarray(off, dtype=float), mass, np.arange(len(diag)), 1.0, "ball", None, 0)


def test_two_by_two():
    values = smallest_eigenvalues(_pencil([2, 2], [-1]), count=2)
    np.testing.assert_allclose(values, [1.0, 3.0], rtol=1e-10)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 30).flatmap(
        lambda n: st.tuples(
            st.lists(st.floats(-10, 10), min_size=n, max_size=n),
            st.lists(st.floats(-5, 5), min_size=n - 1, max_size=n - 1),
            st.lists(st.floats(0.1, 10), min_size=n, max_size=n),
        )
    )
)
def test_matches_dense_generalized_solver(data):
    diag, off, mass = data
    pencil = _pencil(diag, off, mass)
    count = min(3, pencil.N)
    values = smallest_eigenvalues(pencil, count)
    assert np.all(np.diff(values) >= 0)
    A, B = pencil.dense()
    reference = np.sort(eig(A, B, right=False).real)[:count]
    scale = max(1.0, np.max(np.abs(reference)))
    np.testing.assert_allclose(values, reference, atol=1e-9 * scale)


def test_sturm_count_brackets():
    d, e = np.full(5, 2.0), np.full(4, -1.0)
    exact = eigh_tridiagonal(d, e, eigvals_only=True)
    for k, x in enumerate(exact):
        assert sturm_count(d.tolist(), (e * e).tolist(), x + 1e-9) == k + 1
        assert sturm_count(d.tolist(), (e * e).tolist(), x - 1e-9) == k


def test_count_bounds():
    with pytest.raises(ValueError):
        smallest_eigenvalues(_pencil([2, 2], [-1]), count=3)
    with pytest.raises(ValueError):
        smallest_eigenvalues(_pencil([2, 2], [-1]), count=0)


def test_flat_disk_fd(j01):
    lam = smallest_eigenvalues(discretize_ball(flat_model(), 1.0, 0, 2048))[0]
    assert lam == pytest.approx(j01 ** 2, abs=1e-3)


def test_flat_disk_richardson(j01):
    assert ball_eigenvalue(flat_model(), 1.0, 0, 2048)[0] == pytest.approx(j01 ** 2, rel=1e-6)


def test_hemisphere_fd():
    model = closed_model("sphere", 2)
    lam0 = smallest_eigenvalues(discretize_ball(model, HALF_PI, 0, 2048))[0]
    lam1 = smallest_eigenvalues(discretize_ball(model, HALF_PI, 1, 2048))[0]
    assert lam0 == pytest.approx(2.0, abs=1e-3)
    assert lam1 > 2.0
    assert ball_eigenvalue(model, HALF_PI, 0, 2048)[0] == pytest.approx(2.0, rel=1e-6)


def test_closed_sphere_spectra():
    s2 = closed_eigenvalues(closed_model("sphere", 2), 0, 2048, count=4)
    np.testing.assert_allclose(s2, [0, 2, 6, 12], atol=1e-2)
    s3 = closed_eigenvalues(closed_model("sphere", 3), 0, 2048, count=2)
    assert s3[1] == pytest.approx(3.0, abs=1e-2)
    # m=1 sector on S^2 starts at l(l+1) with l=1
    assert closed_eigenvalues(closed_model("sphere", 2), 1, 2048, count=1)[0] == pytest.approx(2.0, rel=1e-6)


@pytest.mark.parametrize("name, n", [("sphere", 2), ("paper-a", 3), ("paper-b", 2)])
def test_closed_kernel(name, n):
    pencil = discretize_closed(closed_model(name, n), 0, 2048)
    assert abs(smallest_eigenvalues(pencil)[0]) <= 1e-10 / pencil.h ** 2


@pytest.mark.parametrize(
    "model, r, exact",
    [
        (lambda: closed_model("sphere", 2), HALF_PI, 2.0),
        (lambda: closed_model("sphere", 3), HALF_PI, 3.0),
        (lambda: closed_model("sphere", 2, 4.0), math.pi / 4, 8.0),
    ],
)
def test_convergence_order(model, r, exact):
    m = model()
    errors = [abs(smallest_eigenvalues(discretize_ball(m, r, 0, N))[0] - exact) for N in (128, 256, 512)]
    for coarse, fine in zip(errors, errors[1:]):
        assert 3.5 <= coarse / fine <= 4.5


def test_convergence_order_flat(j01):
    errors = [abs(smallest_eigenvalues(discretize_ball(flat_model(), 1.0, 0, N))[0] - j01 ** 2) for N in (128, 256)]
    assert 3.5 <= errors[0] / errors[1] <= 4.5


@pytest.mark.parametrize("name, n", [("sphere", 2), ("paper-a", 3), ("paper-b", 2)])
def test_eigenvector_node_counts(name, n):
    model = closed_model(name, n)
    pencil = discretize_ball(model, model.l / 2, 0, 512)
    values = smallest_eigenvalues(pencil, 5)
    assert [node_count(eigenvector(pencil, lam)) for lam in values] == [0, 1, 2, 3, 4]


def test_sphere_ball_three_eigenvectors():
    pencil = discretize_ball(closed_model("sphere", 2), HALF_PI, 0, 1024)
    values = smallest_eigenvalues(pencil, 3)
    assert len(values) == 3
    vectors = [eigenvector(pencil, lam) for lam in values]
    assert [node_count(v) for v in vectors] == [0, 1, 2]
    assert np.all(vectors[0] > 0)


def test_eigenvector_solves_pencil():
    pencil = discretize_ball(closed_model("paper-b", 3), 4.0, 1, 256)
    lam = smallest_eigenvalues(pencil)[0]
    v = eigenvector(pencil, lam)
    A, B = pencil.dense()
    assert np.linalg.norm(A @ v - lam * B @ v) <= 1e-8 * np.linalg.norm(A @ v)


@pytest.mark.parametrize("name, n, m", [("paper-a", 2, 0), ("paper-b", 3, 2), ("sphere", 5, 1)])
def test_pencil_structure(name, n, m):
    model = closed_model(name, n)
    for pencil in (discretize_ball(model, 0.3 * model.l, m, 64), discretize_closed(model, m, 64)):
        A, B = pencil.dense()
        assert np.array_equal(A, A.T)
        assert np.all(pencil.mass > 0)
        assert np.all(pencil.offdiag <= 0)
        assert np.allclose(pencil.grid, (np.arange(pencil.N) + 0.5) * pencil.h)


def test_richardson_arithmetic():
    assert richardson_extrapolate(2.01, 2.0025, 2) == pytest.approx(2.0, abs=1e-15)
    assert richardson_extrapolate(1.0, 1.0, 4) == 1.0


def test_richardson_on_fd_levels(j01):
    model = closed_model("sphere", 2)
    a, b = (smallest_eigenvalues(discretize_ball(model, HALF_PI, 0, N))[0] for N in (1024, 2048))
    assert richardson_extrapolate(a, b, 2) == pytest.approx(2.0, rel=1e-6)
    a, b = (smallest_eigenvalues(discretize_ball(flat_model(), 1.0, 0, N))[0] for N in (1024, 2048))
    assert richardson_extrapolate(a, b, 2) == pytest.approx(j01 ** 2, rel=1e-6)


def test_discretize_errors():
    model = closed_model("sphere", 2)
    with pytest.raises(ValueError):
        discretize_ball(model, 1.0, 0, 8)
    with pytest.raises(ValueError):
        discretize_closed(model, 0, 16)
    with pytest.raises(DomainError):
        discretize_ball(model, math.pi, 0, 64)
    with pytest.raises(ModelError):
        discretize_closed(model_space(parse_profile("0"), 2, 1.0), 0, 64)


def test_shooting_matches_oracle_on_sphere_modes():
    model = closed_model("sphere", 3)
    for m in (0, 1, 2):
        shot = lambda1_ball(model, 1.2, m).lam
        fd = ball_eigenvalue(model, 1.2, m)[0]
        assert abs(shot - fd) <= max(1e-6, 1e-4 * shot)


def test_pencil_serialization():
    d = discretize_ball(closed_model("sphere", 2), 1.0, 0, 16).to_dict()
    assert d["problem"] == "ball" and d["N"] == 16 and len(d["offdiag"]) == 15
