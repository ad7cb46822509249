"""Finite-difference oracle for the radial operator.

The radial operator is written in divergence form,

    -(w phi')' + m(m+n-2) f^(n-3) phi = lam f^(n-1) phi,   w = f^(n-1),

and discretised by finite volumes on a cell-centred grid t_i = (i - 1/2) h.
No unknown sits on a pole; a pole face carries w = 0, so the regularity
condition there is natural. A Dirichlet wall at t = r uses a half-cell ghost.
The result is a symmetric tridiagonal stiffness matrix A and a positive
diagonal mass B. Eigenvalues come from Sturm-sequence bisection on the
similar matrix B^(-1/2) A B^(-1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import DomainError, ModelError

SCHEME = "staggered-fd2-richardson"
EIGEN_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class TridiagonalPencil:
    diag: np.ndarray
    offdiag: np.ndarray
    mass: np.ndarray
    grid: np.ndarray
    h: float
    problem: str
    r: float | None
    m: int

    @property
    def N(self):
        return len(self.diag)

    def symmetrized(self):
        """(d, e) of the tridiagonal B^(-1/2) A B^(-1/2)."""
        d = self.diag / self.mass
        e = self.offdiag / np.sqrt(self.mass[:-1] * self.mass[1:])
        return d, e

    def dense(self):
        A = np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return A, np.diag(self.mass)

    def to_dict(self):
        return {
            "problem": self.problem,
            "N": self.N,
            "r": self.r,
            "m": self.m,
            "diag": self.diag.tolist(),
            "offdiag": self.offdiag.tolist(),
            "mass": self.mass.tolist(),
        }


def _assemble(model, centers, faces, h, m, dirichlet_end, problem, r):
    n = model.n
    fc = model.warp.f(centers)
    ff = model.warp.f(faces)
    w = ff ** (n - 1)
    w[0] = 0.0  # centre pole
    if problem == "closed":
        w[-1] = 0.0  # antipodal pole
    A_diag = (w[:-1] + w[1:]) / h
    if dirichlet_end:
        # ghost value -phi_N across the wall: flux w (0 - phi_N)/(h/2)
        A_diag[-1] = w[-2] / h + 2.0 * w[-1] / h
    if m:
        A_diag = A_diag + m * (m + n - 2) * fc ** (n - 3) * h
    offdiag = -w[1:-1] / h
    mass = fc ** (n - 1) * h
    if np.any(mass <= 0):
        raise ModelError("warp is not positive at every cell centre")
    return TridiagonalPencil(A_diag, offdiag, mass, centers, h, problem, r, int(m))


def discretize_ball(model, r, m=0, N=1024):
    """Pencil for the Dirichlet problem on the ball of radius r, angular mode m."""
    if N < 16:
        raise ValueError("N must be >= 16")
    if not r > 0 or (model.closes and r >= model.l) or r > model.l * (1 + 1e-12):
        raise DomainError(f"radius {r} out of range for a model of length {model.l}")
    h = r / N
    faces = np.arange(N + 1) * h
    faces[-1] = r
    centers = (np.arange(N) + 0.5) * h
    return _assemble(model, centers, faces, h, m, True, "ball", float(r))


def discretize_closed(model, m=0, N=1024):
    """Pencil for the closed manifold obtained by compactifying at t = l."""
    if N < 32:
        raise ValueError("N must be >= 32")
    if not model.closes:
        raise ModelError("closed spectrum requires a model whose warp closes")
    l = model.l
    h = l / N
    faces = np.arange(N + 1) * h
    faces[-1] = l
    centers = (np.arange(N) + 0.5) * h
    return _assemble(model, centers, faces, h, m, False, "closed", None)


def sturm_count(d, e2, x):
    """Number of eigenvalues of the symmetric tridiagonal (d, e) below x.
    ``e2`` holds the squared off-diagonal."""
    count = 0
    q = d[0] - x
    if q < 0.0:
        count += 1
    tiny = 1e-300
    for di, ei2 in zip(d[1:], e2):
        if q == 0.0:
            q = tiny
        q = di - x - ei2 / q
        if q < 0.0:
            count += 1
    return count


def _gershgorin(d, e):
    ae = np.abs(e)
    radius = np.zeros_like(d)
    radius[:-1] += ae
    radius[1:] += ae
    return float(np.min(d - radius)), float(np.max(d + radius))


def smallest_eigenvalues(pencil, count=1, rtol=EIGEN_RTOL):
    """The ``count`` smallest generalized eigenvalues of (A, B), ascending."""
    if not 1 <= count <= pencil.N:
        raise ValueError(f"count must be in [1, {pencil.N}]")
    d, e = pencil.symmetrized()
    d_list, e2_list = d.tolist(), (e * e).tolist()
    lo_g, hi_g = _gershgorin(d, e)
    scale = max(abs(lo_g), abs(hi_g), 1.0)
    atol = 8 * np.finfo(float).eps * scale

    # cheap upper bracket: double from a small guess until enough eigenvalues lie below
    upper = max(1.0, abs(lo_g)) if lo_g < 0 else 1.0
    while upper < hi_g and sturm_count(d_list, e2_list, upper) < count:
        upper *= 2.0
    upper = min(upper, hi_g)

    values = []
    lower = lo_g
    for k in range(count):
        a, b = lower, upper
        while b - a > max(rtol * max(abs(a), abs(b)), atol):
            mid = 0.5 * (a + b)
            if sturm_count(d_list, e2_list, mid) > k:
                b = mid
            else:
                a = mid
        values.append(0.5 * (a + b))
        lower = a
    return np.array(values)


def eigenvector(pencil, lam, iterations=3):
    """Generalized eigenvector for ``lam`` by shifted inverse iteration (B-scaled back)."""
    d, e = pencil.symmetrized()
    N = len(d)
    shift = lam * (1 + 1e-12) + 1e-14
    ab = np.zeros((3, N))
    ab[0, 1:] = e
    ab[1] = d - shift
    ab[2, :-1] = e
    v = np.ones(N) / math.sqrt(N)
    for _ in range(iterations):
        v = solve_banded((1, 1), ab, v)
        v /= np.linalg.norm(v)
    y = v / np.sqrt(pencil.mass)
    y = y / np.max(np.abs(y))
    return y if y[0] >= 0 else -y


def node_count(vector):
    s = np.sign(vector)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def richardson_extrapolate(value_N, value_2N, order=2):
    """Cancel the leading h^order error term of two grid levels."""
    p = 2 ** order
    return (p * value_2N - value_N) / (p - 1)


def ball_eigenvalue(model, r, m=0, N=2048, count=1):
    """Richardson-extrapolated ball eigenvalues from grids N/2 and N."""
    coarse = smallest_eigenvalues(discretize_ball(model, r, m, N // 2), count)
    fine = smallest_eigenvalues(discretize_ball(model, r, m, N), count)
    return richardson_extrapolate(coarse, fine, 2)


def closed_eigenvalues(model, m=0, N=2048, count=3):
    """Richardson-extrapolated closed-manifold eigenvalues from grids N/2 and N."""
    coarse = smallest_eigenvalues(discretize_closed(model, m, N // 2), count)
    fine = smallest_eigenvalues(discretize_closed(model, m, N), count)
    return richardson_extrapolate(coarse, fine, 2)
