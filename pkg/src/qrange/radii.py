"""Classical radii: numerical radius, Crawford number, transcendental radius.

w(T) and c(T) come from the support function of the classical numerical
range, h(theta) = lambda_max(Re(e^{-i theta} T)), which is an exact
Hermitian eigenvalue problem at every angle. m(T) = min_lambda ||T - lambda I||
is a convex problem in the plane.
"""
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DimMismatch
from .matcore import adjoint, as_cmat, spectral_norm
from .numrange import omega_q

N_GRID = 720
ANGLE_TOL = 1e-10


@dataclass(frozen=True)
class RadiusResult:
    value: float
    witness: Any
    iterations: int
    converged: bool


def _top_pairs(T, thetas):
    C = np.exp(-1j * np.asarray(thetas))[:, None, None] * T[None]
    H = (C + np.conj(np.swapaxes(C, 1, 2))) / 2
    vals, vecs = np.linalg.eigh(H)
    return vals, vecs


def classical_support(T, thetas):
    """Support values of W(T) = W_1(T) at the given angles."""
    T = as_cmat(T)
    return _top_pairs(T, thetas)[0][:, -1]


def _refine(T, sign, n_grid):
    """Maximize sign * h(theta): grid scan then bounded Brent around the best cell."""
    grid = 2 * np.pi * np.arange(n_grid) / n_grid
    h = sign * classical_support(T, grid)
    k = int(np.argmax(h))
    step = 2 * np.pi / n_grid
    f = lambda t: -sign * classical_support(T, [t])[0]
    res = minimize_scalar(f, bounds=(grid[k] - step, grid[k] + step), method="bounded",
                          options={"xatol": ANGLE_TOL})
    if -res.fun >= h[k]:
        theta, best, it = float(res.x), float(-res.fun), int(res.nfev)
    else:
        theta, best, it = float(grid[k]), float(h[k]), int(res.nfev)
    x = _top_pairs(T, [theta])[1][0][:, -1]
    return theta, best, x, it + n_grid, bool(res.success)


def numerical_radius(T, n_grid=N_GRID):
    """w(T) = max_theta lambda_max(Re(e^{-i theta} T)); witness is the maximizing eigenvector."""
    T = as_cmat(T)
    if spectral_norm(T) == 0:
        return RadiusResult(0.0, np.eye(T.shape[0], 1, dtype=complex)[:, 0], 0, True)
    _, best, x, it, ok = _refine(T, 1, n_grid)
    return RadiusResult(float(best), x, it, ok)


def crawford(T, n_grid=N_GRID):
    """Distance from 0 to W(T): max(0, -min_theta h(theta)).

    When 0 is outside W(T) the witness is the unit vector whose Rayleigh
    quotient is the nearest point of W(T); otherwise it is None.
    """
    T = as_cmat(T)
    theta, best, x, it, ok = _refine(T, -1, n_grid)
    d = best  # best = -min h
    if d <= 0:
        return RadiusResult(0.0, None, it, ok)
    return RadiusResult(float(d), x, it, ok)


def transcendental_radius(T, xatol=1e-12):
    """m(T) = min over complex lambda of ||T - lambda I||.

    The objective is convex, so minimizing exactly over Im(lambda) for each
    Re(lambda) (inner Brent) leaves a convex function of Re(lambda) (outer
    Brent). Any minimizer satisfies |lambda - c| <= 2 ||T - cI|| for the
    center c = tr(T)/n, which bounds both searches.
    """
    T = as_cmat(T)
    n = T.shape[0]
    c = np.trace(T) / n
    r = spectral_norm(T - c * np.eye(n))
    if r == 0:
        return RadiusResult(0.0, complex(c), 0, True)
    eye = np.eye(n)
    count = [0]

    def f(lam):
        count[0] += 1
        return spectral_norm(T - lam * eye)

    half = 2 * r + 1e-12
    opts = {"xatol": xatol * max(1.0, r)}

    def inner(xr):
        res = minimize_scalar(lambda y: f(xr + 1j * y), bounds=(c.imag - half, c.imag + half),
                              method="bounded", options=opts)
        return res.fun, res.x

    res = minimize_scalar(lambda xr: inner(xr)[0], bounds=(c.real - half, c.real + half),
                          method="bounded", options=opts)
    val, yi = inner(res.x)
    lam = complex(res.x, yi)
    best = f(lam)
    if f(c) < best:
        lam, best = complex(c), f(c)
    return RadiusResult(float(best), lam, count[0], bool(res.success))


def prasanna_radius(T, restarts=64, seed=0):
    """sqrt(sup_x ||Tx||^2 - |<Tx,x>|^2) by sphere ascent; equals m(T)."""
    T = as_cmat(T)
    if T.shape[0] == 1:
        return RadiusResult(0.0, np.ones(1, complex), 0, True)
    est = omega_q(T, 0.0, restarts=restarts, seed=seed)
    return RadiusResult(est.value, est.witness_x, est.restarts_used, est.converged)


def anticommutator(A, B):
    A, B = as_cmat(A, "A"), as_cmat(B, "B")
    if A.shape != B.shape:
        raise DimMismatch(f"shapes {A.shape} and {B.shape} differ")
    return A @ B + B @ A


def kittaneh_terms(T):
    """(||T||, ||T^2||, ||T*T + TT*||) used by the classical w bounds."""
    T = as_cmat(T)
    return spectral_norm(T), spectral_norm(T @ T), spectral_norm(adjoint(T) @ T + T @ adjoint(T))
