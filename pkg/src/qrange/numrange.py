"""The q-numerical range W_q(T) = {<Tx, y> : ||x|| = ||y|| = 1, <x, y> = q}.

Inner products are linear in the first slot: <u, v> = v^H u. Every
admissible pair can be written y = conj(q) x + s z with s = sqrt(1 - |q|^2)
and z a unit vector orthogonal to x. Optimizing over z in closed form
leaves a problem in x alone:

    support at angle theta:  max_x Re(e^{-i theta} q a) + s ||w||
    radius omega_q(T):       max_x |q| |a| + s ||w||

where a = <Tx, x> and w = Tx - a x. All values returned here are attained
by explicit vectors, so they are lower estimates of the true suprema.
"""
from dataclasses import dataclass, field

import numpy as np

from . import _optimizer as opt
from .errors import DimMismatch, GridMismatch, InfeasibleQ
from .matcore import as_cmat, spectral_norm

Q_TOL = 1e-12
DEFAULT_RESTARTS = 64


def check_q(q):
    q = complex(q)
    if abs(q) > 1 + Q_TOL:
        raise InfeasibleQ(f"|q| = {abs(q)} exceeds 1")
    if abs(q) > 1:
        q = q / abs(q)
    return q


def _s(q):
    return float(np.sqrt(max(0.0, 1.0 - abs(q) ** 2)))


def _check_dim1(q):
    if abs(abs(q) - 1) > Q_TOL:
        raise InfeasibleQ("dimension 1 admits only |q| = 1")


@dataclass(frozen=True)
class AdmissiblePair:
    x: np.ndarray
    y: np.ndarray
    q: complex

    def value(self, T):
        """The point <Tx, y> of W_q(T)."""
        return complex(np.vdot(self.y, np.asarray(T) @ self.x))


def pair_from_x(x, z, q):
    """Build y = conj(q) x + s z after normalizing x and orthogonalizing z."""
    q = check_q(q)
    x = np.asarray(x, dtype=complex)
    x = x / np.linalg.norm(x)
    s = _s(q)
    if s == 0:
        return AdmissiblePair(x, np.conj(q) * x, q)
    z = np.asarray(z, dtype=complex)
    z = z - np.vdot(x, z) * x
    z = z / np.linalg.norm(z)
    return AdmissiblePair(x, np.conj(q) * x + s * z, q)


def sample_pairs(q, n, dim, rng):
    """``n`` random admissible pairs as arrays X, Y of shape (n, dim)."""
    q = check_q(q)
    if dim == 1:
        _check_dim1(q)
    X = opt.unit_rows(rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim)))
    Z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    if dim == 1:
        return X, np.conj(q) * X
    Z = Z - np.einsum("bi,bi->b", X.conj(), Z)[:, None] * X
    Z = opt.unit_rows(Z)
    return X, np.conj(q) * X + _s(q) * Z


def sample_pair(q, seed, dim):
    X, Y = sample_pairs(q, 1, dim, np.random.default_rng(seed))
    return AdmissiblePair(X[0], Y[0], check_q(q))


def start_vectors(T, count, seed):
    """Deterministic random starting points for the sphere ascent.

    Rows come from ``default_rng(seed)`` and alternate between plain Gaussian
    vectors and vectors with log-uniform coordinate scales, which start some
    runs near sparse directions. Row i never depends on ``count``.
    """
    n = T.shape[0]
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((count, n, 3))
    X = raw[..., 0] + 1j * raw[..., 1]
    scales = 10.0 ** (-np.abs(raw[..., 2]) / 2)
    X[1::2] *= scales[1::2]
    return opt.unit_rows(X + 1e-300)


@dataclass(frozen=True)
class OmegaEstimate:
    value: float
    witness_x: np.ndarray
    witness_phase: float
    restarts_used: int
    spread: float
    converged: bool = True


def omega_objective(T, x, q):
    """|q| |<Tx,x>| + s ||Tx - <Tx,x> x|| for a single unit vector x."""
    T = np.asarray(T, dtype=complex)
    x = np.asarray(x, dtype=complex)
    x = x / np.linalg.norm(x)
    q = check_q(q)
    val = opt.evaluate(T, x[None], np.array([q]), np.ones(1), np.array([_s(q)]), True)[0]
    return float(val[0])


def omega_pair(T, est, q):
    """An admissible pair whose value has modulus ``est.value``."""
    T = np.asarray(T, dtype=complex)
    q = check_q(q)
    x = est.witness_x
    if T.shape[0] == 1:
        return AdmissiblePair(x, np.conj(q) * x, q)
    _, _, a, W, nw = opt.evaluate(T, x[None], np.array([q]), np.ones(1), np.array([_s(q)]), True)
    e = opt.phase(np.conj(q * a))
    Y = opt.partner(x[None], W, nw, np.array([q]), e, np.array([_s(q)]))
    return AdmissiblePair(x, Y[0], q)


def omega_q_many(T, qs, restarts=DEFAULT_RESTARTS, seed=0, extra_starts=None):
    """omega_q for several q values in one batched ascent (shared starts)."""
    T = as_cmat(T)
    qs = [check_q(q) for q in qs]
    n = T.shape[0]
    if n == 1:
        # no admissible pair exists for |q| < 1; use the formal value {t q},
        # which is W_q(t I_k) for every k >= 2
        t = abs(T[0, 0])
        return [OmegaEstimate(float(t * abs(q)), np.ones(1, complex), float(np.angle(q * T[0, 0])), 0, 0.0)
                for q in qs]
    X0 = start_vectors(T, restarts, seed)
    if extra_starts is not None:
        X0 = np.vstack([X0, opt.unit_rows(np.atleast_2d(np.asarray(extra_starts, dtype=complex)))])
    R = X0.shape[0]
    Q = np.repeat(np.array(qs, dtype=complex), R)
    vals, X, _, conv = opt.maximize(T, np.tile(X0, (len(qs), 1)), Q, modulus=True)
    out = []
    for k, q in enumerate(qs):
        v = vals[k * R:(k + 1) * R]
        c = conv[k * R:(k + 1) * R]
        i = int(np.argmax(v))
        x = X[k * R + i]
        a = np.vdot(x, T @ x)
        good = v[c] if np.any(c) else v
        out.append(OmegaEstimate(value=float(v[i]), witness_x=x, witness_phase=float(np.angle(q * a)),
                                 restarts_used=R, spread=float(good.max() - good.min()),
                                 converged=bool(c[i])))
    return out


def omega_q(T, q, restarts=DEFAULT_RESTARTS, seed=0):
    """Lower estimate of the q-numerical radius by multi-start ascent.

    Only |q| matters, since W_q(T) = (q/|q|) W_|q|(T).
    """
    return omega_q_many(T, [q], restarts, seed)[0]


def tsing_ellipse(T, q):
    """W_q of a 2x2 matrix as (center, semi-major, semi-minor, major-axis angle).

    W_q(T) is the closed elliptical disk with foci q*l1 and q*l2, where l1, l2
    are the eigenvalues, and minor axis c + s*sqrt(tr(T*T) - 2 Re(l1 conj(l2)))
    with c = sqrt(tr(T*T) - |l1|^2 - |l2|^2).
    """
    T = as_cmat(T)
    if T.shape != (2, 2):
        raise DimMismatch("tsing_ellipse needs a 2x2 matrix")
    q = check_q(q)
    l1, l2 = np.linalg.eigvals(T)
    fro2 = float(np.sum(np.abs(T) ** 2))
    c = np.sqrt(max(0.0, fro2 - abs(l1) ** 2 - abs(l2) ** 2))
    minor = c + _s(q) * np.sqrt(max(0.0, fro2 - 2 * (l1 * np.conj(l2)).real))
    major = np.sqrt(minor ** 2 + abs(q) ** 2 * abs(l1 - l2) ** 2)
    center = q * (l1 + l2) / 2
    angle = float(np.angle(q * (l1 - l2))) if abs(l1 - l2) > 0 else 0.0
    return complex(center), float(major / 2), float(minor / 2), angle


def omega_q_2x2_closed(T, q):
    """Closed-form omega_q for 2x2 T, or None when no closed form applies.

    Applies when the farthest point from 0 of the ellipse is an end of its
    major axis: the center lies on the major-axis line (or is 0), or the
    ellipse is a disk. In the reduced form [[g, a], [b, g]] with g, a, b >= 0
    this reads q g + (1/2) sqrt(((a - b) + s (a + b))^2 + 4 q^2 a b).
    """
    q = abs(check_q(q))
    center, A, B, angle = tsing_ellipse(T, q)
    r = abs(center)
    scale = max(1.0, spectral_norm(T))
    if r <= 1e-13 * scale or A - B <= 1e-13 * scale:
        return r + A
    off = np.sin(np.angle(center) - angle)
    if abs(off) <= 1e-12:
        return r + A
    return None


def omega_q_2x2_reduced_form(gamma, a, b, q):
    """q g + (1/2) sqrt((a + b)^2 + 4ab(1 - q^2)) for [[g, a], [b, g]].

    Kept for comparison only: it matches the ellipse only at q = 1.
    """
    return gamma * q + 0.5 * np.sqrt((a + b) ** 2 + 4 * a * b * (1 - q * q))


def support_table(T, q, thetas, restarts=8, seed=0, starts=None, passes=4):
    """Support values of W_q(T) at the given angles, with their maximizers.

    ``q`` is a scalar or one value per angle. ``starts`` may hold extra start
    vectors per angle, shape (len(thetas), k, n). After the independent runs,
    each angle is retried from the maximizers of its neighbors (the grid is
    treated as cyclic) until nothing improves.
    Returns (values, X) with X[k] the maximizing unit vector for angle k.
    """
    T = as_cmat(T)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    K, n = len(thetas), T.shape[0]
    qv = np.asarray(q, dtype=complex)
    qv = np.array([check_q(v) for v in np.broadcast_to(qv, (K,))], dtype=complex)
    if n == 1:
        vals = (np.exp(-1j * thetas) * qv * T[0, 0]).real
        return vals, np.ones((K, 1), complex)
    E = np.exp(-1j * thetas)
    X0 = start_vectors(T, restarts, seed)
    rows = [np.broadcast_to(X0, (K, restarts, n))]
    if starts is not None:
        rows.append(np.asarray(starts, dtype=complex).reshape(K, -1, n))
    S = np.concatenate(rows, axis=1)
    R = S.shape[1]
    vals, X, _, _ = opt.maximize(T, S.reshape(-1, n), np.repeat(qv, R), np.repeat(E, R))
    vals = vals.reshape(K, R)
    best = np.argmax(vals, axis=1)
    h = vals[np.arange(K), best]
    Xb = X.reshape(K, R, n)[np.arange(K), best]
    if np.all(np.abs(qv) >= 1) or K < 3:
        return h, Xb
    scale = max(1.0, spectral_norm(T))
    for _ in range(passes):
        S = np.stack([np.roll(Xb, 1, axis=0), np.roll(Xb, -1, axis=0)], axis=1)
        v, Xn, _, _ = opt.maximize(T, S.reshape(-1, n), np.repeat(qv, 2), np.repeat(E, 2))
        v = v.reshape(K, 2)
        j = np.argmax(v, axis=1)
        vb = v[np.arange(K), j]
        better = vb > h + 1e-13 * scale
        if not np.any(better):
            break
        h = np.where(better, vb, h)
        Xb[better] = Xn.reshape(K, 2, n)[np.arange(K), j][better]
    return h, Xb


def support_function(T, q, theta, restarts=DEFAULT_RESTARTS, seed=0):
    return float(support_table(T, q, [theta], restarts, seed)[0][0])


def support_points(T, q, thetas, X):
    """Boundary points <Tx, y> realized by the maximizers of a support table."""
    T = as_cmat(T)
    q = check_q(q)
    n = T.shape[0]
    E = np.exp(-1j * np.asarray(thetas, dtype=float))
    K = len(E)
    qq = np.full(K, q)
    s = np.full(K, _s(q))
    if n == 1:
        return q * T[0, 0] * np.ones(K, complex)
    _, Tx, a, W, nw = opt.evaluate(T, X, qq, E, s, False)
    Y = opt.partner(X, W, nw, qq, E, s)
    return np.einsum("bi,bi->b", Y.conj(), Tx)


def uniform_grid(n_theta):
    return 2 * np.pi * np.arange(n_theta) / n_theta


def convex_hull(points):
    """Counter-clockwise hull of planar points (monotone chain).

    Coordinates are snapped to a grid of 1e-12 times the point scale first,
    so rounding noise does not turn a single point into a tiny polygon.
    """
    z = np.asarray(points, dtype=complex).ravel()
    if z.size:
        tol = 1e-12 * max(1.0, float(np.abs(z).max()))
        z = (np.round(z.real / tol) + 1j * np.round(z.imag / tol)) * tol
    pts = sorted(set((float(p.real), float(p.imag)) for p in z))
    if len(pts) <= 2:
        return np.array([complex(*p) for p in pts])

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array([complex(*p) for p in lower[:-1] + upper[:-1]])


@dataclass
class ConvexRange:
    """Support table h(theta_k) of W_q(T), a sample cloud and a boundary polygon."""
    q: complex
    grid: np.ndarray
    support: np.ndarray
    cloud: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    hull: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))

    @classmethod
    def from_support(cls, grid, support, q=1.0):
        return cls(q=complex(q), grid=np.asarray(grid, float), support=np.asarray(support, float))

    def envelope_excess(self, points):
        """max over points and angles of Re(e^{-i theta} p) - h(theta)."""
        p = np.asarray(points, dtype=complex).ravel()
        if p.size == 0:
            return -np.inf
        proj = (np.exp(-1j * self.grid)[:, None] * p[None, :]).real
        return float(np.max(proj - self.support[:, None]))


def range_cloud(T, q, n_theta=720, n_samples=2000, seed=0, restarts=8, extra_pairs=()):
    """Approximate W_q(T): support table, random sample cloud and hull.

    The hull is the convex hull of the boundary points that attain the
    support values, so it is an inner approximation of W_q(T).
    """
    T = as_cmat(T)
    q = check_q(q)
    if n_theta < 16:
        raise ValueError("n_theta must be at least 16")
    grid = uniform_grid(n_theta)
    h, X = support_table(T, q, grid, restarts=restarts, seed=seed)
    bpts = support_points(T, q, grid, X)
    rng = np.random.default_rng(seed)
    Xs, Ys = sample_pairs(q, n_samples, T.shape[0], rng)
    cloud = np.einsum("bi,bi->b", Ys.conj(), Xs @ T.T)
    extra = [AdmissiblePair(*p[:2], q).value(T) if not isinstance(p, AdmissiblePair) else p.value(T)
             for p in extra_pairs]
    if extra:
        cloud = np.concatenate([cloud, np.array(extra, complex)])
    # the envelope must cover every attained point; raise it where the cloud beat the ascent
    proj = (np.exp(-1j * grid)[:, None] * np.concatenate([cloud, bpts])[None, :]).real
    h = np.maximum(h, proj.max(axis=1))
    return ConvexRange(q=q, grid=grid, support=h, cloud=cloud, hull=convex_hull(bpts))


def contains_zero(R, tol=1e-8):
    """(contains, margin) with margin = min_k h(theta_k).

    A positive margin means 0 is interior at grid resolution.
    """
    margin = float(np.min(R.support))
    return margin >= -tol, margin


def hausdorff(R1, R2):
    """Hausdorff distance of two convex ranges on the same angular grid."""
    if len(R1.grid) != len(R2.grid) or not np.allclose(R1.grid, R2.grid, rtol=0, atol=1e-12):
        raise GridMismatch("ranges are sampled on different angular grids")
    return float(np.max(np.abs(np.asarray(R1.support) - np.asarray(R2.support))))
