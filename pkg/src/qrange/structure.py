"""Operator classes, conjugations, the Aluthge transform and theorem harnesses.

Each ``check_*`` / ``run_*`` function returns a :class:`TheoremReport`:
whether the premises hold for the given input, whether the conclusion was
observed, and the numbers behind both. Convex hulls of unions are handled
through pointwise maxima of support functions.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DimMismatch, PremiseFailed, QZero, SingularX
from .matcore import adjoint, as_cmat, as_cvec, herm_eig, polar, psd_sqrt, sigma_min, spectral_norm
from .numrange import (ConvexRange, check_q, contains_zero, hausdorff, omega_q, support_table,
                       uniform_grid)

SUPPORT_RESTARTS = 8


@dataclass
class TheoremReport:
    theorem_id: str
    premises_ok: bool
    conclusion_ok: bool
    metrics: dict = field(default_factory=dict)
    notes: str = ""


def is_normal(T, tol=1e-10):
    T = as_cmat(T)
    D = adjoint(T) @ T - T @ adjoint(T)
    return spectral_norm(D) <= tol * spectral_norm(T) ** 2


def self_commutator(T):
    T = as_cmat(T)
    return adjoint(T) @ T - T @ adjoint(T)


def is_hyponormal(T, tol=1e-10):
    """T*T - TT* is positive semidefinite up to ``tol * ||T||^2``."""
    T = as_cmat(T)
    D = self_commutator(T)
    vals, _ = herm_eig(D, tol=max(1e-12, 1e-10 * spectral_norm(D)))
    return vals[0] >= -tol * spectral_norm(T) ** 2


@dataclass(frozen=True)
class ConjugationSpec:
    """The conjugation C x = u conj(x); u must be unitary and symmetric."""
    u: np.ndarray

    def __post_init__(self):
        u = as_cmat(self.u, "u")
        n = u.shape[0]
        if spectral_norm(adjoint(u) @ u - np.eye(n)) > 1e-10:
            raise ValueError("conjugation matrix is not unitary")
        if spectral_norm(u - u.T) > 1e-10:
            raise ValueError("conjugation matrix is not symmetric")
        object.__setattr__(self, "u", u)

    @property
    def dim(self):
        return self.u.shape[0]


def standard_conjugation(n):
    return ConjugationSpec(np.eye(n, dtype=complex))


def swap_conjugation(n=2):
    """C(x_1, ..., x_n) = (conj(x_n), ..., conj(x_1))."""
    return ConjugationSpec(np.fliplr(np.eye(n, dtype=complex)))


def conjugation_apply(c, v):
    v = as_cvec(v)
    if v.shape[0] != c.dim:
        raise DimMismatch(f"vector of length {v.shape[0]} for a conjugation on C^{c.dim}")
    return c.u @ np.conj(v)


def conjugate_operator(c, A):
    """Matrix of the linear map C A C, which is u conj(A) conj(u)."""
    A = as_cmat(A)
    if A.shape[0] != c.dim:
        raise DimMismatch(f"operator on C^{A.shape[0]} for a conjugation on C^{c.dim}")
    return c.u @ np.conj(A) @ np.conj(c.u)


def symmetry_defect(T, c):
    """||T - C T* C||."""
    return spectral_norm(as_cmat(T) - conjugate_operator(c, adjoint(T)))


def is_complex_symmetric(T, c, tol=1e-10):
    T = as_cmat(T)
    return symmetry_defect(T, c) <= tol * max(spectral_norm(T), 1e-300) or symmetry_defect(T, c) == 0


def aluthge(T, kernel="zero"):
    """|T|^{1/2} U |T|^{1/2} from the polar decomposition T = U |T|."""
    P = polar(T, kernel=kernel)
    R = psd_sqrt(P.modulus)
    return R @ P.isometry @ R


def spectrum_distance(A, B):
    """Optimal-matching distance between the eigenvalue multisets of A and B."""
    a = np.linalg.eigvals(as_cmat(A))
    b = np.linalg.eigvals(as_cmat(B))
    cost = np.abs(a[:, None] - b[None, :])
    i, j = linear_sum_assignment(cost)
    return float(cost[i, j].max())


def power_trace_gap(A, B):
    """max_k |tr(A^k) - tr(B^k)| / (n s^k) for k = 1..n, with s the larger norm.

    Equal power traces mean equal spectra (Newton's identities), and unlike
    eigenvalue matching this stays accurate for defective matrices.
    """
    A, B = as_cmat(A), as_cmat(B)
    n = A.shape[0]
    s = max(spectral_norm(A), spectral_norm(B), 1e-300)
    Ak, Bk = np.eye(n), np.eye(n)
    gap = 0.0
    for k in range(1, n + 1):
        Ak, Bk = Ak @ (A / s), Bk @ (B / s)
        gap = max(gap, abs(np.trace(Ak) - np.trace(Bk)) / n)
    return float(gap)


def _table(T, q, grid, restarts, seed, starts=None):
    return support_table(T, q, grid, restarts=restarts, seed=seed, starts=starts)


def check_thm1(T, q, grid=360, restarts=SUPPORT_RESTARTS, seed=0, tol=1e-8):
    """Normal T with 0 in W_q(T): is 0 an interior point?"""
    T = as_cmat(T)
    q = check_q(q)
    g = uniform_grid(grid)
    h, _ = _table(T, q, g, restarts, seed)
    contains, margin = contains_zero(ConvexRange(q, g, h))
    normal = is_normal(T)
    notes = ""
    if normal and contains and margin <= tol:
        notes = "0 lies on the boundary of W_q(T), not in its interior"
    return TheoremReport("T1", bool(normal and contains), bool(margin > tol),
                         {"margin": margin, "argmin_theta": float(g[int(np.argmin(h))])}, notes)


def circularity_defect(T, n_theta=90, restarts=SUPPORT_RESTARTS, seed=0):
    """max_theta |h(theta) - mean h| for W_0(T)."""
    h, _ = _table(as_cmat(T), 0.0, uniform_grid(n_theta), restarts, seed)
    return float(np.max(np.abs(h - h.mean())))


def check_thm2(T, c, q, n_theta=90, restarts=SUPPORT_RESTARTS, seed=0):
    """W_q(T) inside every rotated range e^{i t} W_{conj(q) e^{-i t}}(T*).

    metric ``inclusion_violation`` is the largest amount by which the support
    of W_q(T) exceeds that of one of the rotated ranges, over the grid of t
    and of support directions. ``adjoint_slice`` is the t = 0 member alone.
    """
    T = as_cmat(T)
    q = check_q(q)
    if not is_complex_symmetric(T, c):
        raise PremiseFailed(f"T is not complex symmetric for this conjugation "
                            f"(defect {symmetry_defect(T, c):.3e})")
    g = uniform_grid(n_theta)
    h, _ = _table(T, q, g, restarts, seed)
    Ts = adjoint(T)
    # rotated range j evaluated at direction k: support of W_{q_j}(T*) at g_k - g_j
    J, K = np.meshgrid(np.arange(n_theta), np.arange(n_theta), indexing="ij")
    qs = np.conj(q) * np.exp(-1j * g[J.ravel()])
    hr, _ = _table(Ts, qs, g[K.ravel()] - g[J.ravel()], restarts, seed)
    hr = hr.reshape(n_theta, n_theta)
    excess = h[None, :] - hr
    metrics = {"inclusion_violation": float(excess.max()), "adjoint_slice": float(excess[0].max())}
    ok = metrics["inclusion_violation"] <= 1e-5
    if abs(q) == 0:
        metrics["circularity_defect"] = float(np.max(np.abs(h - h.mean())))
        ok = ok and metrics["circularity_defect"] <= 1e-5
    return TheoremReport("T2", True, bool(ok), metrics)


def check_thm3(T, X, q, n_theta=360, restarts=SUPPORT_RESTARTS, seed=0):
    """Hyponormal T similar to T* via X with 0 outside W_q(X^{-1}): is T self-adjoint?"""
    T, X = as_cmat(T), as_cmat(X, "X")
    if T.shape != X.shape:
        raise DimMismatch("T and X must have the same size")
    q = float(np.real(q))
    if sigma_min(X) <= 1e-10:
        raise SingularX("X is not invertible")
    Xi = np.linalg.inv(X)
    residual = spectral_norm(Xi @ T @ X - adjoint(T))
    hypo = is_hyponormal(T)
    g = uniform_grid(n_theta)
    hx, _ = _table(Xi, q, g, restarts, seed)
    zero_in, margin = contains_zero(ConvexRange(q, g, hx))
    premises = bool(hypo and residual <= 1e-8 * max(1.0, spectral_norm(T)) and not zero_in)
    him, _ = _table(T, q, [np.pi / 2, 3 * np.pi / 2], restarts, seed)
    skew = spectral_norm(T - adjoint(T))
    imag = float(max(him.max(), 0.0))
    metrics = {"similarity_residual": residual, "xinv_margin": margin, "skew_norm": skew,
               "max_abs_imag": imag, "hyponormal": float(hypo)}
    notes = ""
    if skew <= 1e-6 < imag:
        notes = "T is self-adjoint but W_q(T) is not contained in the real line"
    return TheoremReport("T3", premises, bool(skew <= 1e-6 and imag <= 1e-6), metrics, notes)


def truncation(eigenvalues, n):
    """The diagonal truncation T_n = diag(l_1, ..., l_n) acting on C^n."""
    lam = np.asarray(eigenvalues, dtype=complex)
    if n > lam.size:
        raise ValueError(f"need at least {n} eigenvalues, got {lam.size}")
    return np.diag(lam[:n])


def witness_pair(n, q=0.5):
    """Unit x, y in C^n with <x, y> = q supported on e_1 and e_n (n >= 2).

    x = a e_1 + b e_n and y = -a e_1 + b e_n with a^2 = (1 - q)/2, b^2 = (1 + q)/2;
    for q = 1/2 this is x = (1/2, 0, ..., sqrt(3)/2), y = (-1/2, 0, ..., sqrt(3)/2).
    """
    a, b = np.sqrt((1 - q) / 2), np.sqrt((1 + q) / 2)
    x = np.zeros(n, complex)
    y = np.zeros(n, complex)
    x[0], x[-1] = a, b
    y[0], y[-1] = -a, b
    return x, y


def run_convergence(eigenvalues, q, dims, n_theta=180, restarts=SUPPORT_RESTARTS, seed=0, final_tol=1e-3):
    """Hausdorff distances d_H(W_q(T_n), W_q(T_N)) for diagonal truncations.

    N is the largest entry of ``dims``; the distance column covers the other
    entries and the final distance is the one for the second-largest n.
    """
    dims = [int(d) for d in dims]
    if dims != sorted(dims) or len(set(dims)) != len(dims):
        raise ValueError("dims must be strictly ascending")
    q = check_q(q)
    lam = np.asarray(eigenvalues, dtype=complex)
    g = uniform_grid(n_theta)
    ranges = {}
    metrics = {}
    for n in dims:
        Tn = truncation(lam, n)
        h, _ = _table(Tn, q, g, restarts, seed)
        ranges[n] = ConvexRange(q, g, h)
        metrics[f"margin[{n}]"] = float(h.min())
        if n >= 2 and q.imag == 0:
            x, y = witness_pair(n, q.real)
            metrics[f"witness[{n}]"] = float(np.vdot(y, Tn @ x).real)
    N = dims[-1]
    dist = [hausdorff(ranges[n], ranges[N]) for n in dims[:-1]]
    for n, d in zip(dims[:-1], dist):
        metrics[f"d_H[{n}]"] = d
        tail = float(np.max(np.abs(lam[n:N]))) if N > n else 0.0
        if abs(q) > 0:
            metrics[f"lipschitz[{n}]"] = d - (2 / abs(q)) * tail
    monotone = all(b <= a + 1e-6 for a, b in zip(dist, dist[1:]))
    final = dist[-1] if dist else 0.0
    metrics["final_d_H"] = final
    lip = all(v <= 1e-6 for k, v in metrics.items() if k.startswith("lipschitz"))
    notes = "" if lip else "Hausdorff distance exceeded (2/|q|) ||T_n - T_N||"
    return TheoremReport("T4", True, bool(monotone and final <= final_tol and lip), metrics, notes)


def check_thm5(T, q, n_theta=180, restarts=SUPPORT_RESTARTS, seed=0, omega_restarts=64):
    """W_q(aluthge(T)) inside conv(W_q(T) u W_q(T*)), plus the radius corollary."""
    T = as_cmat(T)
    q = check_q(q)
    A = aluthge(T)
    Ts = adjoint(T)
    g = uniform_grid(n_theta)
    hT, XT = _table(T, q, g, restarts, seed)
    hS, XS = _table(Ts, q, g, restarts, seed)
    hA, _ = _table(A, q, g, restarts, seed, starts=np.stack([XT, XS], axis=1))
    support_gap = float(np.max(hA - np.maximum(hT, hS)))
    oA = omega_q(A, abs(q), omega_restarts, seed).value
    oT = omega_q(T, abs(q), omega_restarts, seed).value
    oS = omega_q(Ts, abs(q), omega_restarts, seed).value
    metrics = {
        "support_violation": support_gap,
        "radius_excess": oA - max(oT, oS),
        "spectrum_shift": spectrum_distance(A, T),
        "trace_gap": power_trace_gap(A, T),
        "norm_excess": spectral_norm(A) - spectral_norm(T),
        "kernel_gap": spectral_norm(A - aluthge(T, kernel="unitary")),
        "reflection_defect": real_axis_defect(A, q, n_theta, restarts, seed) if q.imag == 0 else np.nan,
    }
    ok = support_gap <= 1e-5 and metrics["radius_excess"] <= 1e-6
    return TheoremReport("T5", True, bool(ok), metrics)


def real_axis_defect(T, q, n_theta=180, restarts=SUPPORT_RESTARTS, seed=0):
    """max_theta |h(theta) - h(-theta)|: zero when W_q(T) is symmetric about the real axis."""
    g = uniform_grid(n_theta)
    h, _ = _table(as_cmat(T), q, g, restarts, seed)
    mirror = h[(-np.arange(n_theta)) % n_theta]
    return float(np.max(np.abs(h - mirror)))


def random_perturbation(dim, eps, seed):
    rng = np.random.default_rng(seed)
    K = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return K * (eps / spectral_norm(K))


def perturbation_trial(T, K, q, n_theta=120, restarts=SUPPORT_RESTARTS, seed=0):
    """(forward deficit, Hausdorff distance) between W_q(T) and W_q(T + K).

    Each table is re-run from the other's maximizers, so the final T + K
    table is at least the T table minus ||K|| everywhere.
    """
    g = uniform_grid(n_theta)
    TK = T + K
    hT, XT = _table(T, q, g, restarts, seed)
    hK, XK = _table(TK, q, g, restarts, seed, starts=XT[:, None])
    h2, X2 = _table(T, q, g, restarts, seed, starts=XK[:, None])
    up = h2 > hT
    hT, XT = np.where(up, h2, hT), np.where(up[:, None], X2, XT)
    h3, _ = _table(TK, q, g, restarts, seed, starts=XT[:, None])
    hK = np.maximum(hK, h3)
    return float(np.max(hT - hK)), float(np.max(np.abs(hT - hK)))


def run_perturbation(T, q, seeds, eps_grid, n_theta=120, restarts=SUPPORT_RESTARTS):
    """Random K with ||K|| = eps: forward deficit <= ||K|| and d_H <= (2/q) ||K||."""
    T = as_cmat(T)
    q = float(np.real(q))
    if q == 0:
        raise QZero("the Lipschitz constant 2/q needs q > 0")
    if not 0 < q <= 1:
        raise ValueError("q must lie in (0, 1]")
    trials = []
    for sd in seeds:
        for eps in eps_grid:
            K = random_perturbation(T.shape[0], eps, sd)
            nk = spectral_norm(K)
            fwd, dh = perturbation_trial(T, K, q, n_theta, restarts, sd)
            trials.append((sd, eps, nk, fwd, dh))
    fwd_ok = all(f <= nk + 1e-6 for _, _, nk, f, _ in trials)
    lip_ok = all(d <= (2 / q) * nk + 1e-6 for _, _, nk, _, d in trials)
    ratios = [d / nk for _, _, nk, _, d in trials if nk > 0]
    metrics = {
        "trials": float(len(trials)),
        "max_forward_excess": max((f - nk for _, _, nk, f, _ in trials), default=0.0),
        "max_lipschitz_ratio": max(ratios, default=0.0),
        "constant": 2 / q,
    }
    for sd, eps, nk, fwd, dh in trials:
        metrics[f"ratio[seed={sd},eps={eps:g}]"] = dh / nk if nk > 0 else 0.0
    return TheoremReport("T6", True, bool(fwd_ok and lip_ok), metrics)


def zero_exclusion_scan(T, q_grid, n_theta=360, restarts=SUPPORT_RESTARTS, seed=0):
    """(q, contains_zero, margin) for each q: tests whether 0 stays outside W_q(T)."""
    T = as_cmat(T)
    g = uniform_grid(n_theta)
    out = []
    for q in q_grid:
        h, _ = _table(T, q, g, restarts, seed)
        contains, margin = contains_zero(ConvexRange(check_q(q), g, h))
        out.append((float(np.real(q)), bool(contains), margin))
    return out
