"""Batched ascent on the unit sphere for the single-vector form of W_q.

For a unit vector x write a = <Tx, x> and w = Tx - a x. Every row of a batch
maximizes one of

    support:  Re(e * q * a) + s * ||w||          (e = exp(-i theta))
    modulus:  |q| * |a| + s * ||w||

with s = sqrt(1 - |q|^2). Rows are independent: a row's result depends only
on its own start vector, so adding rows never changes the others.

Two moves are tried per sweep. The first is the closed-form alternation
"best y for this x, then best x for that y", which never decreases the
objective. The second is a projected gradient step with a per-row step
length that doubles on success and shrinks on failure.
"""
import numpy as np

MAX_SWEEPS = 5000
GTOL = 1e-9


def evaluate(T, X, q, e, s, modulus):
    Tx = X @ T.T
    a = np.einsum("bi,bi->b", X.conj(), Tx)
    W = Tx - a[:, None] * X
    nw = np.linalg.norm(W, axis=1)
    if modulus:
        val = np.abs(q) * np.abs(a) + s * nw
    else:
        val = (e * q * a).real + s * nw
    return val, Tx, a, W, nw


def unit_rows(X):
    return X / np.linalg.norm(X, axis=1)[:, None]


def phase(z):
    z = np.asarray(z, dtype=complex)
    return np.where(np.abs(z) > 0, np.exp(1j * np.angle(z)), 1.0 + 0j)


def partner(X, W, nw, q, e, s):
    """Optimal y for each row: y = conj(q) x + s z with z along e*w."""
    # w is orthogonal to x in exact arithmetic; project again so y stays admissible
    Z = W - np.einsum("bi,bi->b", X.conj(), W)[:, None] * X
    nz = np.linalg.norm(Z, axis=1)
    flat = nz <= 1e-300
    Z = Z * (e / np.where(flat, 1, nz))[:, None]
    Z[flat] = 0
    if np.any(flat):
        # w = 0: any unit z orthogonal to x is optimal; pick one deterministically
        for i in np.nonzero(flat & (s > 0))[0]:
            Z[i] = _orthogonal_unit(X[i])
    return np.conj(q)[:, None] * X + s[:, None] * Z


def _orthogonal_unit(x):
    k = int(np.argmin(np.abs(x)))
    v = np.zeros_like(x)
    v[k] = 1.0
    v = v - np.vdot(x, v) * x
    return v / np.linalg.norm(v)


def _alternate(T, X, W, nw, q, e, s):
    Y = partner(X, W, nw, q, e, s)
    U = Y @ T.conj()
    Up = U - np.einsum("bi,bi->b", Y.conj(), U)[:, None] * Y
    nu = np.linalg.norm(Up, axis=1)
    flat = nu <= 1e-300
    if np.any(flat):
        # T*y is parallel to y: every z' orthogonal to y is optimal, keep x's own direction
        Xf, Yf = X[flat], Y[flat]
        Up[flat] = Xf - np.einsum("bi,bi->b", Yf.conj(), Xf)[:, None] * Yf
        nu = np.linalg.norm(Up, axis=1)
        for i in np.nonzero(nu <= 1e-300)[0]:
            Up[i] = _orthogonal_unit(Y[i])
        nu = np.linalg.norm(Up, axis=1)
        e = np.where(flat, 1.0, e)
    Zp = Up * (np.conj(e) / nu)[:, None]
    return unit_rows(q[:, None] * Y + s[:, None] * Zp)


def _eigen_rows(T, q, e):
    """Exact support rows for |q| = 1: top eigenvector of Re(e q T)."""
    n = T.shape[0]
    C = (e * q)[:, None, None] * T[None]
    H = (C + np.conj(np.swapaxes(C, 1, 2))) / 2
    vals, vecs = np.linalg.eigh(H)
    return vals[:, -1], vecs[:, :, -1].reshape(-1, n)


def maximize(T, X0, q, e=None, modulus=False, max_sweeps=MAX_SWEEPS, gtol=GTOL):
    """Run every row of ``X0`` to a local maximum.

    ``q`` and ``e`` are per-row complex arrays (``e`` ignored in modulus
    mode). Returns (values, maximizers, sweeps, converged flags).
    """
    T = np.asarray(T, dtype=complex)
    X = unit_rows(np.array(X0, dtype=complex))
    B = X.shape[0]
    q = np.broadcast_to(np.asarray(q, dtype=complex), (B,)).copy()
    e = np.ones(B, complex) if e is None else np.broadcast_to(np.asarray(e, dtype=complex), (B,)).copy()
    s = np.sqrt(np.clip(1.0 - np.abs(q) ** 2, 0.0, None))
    nrm = float(np.linalg.norm(T, 2))
    converged = np.zeros(B, bool)
    if nrm == 0.0 or B == 0:
        return np.zeros(B), X, 0, np.ones(B, bool)

    if not modulus:
        exact = s == 0
        if np.any(exact):
            idx = np.nonzero(exact)[0]
            _, V = _eigen_rows(T, q[idx], e[idx])
            X[idx] = V
            converged[idx] = True

    val, Tx, a, W, nw = evaluate(T, X, q, e, s, modulus)
    TH = T.conj()
    eta = np.full(B, 0.5 / nrm)
    active = ~converged
    sweeps = 0

    def accept(idx, ok, Xn, parts):
        sel = idx[ok]
        vn, Txn, an, Wn, nwn = parts
        X[sel] = Xn[ok]
        val[sel] = vn[ok]
        Tx[sel] = Txn[ok]
        a[sel] = an[ok]
        W[sel] = Wn[ok]
        nw[sel] = nwn[ok]

    while sweeps < max_sweeps:
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        sweeps += 1
        qa, sa = q[idx], s[idx]
        if modulus:
            e[idx] = np.conj(phase(qa * a[idx]))
        ea = e[idx]

        Xn = _alternate(T, X[idx], W[idx], nw[idx], qa, ea, sa)
        parts = evaluate(T, Xn, qa, ea, sa, modulus)
        accept(idx, parts[0] > val[idx], Xn, parts)
        if modulus:
            e[idx] = np.conj(phase(qa * a[idx]))
            ea = e[idx]
            val[idx] = np.abs(qa) * np.abs(a[idx]) + sa * nw[idx]

        Xa, Txa, aa, Wa, nwa = X[idx], Tx[idx], a[idx], W[idx], nw[idx]
        c = ea * qa
        g = c[:, None] * Txa + np.conj(c)[:, None] * (Xa @ TH)
        safe = nwa > 1e-300
        gw = (Wa @ TH - np.conj(aa)[:, None] * Txa) / np.where(safe, nwa, 1)[:, None]
        gw[~safe] = 0
        g = g + sa[:, None] * gw
        g = g - np.einsum("bi,bi->b", Xa.conj(), g).real[:, None] * Xa
        gn = np.linalg.norm(g, axis=1)

        Xn = unit_rows(Xa + eta[idx, None] * g)
        parts = evaluate(T, Xn, qa, ea, sa, modulus)
        ok = parts[0] > val[idx]
        accept(idx, ok, Xn, parts)
        eta[idx] = np.where(ok, eta[idx] * 2.0, eta[idx] * 0.3)

        done = (gn < gtol * nrm) | (eta[idx] * nrm < 1e-14)
        converged[idx[done]] = True
        active[idx[done]] = False

    # final values recomputed from the returned vectors so witnesses reproduce exactly
    if modulus:
        e = np.conj(phase(q * evaluate(T, X, q, e, s, False)[2]))
    val = evaluate(T, X, q, e, s, modulus)[0]
    return val, X, sweeps, converged
