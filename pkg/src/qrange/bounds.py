"""Upper (and a few lower) bounds on omega_q, each checked against an estimate.

Every evaluator returns :class:`BoundReport` rows. The omega_q value used for
comparison is a lower estimate (it is attained by an explicit vector), so a
row with ``holds=True`` is a sound certificate. A row that fails is recomputed
with 512 restarts before it is reported.

Squared bounds carry ``power=2``: their slack is ``rhs - omega**2``.
Lower bounds carry ``kind="lower"`` and slack ``omega - rhs``.
"""
import hashlib
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import DimMismatch
from .matcore import adjoint, as_cmat, sigma_min, spectral_norm
from .numrange import DEFAULT_RESTARTS, omega_q_many
from .radii import anticommutator, crawford, numerical_radius, transcendental_radius

HOLD_TOL = 1e-6
RECHECK_RESTARTS = 512

CATALOG = ("NORM", "LOWER_NORM", "QUAD_Q", "QUAD_Q_CRAWFORD", "TRANS_Q", "THM_Q1", "THM_Q2",
           "THM_Q3_STATED", "THM_Q3_PROVED", "THM_Q4", "THM_Q5", "THM_Q6", "THM_Q6_NORMAL", "QN1", "QN2")
ESTABLISHED = ("NORM", "LOWER_NORM", "QUAD_Q", "TRANS_Q", "THM_Q5", "QN1", "QN2")
NEW_THEOREMS = ("THM_Q1", "THM_Q2", "THM_Q3_PROVED", "THM_Q4", "THM_Q6")


@dataclass(frozen=True)
class BoundReport:
    bound_id: str
    q: float
    rhs: float
    omega_est: float
    slack: float
    holds: bool
    witness: Optional[np.ndarray] = None
    inputs_digest: str = ""
    power: int = 1
    kind: str = "upper"
    components: dict = field(default_factory=dict)
    rechecked: bool = False


def digest(*mats, q=None):
    h = hashlib.sha256()
    for M in mats:
        M = np.ascontiguousarray(M, dtype="<c16")
        h.update(str(M.shape).encode())
        h.update(M.tobytes())
    if q is not None:
        h.update(repr(float(q)).encode())
    return h.hexdigest()


def _report(bound_id, q, rhs, omega, power=1, kind="upper", witness=None, dig="", components=None):
    lhs = omega ** power
    if kind == "lower":
        slack = lhs - rhs
    elif kind == "two-sided":
        slack = min(rhs - lhs, lhs - components["lower"])
    else:
        slack = rhs - lhs
    return BoundReport(bound_id=bound_id, q=float(q), rhs=float(rhs), omega_est=float(omega),
                       slack=float(slack), holds=bool(slack >= -HOLD_TOL), witness=witness,
                       inputs_digest=dig, power=power, kind=kind, components=dict(components or {}))


def _real_q(q):
    q = float(np.real(q))
    if not -1e-12 <= q <= 1 + 1e-12:
        raise ValueError(f"bounds need q in [0, 1], got {q}")
    return min(max(q, 0.0), 1.0)


class BoundContext:
    """Lazily computed quantities of one matrix, shared by all evaluators."""

    def __init__(self, T, restarts=DEFAULT_RESTARTS, seed=0):
        self.T = as_cmat(T)
        self.restarts = restarts
        self.seed = seed
        self._omega = {}

    @cached_property
    def norm(self):
        return spectral_norm(self.T)

    @cached_property
    def norm_square(self):
        return spectral_norm(self.T @ self.T)

    @cached_property
    def anti_norm(self):
        T = self.T
        return spectral_norm(adjoint(T) @ T + T @ adjoint(T))

    @cached_property
    def w(self):
        return numerical_radius(self.T).value

    @cached_property
    def c(self):
        return crawford(self.T).value

    @cached_property
    def m(self):
        return transcendental_radius(self.T).value

    @cached_property
    def smin(self):
        return sigma_min(self.T)

    @cached_property
    def normal(self):
        from .structure import is_normal
        return is_normal(self.T)

    def omega_of(self, key, M, qs):
        """omega_q estimates of ``M`` (cached under ``key``) for each q."""
        missing = [q for q in qs if (key, q) not in self._omega]
        if missing:
            for q, est in zip(missing, omega_q_many(M, missing, self.restarts, self.seed)):
                self._omega[(key, q)] = est
        return [self._omega[(key, q)] for q in qs]

    def omega(self, q):
        return self.omega_of("T", self.T, [q])[0]

    def prefetch(self, qs):
        self.omega_of("T", self.T, list(qs))


def _ctx(T, ctx, restarts, seed):
    return ctx if ctx is not None else BoundContext(T, restarts, seed)


def eval_norm_bounds(T, q, ctx=None, restarts=DEFAULT_RESTARTS, seed=0):
    """omega_q <= ||T|| and q/(2(2 - q^2)) ||T|| <= omega_q."""
    ctx = _ctx(T, ctx, restarts, seed)
    q = _real_q(q)
    est = ctx.omega(q)
    dig = digest(ctx.T, q=q)
    return [
        _report("NORM", q, ctx.norm, est.value, witness=est.witness_x, dig=dig),
        _report("LOWER_NORM", q, q / (2 * (2 - q * q)) * ctx.norm, est.value, kind="lower",
                witness=est.witness_x, dig=dig),
    ]


def eval_intro_bounds(T, q, ctx=None, restarts=DEFAULT_RESTARTS, seed=0):
    """The quadratic bound, its Crawford refinement and the transcendental-radius bound."""
    ctx = _ctx(T, ctx, restarts, seed)
    q = _real_q(q)
    s = np.sqrt(1 - q * q)
    est = ctx.omega(q)
    dig = digest(ctx.T, q=q)
    quad = q * q * ctx.w ** 2 + (1 - q * q + q * s) * ctx.norm ** 2
    comp = {"w": ctx.w, "norm": ctx.norm}
    return [
        _report("QUAD_Q", q, quad, est.value, power=2, witness=est.witness_x, dig=dig, components=comp),
        _report("QUAD_Q_CRAWFORD", q, quad - (1 - q * q) * ctx.c ** 2, est.value, power=2,
                witness=est.witness_x, dig=dig, components={**comp, "crawford": ctx.c}),
        _report("TRANS_Q", q, q * ctx.w + s * ctx.m, est.value, witness=est.witness_x, dig=dig,
                components={"w": ctx.w, "m": ctx.m}),
    ]


def thm_q1_rhs(norm, anti_norm, smin, q):
    s = np.sqrt(1 - q * q)
    return q * q / 2 * anti_norm + (1 - q * q + q * s) * norm ** 2 - (1 - q * q) * smin ** 2


def eval_thm_q1(T, q, ctx=None, restarts=DEFAULT_RESTARTS, seed=0):
    ctx = _ctx(T, ctx, restarts, seed)
    q = _real_q(q)
    est = ctx.omega(q)
    rhs = thm_q1_rhs(ctx.norm, ctx.anti_norm, ctx.smin, q)
    return _report("THM_Q1", q, rhs, est.value, power=2, witness=est.witness_x, dig=digest(ctx.T, q=q),
                   components={"anti_norm": ctx.anti_norm, "norm": ctx.norm, "sigma_min": ctx.smin})


def eval_thm_q2(T, q, ctx=None, restarts=DEFAULT_RESTARTS, seed=0):
    ctx = _ctx(T, ctx, restarts, seed)
    q = _real_q(q)
    est = ctx.omega(q)
    rhs = q / 2 * (ctx.norm + np.sqrt(ctx.norm_square)) + np.sqrt(1 - q * q) * ctx.m
    return _report("THM_Q2", q, rhs, est.value, witness=est.witness_x, dig=digest(ctx.T, q=q),
                   components={"norm": ctx.norm, "norm_square": ctx.norm_square, "m": ctx.m})


def eval_thm_q3(A, B, q, ctx=None, restarts=DEFAULT_RESTARTS, seed=0):
    """(stated, proved) variants for omega_q(AB + BA).

    The statement has q w(AB) + s (||A|| ||B|| + ||B|| ||A||); the proof ends
    with 2 q w(AB) + 2 s ||A|| ||B||. Only the second is certifiable.
    """
    A, B = as_cmat(A, "A"), as_cmat(B, "B")
    if A.shape != B.shape:
        raise DimMismatch(f"shapes {A.shape} and {B.shape} differ")
    ctx = ctx if ctx is not None else BoundContext(A, restarts, seed)
    q = _real_q(q)
    s = np.sqrt(1 - q * q)
    S = anticommutator(A, B)
    key = ("anti", digest(A, B))
    est = ctx.omega_of(key, S, [q])[0]
    wab = numerical_radius(A @ B).value
    nab = spectral_norm(A) * spectral_norm(B)
    dig = digest(A, B, q=q)
    comp = {"w_AB": wab, "normA_normB": nab}
    return (
        _report("THM_Q3_STATED", q, q * wab + 2 * s * nab, est.value, witness=est.witness_x, dig=dig,
                components=comp),
        _report("THM_Q3_PROVED", q, 2 * q * wab + 2 * s * nab, est.value, witness=est.witness_x, dig=dig,
                components=comp),
    )


def block_matrix(A, B, C, D):
    A, B, C, D = (np.atleast_2d(np.asarray(M, dtype=complex)) for M in (A, B, C, D))
    if A.shape[0] != B.shape[0] or C.shape[0] != D.shape[0] or A.shape[1] != C.shape[1] \
            or B.shape[1] != D.shape[1] or A.shape[0] != A.shape[1] or D.shape[0] != D.shape[1]:
        raise DimMismatch("blocks are not conformable with square diagonal blocks")
    return np.block([[A, B], [C, D]])


def eval_thm_q4(A, B, C, D, q, ctx=None, restarts=DEFAULT_RESTARTS, seed=0):
    """omega_q([[A, B], [C, D]]) <= max(omega_q(A), omega_q(D)) + k(q) (||B|| + ||C||).

    A 1x1 diagonal block [t] is given its formal range {t q}.
    """
    T = block_matrix(A, B, C, D)
    ctx = ctx if ctx is not None else BoundContext(T, restarts, seed)
    q = _real_q(q)
    A, D = np.atleast_2d(A), np.atleast_2d(D)
    est = ctx.omega_of(("block", digest(T)), T, [q])[0] if ctx.T.shape != T.shape or \
        not np.array_equal(ctx.T, T) else ctx.omega(q)
    oa = ctx.omega_of(("A", digest(A)), A, [q])[0].value
    od = ctx.omega_of(("D", digest(D)), D, [q])[0].value
    k = np.sqrt(max(0.0, 1 - 0.75 * q * q + q * np.sqrt(1 - q * q)))
    nb, nc = spectral_norm(B), spectral_norm(C)
    rhs = max(oa, od) + k * (nb + nc)
    return _report("THM_Q4", q, rhs, est.value, witness=est.witness_x, dig=digest(T, q=q),
                   components={"omega_A": oa, "omega_D": od, "coefficient": k, "norm_B": nb, "norm_C": nc})


def thm_q5_parts(w, m, norm, q):
    s = np.sqrt(1 - q * q)
    return q * w + s * m, np.sqrt(q * q * w * w + (1 - q * q + q * s) * norm ** 2)


def eval_thm_q5(T, q, ctx=None, restarts=DEFAULT_RESTARTS, seed=0):
    ctx = _ctx(T, ctx, restarts, seed)
    q = _real_q(q)
    est = ctx.omega(q)
    b1, b2 = thm_q5_parts(ctx.w, ctx.m, ctx.norm, q)
    return _report("THM_Q5", q, min(b1, b2), est.value, witness=est.witness_x, dig=digest(ctx.T, q=q),
                   components={"B1": b1, "B2": b2})


def thm_q6_rhs(w, norm, c, smin, q):
    s = np.sqrt(1 - q * q)
    return (q * q * w * w + (1 - q * q) * norm ** 2 - q * q * (1 - q * q) / 2 * (norm ** 2 - smin ** 2)
            + q * s * (w * norm - c * smin))


def thm_q6_normal_rhs(norm, smin, q):
    return norm ** 2 - q * q * (1 - q * q) / 2 * (norm ** 2 - smin ** 2)


def eval_thm_q6(T, q, ctx=None, restarts=DEFAULT_RESTARTS, seed=0):
    """(general, normal) reports; the normal one is None unless T is normal."""
    ctx = _ctx(T, ctx, restarts, seed)
    q = _real_q(q)
    est = ctx.omega(q)
    dig = digest(ctx.T, q=q)
    gen = _report("THM_Q6", q, thm_q6_rhs(ctx.w, ctx.norm, ctx.c, ctx.smin, q), est.value, power=2,
                  witness=est.witness_x, dig=dig,
                  components={"w": ctx.w, "norm": ctx.norm, "crawford": ctx.c, "sigma_min": ctx.smin})
    if not ctx.normal:
        return gen, None
    nor = _report("THM_Q6_NORMAL", q, thm_q6_normal_rhs(ctx.norm, ctx.smin, q), est.value, power=2,
                  witness=est.witness_x, dig=dig, components={"norm": ctx.norm, "sigma_min": ctx.smin})
    return gen, nor


def eval_kittaneh(T, ctx=None, restarts=DEFAULT_RESTARTS, seed=0):
    """QN1: w^2 <= (||T||^2 + ||T^2||)/2.  QN2: ||T*T+TT*||/4 <= w^2 <= ||T*T+TT*||/2."""
    ctx = _ctx(T, ctx, restarts, seed)
    res = numerical_radius(ctx.T)
    dig = digest(ctx.T, q=1.0)
    qn1 = _report("QN1", 1.0, (ctx.norm ** 2 + ctx.norm_square) / 2, res.value, power=2,
                  witness=res.witness, dig=dig)
    qn2 = _report("QN2", 1.0, ctx.anti_norm / 2, res.value, power=2, kind="two-sided", witness=res.witness,
                  dig=dig, components={"lower": ctx.anti_norm / 4, "upper": ctx.anti_norm / 2})
    return qn1, qn2


def split_blocks(T, k=None):
    T = as_cmat(T)
    n = T.shape[0]
    k = n // 2 if k is None else k
    return T[:k, :k], T[:k, k:], T[k:, :k], T[k:, k:]


def _rows_for_q(ctx, q, partner, blocks):
    rows = eval_norm_bounds(None, q, ctx)
    rows += eval_intro_bounds(None, q, ctx)
    rows.append(eval_thm_q1(None, q, ctx))
    rows.append(eval_thm_q2(None, q, ctx))
    if partner is not None:
        rows += list(eval_thm_q3(ctx.T, partner, q, ctx))
    if blocks and ctx.T.shape[0] >= 2:
        rows.append(eval_thm_q4(*split_blocks(ctx.T), q, ctx))
    rows.append(eval_thm_q5(None, q, ctx))
    rows += [r for r in eval_thm_q6(None, q, ctx) if r is not None]
    if q == 1.0:
        rows += list(eval_kittaneh(None, ctx))
    return rows


def bound_sweep(T, q_grid, restarts=DEFAULT_RESTARTS, seed=0, partner=None, blocks=True, recheck=True,
                ctx=None):
    """Every applicable bound at every q, sorted by (q, catalog order).

    ``partner`` supplies B for the anticommutator bounds (A = T). Block bounds
    split T at dim // 2. A failing row is re-evaluated with 512 restarts when
    more restarts could change its verdict: lower bounds, and the block bound
    whose right-hand side contains omega_q estimates. An upper-bound failure
    is already certified by the witness vector behind the estimate.
    """
    ctx = ctx if ctx is not None else BoundContext(T, restarts, seed)
    qs = [_real_q(q) for q in q_grid]
    ctx.prefetch(qs)
    if partner is not None:
        partner = as_cmat(partner, "partner")
        ctx.omega_of(("anti", digest(ctx.T, partner)), anticommutator(ctx.T, partner), qs)
    if blocks and ctx.T.shape[0] >= 2:
        A, _, _, D = split_blocks(ctx.T)
        ctx.omega_of(("A", digest(A)), A, qs)
        ctx.omega_of(("D", digest(D)), D, qs)
    rows = []
    for q in qs:
        rows += _rows_for_q(ctx, q, partner, blocks)
    redo = [i for i, r in enumerate(rows) if not r.holds and (r.kind != "upper" or r.bound_id == "THM_Q4")]
    if recheck and redo:
        big = BoundContext(ctx.T, max(RECHECK_RESTARTS, restarts), seed)
        for name in ("norm", "norm_square", "anti_norm", "w", "c", "m", "smin", "normal"):
            big.__dict__[name] = getattr(ctx, name)
        for i in redo:
            r = rows[i]
            again = [x for x in _rows_for_q(big, r.q, partner, blocks) if x.bound_id == r.bound_id][0]
            rows[i] = _merge_recheck(r, again)
    order = {b: i for i, b in enumerate(CATALOG)}
    return sorted(rows, key=lambda r: (r.q, order[r.bound_id]))


def _merge_recheck(old, new):
    # both estimates are attained values, so the larger one is the better estimate
    best = new if new.omega_est >= old.omega_est else old
    rhs = new.rhs if old.bound_id in ("THM_Q4", "THM_Q3_STATED", "THM_Q3_PROVED") else old.rhs
    comps = new.components if old.bound_id == "THM_Q4" else old.components
    r = _report(old.bound_id, old.q, rhs, best.omega_est, power=old.power, kind=old.kind,
                witness=best.witness, dig=old.inputs_digest, components=comps)
    return replace(r, rechecked=True)
