"""Random ensembles and the property-suite runner behind ``qrange verify``.

Member ``i`` of an ensemble is drawn from ``default_rng([seed, i])``, so any
single matrix can be regenerated from (ensemble, dims, seed, index) without
replaying the others.
"""
import numpy as np

from .bounds import ESTABLISHED, NEW_THEOREMS, BoundContext, bound_sweep
from .matcore import spectral_norm
from .numrange import support_table, uniform_grid
from .structure import aluthge, is_normal, power_trace_gap, spectrum_distance

ENSEMBLES = ("random", "normal", "nilpotent", "csym")
DEFAULT_Q_GRID = tuple(round(0.1 * k, 1) for k in range(1, 11))
REPORTED = ("QUAD_Q_CRAWFORD", "THM_Q1", "THM_Q2", "THM_Q3_STATED", "THM_Q3_PROVED", "THM_Q4", "THM_Q6",
            "THM_Q6_NORMAL")


def _gauss(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def _unitary(rng, n):
    Q, R = np.linalg.qr(_gauss(rng, n))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def draw(ensemble, n, rng):
    if ensemble == "random":
        return _gauss(rng, n)
    if ensemble == "normal":
        U = _unitary(rng, n)
        lam = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return (U * lam) @ U.conj().T
    if ensemble == "nilpotent":
        U = _unitary(rng, n)
        N = np.triu(_gauss(rng, n), 1)
        return U @ N @ U.conj().T
    if ensemble == "csym":
        G = _gauss(rng, n)
        return (G + G.T) / 2
    raise ValueError(f"unknown ensemble {ensemble!r}; choose from {ENSEMBLES}")


def member(ensemble, dims, seed, index):
    """(T, partner, dim) for member ``index``; the partner feeds the anticommutator bounds."""
    rng = np.random.default_rng([seed, index])
    n = int(dims[index % len(dims)])
    T = draw(ensemble, n, rng)
    return T, _gauss(rng, n), n


def _vec(x):
    return None if x is None else [[float(z.real), float(z.imag)] for z in np.asarray(x).ravel()]


def _matrix(T):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(T)]


class Tally:
    def __init__(self):
        self.counts = {}
        self.violations = {}

    def add(self, name, ok, record=None):
        c = self.counts.setdefault(name, {"pass": 0, "fail": 0})
        c["pass" if ok else "fail"] += 1
        if not ok and record is not None:
            self.violations.setdefault(name, []).append(record)


def check_member(T, partner, q_grid, restarts, seed, certified, reported, diagnostics, base):
    """Run every invariant on one matrix, filing results into the three tallies."""
    ctx = BoundContext(T, restarts, seed)
    rows = bound_sweep(T, q_grid, restarts=restarts, seed=seed, partner=partner, ctx=ctx)
    for r in rows:
        rec = dict(base, q=r.q, rhs=r.rhs, omega_est=r.omega_est, slack=r.slack, witness=_vec(r.witness))
        if r.bound_id in ESTABLISHED:
            certified.add(r.bound_id, r.holds, rec)
        if r.bound_id in REPORTED:
            reported.add(r.bound_id, r.holds, rec)
    A = aluthge(T)
    scale = max(1.0, spectral_norm(T))
    gap = power_trace_gap(A, T)
    certified.add("ALUTHGE_SPECTRUM", gap <= 1e-7, dict(base, trace_gap=gap))
    # eigenvalue matching is ill-conditioned for defective T, so it is only a diagnostic
    shift = spectrum_distance(A, T)
    diagnostics.add("ALUTHGE_EIGENVALUES", shift <= 1e-7 * scale, dict(base, shift=shift))
    excess = spectral_norm(A) - spectral_norm(T)
    certified.add("ALUTHGE_NORM", excess <= 1e-9 * scale, dict(base, excess=excess))
    if is_normal(T):
        _spectral_inclusion(T, q_grid, seed, certified, base)
    o1, o0 = ctx.omega_of("T", T, [1.0, 0.0])
    w, m = ctx.w, ctx.m
    for name, est, ref in (("ANCHOR_W", o1.value, w), ("ANCHOR_M", o0.value, m)):
        gap = abs(est - ref) / max(ref, 1e-12)
        diagnostics.add(name, gap <= 1e-5, dict(base, estimate=est, reference=ref, rel_gap=gap))


def _spectral_inclusion(T, q_grid, seed, tally, base, n_theta=90):
    lam = np.linalg.eigvals(T)
    g = uniform_grid(n_theta)
    for q in q_grid:
        h, _ = support_table(T, q, g, restarts=4, seed=seed)
        proj = (np.exp(-1j * g)[:, None] * (q * lam)[None, :]).real
        excess = float(np.max(proj - h[:, None]))
        tally.add("SPECTRAL_INCLUSION", excess <= 1e-6, dict(base, q=float(q), excess=excess))


def run_suite(ensemble="random", dims=(2, 3, 4, 5, 6), count=100, q_grid=DEFAULT_Q_GRID, seed=0,
              restarts=64, progress=None, workers=1):
    """Pass/fail counts per invariant and archived violations.

    ``certified`` invariants decide the exit status; ``reported`` bounds are
    the newer inequalities whose hold-rates are findings; ``diagnostics``
    compare the optimizer against the exact radii.
    """
    q_grid = tuple(float(q) for q in q_grid)
    certified, reported, diagnostics = Tally(), Tally(), Tally()
    jobs = range(count)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_one, [(ensemble, tuple(dims), seed, i, q_grid, restarts) for i in jobs]))
    else:
        parts = []
        for i in jobs:
            parts.append(_one((ensemble, tuple(dims), seed, i, q_grid, restarts)))
            if progress:
                progress(i + 1, count)
    for c, r, d in parts:
        for mine, theirs in ((certified, c), (reported, r), (diagnostics, d)):
            for name, cnt in theirs.counts.items():
                tot = mine.counts.setdefault(name, {"pass": 0, "fail": 0})
                tot["pass"] += cnt["pass"]
                tot["fail"] += cnt["fail"]
            for name, v in theirs.violations.items():
                mine.violations.setdefault(name, []).extend(v)

    def block(t):
        return {name: {**t.counts[name], "rate": t.counts[name]["pass"] / max(1, sum(t.counts[name].values())),
                       "violations": t.violations.get(name, [])}
                for name in sorted(t.counts)}

    cert = block(certified)
    return {
        "config": {"ensemble": ensemble, "dims": list(dims), "count": count, "q_grid": list(q_grid),
                   "seed": seed, "restarts": restarts},
        "certified": cert,
        "reported": block(reported),
        "diagnostics": block(diagnostics),
        "all_certified_pass": all(v["fail"] == 0 for v in cert.values()),
    }


def _one(args):
    ensemble, dims, seed, i, q_grid, restarts = args
    T, partner, n = member(ensemble, dims, seed, i)
    base = {"ensemble": ensemble, "seed": seed, "index": i, "dim": n}
    tallies = Tally(), Tally(), Tally()
    check_member(T, partner, q_grid, restarts, seed, *tallies, base)
    return tallies


def replay(record, dims):
    """Regenerate the matrix behind an archived violation record."""
    T, partner, _ = member(record["ensemble"], dims, record["seed"], record["index"])
    return T, partner


def new_theorem_rates(report):
    """Hold-rate and violation count per newer bound, from a suite report."""
    out = {}
    for name in NEW_THEOREMS + ("THM_Q3_STATED", "THM_Q6_NORMAL", "QUAD_Q_CRAWFORD"):
        if name in report["reported"]:
            r = report["reported"][name]
            out[name] = {"rate": r["rate"], "fail": r["fail"], "total": r["pass"] + r["fail"]}
    return out
