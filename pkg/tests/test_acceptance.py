"""Acceptance criteria, each at its stated tolerance.

Every test prints one line: ``ACCEPT <n> PASS|FAIL <summary>``. Criteria 3
and 9 share one 1000-matrix run.
"""
import json
import time

import numpy as np
import pytest

from qrange.bounds import ESTABLISHED, bound_sweep, eval_thm_q1, eval_thm_q3
from qrange.cli import main
from qrange.findings import findings_report
from qrange.matcore import adjoint, sigma_min, spectral_norm
from qrange.numrange import omega_q, omega_q_many
from qrange.radii import numerical_radius, transcendental_radius
from qrange.structure import (check_thm2, check_thm5, is_complex_symmetric, perturbation_trial,
                              random_perturbation, run_convergence, standard_conjugation, swap_conjugation,
                              symmetry_defect)
from qrange.suite import DEFAULT_Q_GRID, new_theorem_rates, replay, run_suite

DIAG21 = np.diag([2.0, 1.0]).astype(complex)
TRIANGULAR = np.array([[2, 1], [0, 1]], dtype=complex)
SYM = np.array([[1, 1j], [1j, -1]])
SUITE_DIMS = (2, 3, 4, 5, 6)


@pytest.fixture
def verdict(capsys):
    def say(n, ok, text):
        with capsys.disabled():
            print(f"\nACCEPT {n} {'PASS' if ok else 'FAIL'} {text}")
    return say


@pytest.fixture(scope="module")
def big_suite():
    t0 = time.perf_counter()
    rep = run_suite("random", SUITE_DIMS, 1000, DEFAULT_Q_GRID, seed=2024, restarts=64)
    return rep, time.perf_counter() - t0


def test_criterion_1_diag_fixture(verdict):
    t0 = time.perf_counter()
    ok = spectral_norm(DIAG21) == pytest.approx(2, abs=1e-12)
    ok &= spectral_norm(adjoint(DIAG21) @ DIAG21 + DIAG21 @ adjoint(DIAG21)) == pytest.approx(8, abs=1e-12)
    ok &= sigma_min(DIAG21) ** 2 == pytest.approx(1, abs=1e-12)
    qs = [0, 0.25, 0.5, 0.75, 1]
    gap = max(abs(e.value - (1.5 * q + 0.5)) for q, e in zip(qs, omega_q_many(DIAG21, qs)))
    R = {q: eval_thm_q1(DIAG21, q) for q in (0.0, 0.5, 1.0)}
    rgap = max(abs(R[0.0].rhs - 3), abs(R[0.5].rhs - 4.982), abs(R[1.0].rhs - 4))
    eq = abs(R[1.0].rhs - R[1.0].omega_est ** 2)
    elapsed = time.perf_counter() - t0
    ok = bool(ok and gap <= 1e-5 and rgap <= 1e-3 and eq <= 1e-6 and elapsed < 5)
    verdict(1, ok, f"omega gap {gap:.1e}, R gap {rgap:.1e}, q=1 slack {eq:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_anchor_identities(verdict):
    t0 = time.perf_counter()
    worst_w = worst_m = 0.0
    for i in range(200):
        rng = np.random.default_rng([7, i])
        n = 2 + i % 5
        T = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        o1, o0 = omega_q_many(T, [1.0, 0.0])
        w, m = numerical_radius(T).value, transcendental_radius(T).value
        worst_w = max(worst_w, abs(o1.value - w) / w)
        worst_m = max(worst_m, abs(o0.value - m) / m)
    elapsed = time.perf_counter() - t0
    ok = worst_w <= 1e-5 and worst_m <= 1e-5 and elapsed < 120
    verdict(2, ok, f"max rel gap w {worst_w:.1e}, m {worst_m:.1e} over 200 matrices, {elapsed:.1f}s")
    assert ok


def test_criterion_3_certified_suite(big_suite, verdict):
    rep, elapsed = big_suite
    cert = rep["certified"]
    fails = {k: v["fail"] for k, v in cert.items() if v["fail"]}
    covered = all(b in cert for b in ESTABLISHED)
    totals = {b: cert[b]["pass"] + cert[b]["fail"] for b in ESTABLISHED}
    # archived records regenerate their matrices and reproduce the same verdict
    replay_ok = True
    for name, block in rep["reported"].items():
        for rec in block["violations"][:1]:
            T, partner = replay(rec, SUITE_DIMS)
            row = [r for r in bound_sweep(T, [rec["q"]], restarts=64, seed=rec["seed"], partner=partner)
                   if r.bound_id == name][0]
            replay_ok &= (not row.holds) and abs(row.slack - rec["slack"]) <= 1e-9
    ok = covered and not fails and replay_ok and elapsed < 900
    verdict(3, ok, f"failures {fails or 'none'}, rows {totals}, replay {'ok' if replay_ok else 'broken'}, "
                   f"{elapsed:.0f}s")
    assert ok


@pytest.mark.xfail(strict=True, reason="C T* C = [[-1,i],[i,1]] under the swap conjugation, not T")
def test_criterion_4_swap_conjugation(verdict):
    c = swap_conjugation(2)
    ok = is_complex_symmetric(SYM, c)
    verdict(4, ok, f"[[1,i],[i,-1]] under the swap conjugation: ||T - C T* C|| = {symmetry_defect(SYM, c):g} "
                   "(unattainable: C T* C = [[-1,i],[i,1]])")
    assert ok


def test_criterion_4_inclusion_and_circularity(verdict):
    c = standard_conjugation(2)
    assert is_complex_symmetric(SYM, c)
    incl = check_thm2(SYM, c, 0.5, n_theta=90).metrics["inclusion_violation"]
    circ = check_thm2(SYM, c, 0.0, n_theta=90).metrics["circularity_defect"]
    ok = incl <= 1e-5 and circ <= 1e-5
    verdict(4, ok, f"inclusion violation {incl:.1e} at q=1/2 (90 angles), W_0 circularity defect {circ:.1e}")
    assert ok


def test_criterion_5_truncations(verdict):
    t0 = time.perf_counter()
    dims = [2, 4, 8, 16, 24]
    r = run_convergence(1 / np.arange(1, 25), 0.5, dims, final_tol=2e-2)
    wit = max(abs(r.metrics[f"witness[{n}]"] - (-0.25 + 0.75 / n)) for n in dims)
    d = [r.metrics[f"d_H[{n}]"] for n in dims[:-1]]
    mono = all(b <= a + 1e-6 for a, b in zip(d, d[1:]))
    final = r.metrics["final_d_H"]
    elapsed = time.perf_counter() - t0
    ok = wit <= 1e-12 and mono and final <= 2e-2 and elapsed < 180
    verdict(5, ok, f"witness error {wit:.1e}, d_H {[round(x, 6) for x in d]}, final {final:.6f}, {elapsed:.1f}s")
    assert ok


def test_criterion_6_aluthge_inclusion(verdict):
    rng = np.random.default_rng(55)
    mats = [TRIANGULAR] + [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(50)]
    sup = rad = spec = -np.inf
    for T in mats:
        for q in (0.3, 0.7):
            m = check_thm5(T, q, n_theta=180).metrics
            sup, rad = max(sup, m["support_violation"]), max(rad, m["radius_excess"])
        spec = max(spec, m["spectrum_shift"])
    ok = sup <= 1e-4 and rad <= 1e-6 and spec <= 1e-7
    verdict(6, ok, f"max support violation {sup:.1e}, max radius excess {rad:.1e}, "
                   f"max eigenvalue shift {spec:.1e} over {len(mats)} matrices")
    assert ok


def test_criterion_7_perturbation(verdict):
    rng = np.random.default_rng(77)
    mats = [DIAG21] + [rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)) for _ in range(20)]
    trials = bad = 0
    worst_fwd = worst_ratio = -np.inf
    for i, T in enumerate(mats):
        for q in (0.25, 0.5, 1.0):
            for eps in (1e-3, 1e-2, 1e-1):
                K = random_perturbation(T.shape[0], eps, 1000 * i + int(-np.log10(eps)))
                nk = spectral_norm(K)
                fwd, dh = perturbation_trial(T, K, q)
                trials += 1
                bad += not (fwd <= nk + 1e-6 and dh <= 2 / q * nk + 1e-6)
                worst_fwd = max(worst_fwd, fwd - nk)
                worst_ratio = max(worst_ratio, dh / nk * q / 2)
    ok = bad == 0
    verdict(7, ok, f"{trials - bad}/{trials} trials pass; max deficit - ||K|| {worst_fwd:.1e}, "
                   f"max d_H / ((2/q)||K||) {worst_ratio:.3f}")
    assert ok


def test_criterion_8_discrepancy_log(verdict):
    rep = findings_report()
    found = {f["finding_id"]: f for f in rep["findings"]}
    w = numerical_radius(TRIANGULAR).value
    stated, proved = eval_thm_q3(np.eye(2), np.eye(2), 1.0)
    ok = abs(w - (1.5 + np.sqrt(2) / 2)) <= 1e-6
    ok &= stated.rhs == pytest.approx(1) and stated.omega_est == pytest.approx(2) and not stated.holds
    ok &= proved.rhs == pytest.approx(2) and abs(proved.slack) <= 1e-9
    ok &= {"W_TRIANGULAR", "THM_Q3_STATED"} <= set(rep["discrepancies"])
    ok &= found["W_TRIANGULAR"]["computed"] == pytest.approx(w)
    verdict(8, bool(ok), f"w = {w:.9f} (printed 2.414), q3 stated rhs {stated.rhs:g} < omega {stated.omega_est:g}, "
                         f"proved rhs {proved.rhs:g}; {len(rep['discrepancies'])} discrepancies logged")
    assert ok


def test_criterion_9_new_theorem_report(big_suite, verdict):
    rep, _ = big_suite
    rates = new_theorem_rates(rep)
    wanted = ("THM_Q1", "THM_Q2", "THM_Q3_PROVED", "THM_Q4", "THM_Q6")
    witnessed = all(v["witness"] is not None for name in wanted for v in rep["reported"][name]["violations"])
    ok = all(k in rates for k in wanted) and witnessed
    text = ", ".join(f"{k} {rates[k]['rate']:.4f} ({rates[k]['fail']}/{rates[k]['total']} fail)" for k in wanted)
    verdict(9, ok, text)
    assert ok


def test_criterion_10_determinism(tmp_path, verdict):
    outs = []
    for k in range(2):
        p = tmp_path / f"v{k}.json"
        code = main(["verify", "--count", "20", "--seed", "11", "--out", str(p)])
        outs.append((code, p.read_bytes()))
    ok = outs[0] == outs[1] and outs[0][0] == 0 and json.loads(outs[0][1])["config"]["seed"] == 11
    verdict(10, ok, f"two runs of verify, {len(outs[0][1])} bytes each, identical: {outs[0][1] == outs[1][1]}")
    assert ok
