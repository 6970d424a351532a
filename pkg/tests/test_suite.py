import numpy as np
import pytest

from qrange.bounds import bound_sweep
from qrange.structure import is_complex_symmetric, is_normal, standard_conjugation
from qrange.suite import ENSEMBLES, draw, member, new_theorem_rates, replay, run_suite


def test_members_are_reproducible_and_independent():
    T1, P1, n1 = member("random", (2, 3), 9, 5)
    T2, P2, n2 = member("random", (2, 3), 9, 5)
    assert n1 == 3 and np.array_equal(T1, T2) and np.array_equal(P1, P2)
    assert not np.array_equal(member("random", (2, 3), 9, 4)[0][:2, :2], T1[:2, :2])


def test_ensembles_have_their_structure():
    rng = np.random.default_rng(0)
    assert is_normal(draw("normal", 4, rng))
    N = draw("nilpotent", 4, rng)
    assert np.linalg.norm(np.linalg.matrix_power(N, 4)) < 1e-10
    assert is_complex_symmetric(draw("csym", 4, rng), standard_conjugation(4))
    with pytest.raises(ValueError):
        draw("other", 2, rng)
    assert set(ENSEMBLES) == {"random", "normal", "nilpotent", "csym"}


@pytest.mark.parametrize("ensemble", ENSEMBLES)
def test_small_suite_certified(ensemble):
    rep = run_suite(ensemble, dims=(2, 3), count=4, q_grid=(0.3, 1.0), restarts=16)
    assert rep["all_certified_pass"], {k: v["violations"] for k, v in rep["certified"].items() if v["fail"]}
    assert "NORM" in rep["certified"] and "THM_Q1" in rep["reported"]
    rates = new_theorem_rates(rep)
    assert set(rates) >= {"THM_Q1", "THM_Q2", "THM_Q3_PROVED", "THM_Q4", "THM_Q6"}


def test_violation_replays():
    rep = run_suite("random", dims=(2, 3), count=6, q_grid=(1.0,), restarts=16)
    rec = rep["reported"]["THM_Q3_STATED"]["violations"][0]
    T, partner = replay(rec, (2, 3))
    row = [r for r in bound_sweep(T, [rec["q"]], restarts=16, partner=partner) if r.bound_id == "THM_Q3_STATED"][0]
    assert not row.holds and row.slack == pytest.approx(rec["slack"], abs=1e-9)
