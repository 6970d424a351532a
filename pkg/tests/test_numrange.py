import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cgauss, matrices
from qrange.errors import GridMismatch, InfeasibleQ
from qrange.matcore import spectral_norm
from qrange.numrange import (AdmissiblePair, ConvexRange, contains_zero, convex_hull, hausdorff, omega_objective,
                             omega_pair, omega_q, omega_q_2x2_closed, omega_q_2x2_reduced_form, omega_q_many,
                             range_cloud, sample_pair, sample_pairs, support_function, support_table,
                             tsing_ellipse, uniform_grid)
from qrange.radii import numerical_radius, transcendental_radius

DIAG21 = np.diag([2.0, 1.0]).astype(complex)
TRIANGULAR = np.array([[2, 1], [0, 1]], dtype=complex)


def brute_points(T, q, rng, k=100000):
    X, Y = sample_pairs(q, k, T.shape[0], rng)
    return np.einsum("bi,bi->b", Y.conj(), X @ T.T)


def ellipse_support(center, A, B, angle, theta):
    t = theta - angle
    return (np.exp(-1j * theta) * center).real + np.sqrt((A * np.cos(t)) ** 2 + (B * np.sin(t)) ** 2)


# -- admissible pairs ---------------------------------------------------------

@pytest.mark.parametrize("q", [0, 0.5, 1, 0.3 + 0.4j, -1j])
def test_sample_pair_invariants(q):
    p = sample_pair(q, seed=7, dim=3)
    assert np.linalg.norm(p.x) == pytest.approx(1, abs=1e-12)
    assert np.linalg.norm(p.y) == pytest.approx(1, abs=1e-12)
    assert abs(np.vdot(p.y, p.x) - q) < 1e-12


def test_sample_pair_edge_cases():
    p = sample_pair(1, seed=1, dim=4)
    assert np.allclose(p.y, p.x)
    with pytest.raises(InfeasibleQ):
        sample_pair(0.5, seed=0, dim=1)
    with pytest.raises(InfeasibleQ):
        sample_pair(1.5, seed=0, dim=3)
    assert sample_pair(1, seed=0, dim=1).x.shape == (1,)


@settings(max_examples=50)
@given(st.floats(0, 1), st.floats(0, 2 * np.pi), st.integers(2, 7), st.integers(0, 10 ** 6))
def test_sample_pair_property(r, phi, dim, seed):
    q = r * np.exp(1j * phi)
    p = sample_pair(q, seed, dim)
    assert abs(np.vdot(p.y, p.x) - q) < 1e-10
    assert abs(np.linalg.norm(p.y) - 1) < 1e-10


# -- omega_q -------------------------------------------------------------------

@pytest.mark.parametrize("q", [0, 0.25, 0.5, 0.75, 1])
def test_omega_diag21(q):
    assert omega_q(DIAG21, q).value == pytest.approx(1.5 * q + 0.5, abs=1e-9)


def test_omega_witness_reproduces_value(rng):
    T = cgauss(rng, 4)
    for q in (0.0, 0.4, 1.0):
        est = omega_q(T, q, restarts=16)
        assert omega_objective(T, est.witness_x, q) == pytest.approx(est.value, abs=1e-8)
        pair = omega_pair(T, est, q)
        assert abs(np.vdot(pair.y, pair.x) - q) < 1e-10
        assert abs(pair.value(T)) == pytest.approx(est.value, abs=1e-8)


def test_omega_never_beats_brute_sampling_by_less(rng):
    T = cgauss(rng, 3)
    for q in (0.2, 0.6):
        est = omega_q(T, q).value
        sampled = np.abs(brute_points(T, q, rng)).max()
        assert sampled <= est + 1e-9
        assert est <= spectral_norm(T) + 1e-9


def test_omega_anchors(rng):
    for _ in range(5):
        T = cgauss(rng, int(rng.integers(2, 5)))
        assert omega_q(T, 1).value == pytest.approx(numerical_radius(T).value, rel=1e-6)
        assert omega_q(T, 0).value == pytest.approx(transcendental_radius(T).value, rel=1e-6)


def test_omega_dimension_one_formal_value():
    assert omega_q(np.array([[3j]]), 0.5).value == pytest.approx(1.5)
    assert omega_q(np.array([[3j]]), 1).value == pytest.approx(3.0)


def test_omega_phase_of_q_is_irrelevant(rng):
    T = cgauss(rng, 3)
    assert omega_q(T, 0.5j).value == pytest.approx(omega_q(T, 0.5).value, rel=1e-9)


def test_omega_zero_and_identity():
    assert omega_q(np.zeros((3, 3)), 0.5).value == 0.0
    assert omega_q(np.eye(3), 0.5).value == pytest.approx(0.5, abs=1e-12)
    assert omega_q(np.eye(3), 0.0).value == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=15, deadline=None)
@given(matrices(2, 4), st.integers(0, 2 ** 31))
def test_omega_unitary_invariance(T, seed):
    rng = np.random.default_rng(seed)
    U, _ = np.linalg.qr(cgauss(rng, T.shape[0]))
    S = U.conj().T @ T @ U
    for q in (0.3, 0.8):
        assert omega_q(S, q, 32).value == pytest.approx(omega_q(T, q, 32).value, rel=1e-6, abs=1e-9)


@settings(max_examples=15, deadline=None)
@given(matrices(2, 5), st.floats(0.05, 1.0))
def test_norm_sandwich(T, q):
    w = omega_q(T, q, 16).value
    n = spectral_norm(T)
    assert q / (2 * (2 - q * q)) * n - 1e-6 <= w <= n + 1e-9


@settings(max_examples=15, deadline=None)
@given(matrices(2, 5), st.floats(0.0, 1.0), st.integers(0, 100))
def test_more_restarts_never_lower(T, q, seed):
    assert omega_q(T, q, 24, seed).value >= omega_q(T, q, 6, seed).value - 1e-12


def test_batched_matches_single(rng):
    T = cgauss(rng, 4)
    many = omega_q_many(T, [0.1, 0.5, 0.9], restarts=16)
    for q, est in zip([0.1, 0.5, 0.9], many):
        assert est.value == omega_q(T, q, restarts=16).value


# -- 2x2 closed forms -----------------------------------------------------------

def test_closed_form_examples():
    assert omega_q_2x2_closed(DIAG21, 0.5) == pytest.approx(1.25, abs=1e-12)
    assert omega_q_2x2_closed(DIAG21, 1.0) == pytest.approx(2.0, abs=1e-12)
    jordan = np.array([[0, 1], [0, 0]])
    for q in (0, 0.5, 1):
        assert omega_q_2x2_closed(jordan, q) == pytest.approx((1 + np.sqrt(1 - q * q)) / 2, abs=1e-12)


@pytest.mark.parametrize("q", [0.0, 0.3, 0.7, 1.0])
def test_closed_form_matches_optimizer_on_triangular(q):
    closed = omega_q_2x2_closed(TRIANGULAR, q)
    assert closed is not None
    assert omega_q(TRIANGULAR, q).value == pytest.approx(closed, abs=1e-5)


def test_printed_reduced_formula_agrees_only_at_q1():
    a, b = (np.sqrt(2) + 1) / 2, (np.sqrt(2) - 1) / 2
    assert omega_q_2x2_reduced_form(1.5, a, b, 1.0) == pytest.approx(omega_q_2x2_closed(TRIANGULAR, 1.0), abs=1e-12)
    assert abs(omega_q_2x2_reduced_form(1.5, a, b, 0.5) - omega_q_2x2_closed(TRIANGULAR, 0.5)) > 0.1


def test_closed_form_not_applicable_for_tilted_ellipse():
    T = np.array([[1, 2], [0, 1j]])
    assert omega_q_2x2_closed(T, 0.5) is None


@settings(max_examples=20, deadline=None)
@given(matrices(2, 2), st.floats(0.0, 1.0))
def test_ellipse_support_matches_optimizer(T, q):
    center, A, B, angle = tsing_ellipse(T, q)
    th = uniform_grid(24)
    h, _ = support_table(T, q, th, restarts=8)
    want = ellipse_support(center, A, B, angle, th)
    assert np.max(np.abs(h - want)) <= 1e-6 * max(1, spectral_norm(T))


def test_ellipse_contains_samples(rng):
    T = cgauss(rng, 2)
    q = 0.6
    center, A, B, angle = tsing_ellipse(T, q)
    p = (brute_points(T, q, rng, 20000) - center) * np.exp(-1j * angle)
    assert np.max((p.real / A) ** 2 + (p.imag / B) ** 2) <= 1 + 1e-9


# -- support function and ranges -----------------------------------------------

def test_support_examples():
    assert support_function(np.zeros((3, 3)), 0.5, 1.0) == 0.0
    assert support_function(DIAG21, 1, 0.0) == pytest.approx(2.0, abs=1e-12)
    for th in (0.0, 1.0, 2.5):
        assert support_function(np.eye(3), 1, th) == pytest.approx(np.cos(th), abs=1e-12)


def test_support_per_direction_q():
    th = np.array([0.0, np.pi])
    h, _ = support_table(DIAG21, [1.0, 0.5], th)
    assert h[0] == pytest.approx(2.0, abs=1e-9)
    assert h[1] == pytest.approx(support_function(DIAG21, 0.5, np.pi), abs=1e-9)


@settings(max_examples=10, deadline=None)
@given(matrices(2, 4), st.floats(0.0, 1.0), st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3))
def test_affine_range_identity(T, q, a, b):
    th = uniform_grid(16)
    lhs, _ = support_table(a * T + b * np.eye(T.shape[0]), q, th, restarts=8)
    base, _ = support_table(T, q, th - np.angle(a), restarts=8)
    rhs = abs(a) * base + (np.exp(-1j * th) * b * q).real
    assert np.max(np.abs(lhs - rhs)) <= 1e-6 * max(1, abs(a) * spectral_norm(T) + abs(b))


def test_range_of_identity_is_a_point():
    R = range_cloud(np.eye(3), 0.5, n_theta=32, n_samples=200)
    assert np.allclose(R.cloud, 0.5, atol=1e-12)
    assert np.allclose(R.hull, 0.5, atol=1e-9)
    ok, margin = contains_zero(R)
    assert not ok and margin == pytest.approx(-0.5, abs=1e-9)


def test_range_of_diag21_is_segment():
    R = range_cloud(DIAG21, 1, n_theta=64, n_samples=500)
    assert np.max(np.abs(R.hull.imag)) <= 1e-6
    assert R.hull.real.min() == pytest.approx(1, abs=1e-6)
    assert R.hull.real.max() == pytest.approx(2, abs=1e-6)


def test_truncated_zero_witness():
    T = np.diag([1, 1 / 2, 1 / 3]).astype(complex)
    x = np.array([0.5, 0, np.sqrt(3) / 2])
    y = np.array([-0.5, 0, np.sqrt(3) / 2])
    pair = AdmissiblePair(x, y, 0.5)
    assert abs(np.vdot(y, x) - 0.5) < 1e-15
    R = range_cloud(T, 0.5, n_theta=64, n_samples=200, extra_pairs=[(x, y)])
    assert np.min(np.abs(R.cloud)) <= 1e-9
    assert abs(pair.value(T)) <= 1e-15


def test_contains_zero_examples():
    R = range_cloud(np.diag([1.0, -1.0]), 1, n_theta=64, n_samples=200)
    ok, margin = contains_zero(R)
    assert ok and abs(margin) <= 1e-9
    T8 = np.diag(1 / np.arange(1, 9)).astype(complex)
    ok, margin = contains_zero(range_cloud(T8, 0.5, n_theta=90, n_samples=200))
    assert ok and margin > 0


@settings(max_examples=10, deadline=None)
@given(matrices(2, 4), st.floats(0.0, 1.0))
def test_cloud_inside_envelope_and_hull_convex(T, q):
    R = range_cloud(T, q, n_theta=32, n_samples=300, restarts=4)
    assert R.envelope_excess(R.cloud) <= 1e-8
    assert R.envelope_excess(R.hull) <= 1e-8
    H = R.hull
    if len(H) >= 3:
        e1 = np.roll(H, -1) - H
        e2 = np.roll(H, -2) - np.roll(H, -1)
        assert np.all((e1.conj() * e2).imag >= -1e-12)


def test_convex_hull_of_square_with_interior_point():
    pts = np.array([0, 1, 1 + 1j, 1j, 0.5 + 0.5j])
    H = convex_hull(pts)
    assert len(H) == 4 and 0.5 + 0.5j not in H


def test_hausdorff():
    grid = uniform_grid(64)
    R = ConvexRange.from_support(grid, np.full(64, 2.0))
    assert hausdorff(R, R) == 0.0
    assert hausdorff(R, ConvexRange.from_support(grid, np.full(64, 0.5))) == pytest.approx(1.5)
    with pytest.raises(GridMismatch):
        hausdorff(R, ConvexRange.from_support(uniform_grid(32), np.ones(32)))


def test_hausdorff_of_shift():
    eps = 0.01
    R1 = range_cloud(DIAG21, 1, n_theta=64, n_samples=100)
    R2 = range_cloud(DIAG21 + eps * np.eye(2), 1, n_theta=64, n_samples=100)
    assert hausdorff(R1, R2) == pytest.approx(eps, abs=1e-9)
