"""The Aluthge transform stays inside the hull of W_q(T) and W_q(T*),
and W_q moves by at most (2/q)||K|| under a perturbation K.

Run:  python3 demos/03_aluthge_and_stability.py
"""
import numpy as np

from qrange.matcore import spectral_norm
from qrange.structure import aluthge, check_thm5, random_perturbation, perturbation_trial

rng = np.random.default_rng(3)
T = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
A = aluthge(T)
print("eigenvalues of T       ", np.round(np.sort_complex(np.linalg.eigvals(T)), 6))
print("eigenvalues of aluthge ", np.round(np.sort_complex(np.linalg.eigvals(A)), 6))
print(f"norms: {spectral_norm(T):.6f} -> {spectral_norm(A):.6f}")

for q in (0.3, 0.7):
    m = check_thm5(T, q).metrics
    print(f"q={q}: support excess {m['support_violation']:+.3e}, radius excess {m['radius_excess']:+.3e}")

# Perturbation: the ratio d_H / ||K|| stays well below 2/q in practice.
print("\n   q     eps      d_H/||K||   2/q")
for q in (0.25, 0.5, 1.0):
    for eps in (1e-3, 1e-2, 1e-1):
        K = random_perturbation(4, eps, seed=int(1e4 * eps))
        _, dh = perturbation_trial(T, K, q)
        print(f"{q:5.2f}  {eps:6.0e}   {dh / eps:8.4f}   {2 / q:4.0f}")
