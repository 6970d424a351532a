"""Diagonal truncations diag(1, 1/2, ..., 1/n) and their q-ranges.

The candidate pair x = (1/2, 0, ..., sqrt(3)/2), y = (-1/2, 0, ..., sqrt(3)/2)
gives <T_n x, y> = -1/4 + 3/(4n), which is 0 only when n = 3. For n = 2 the
origin is outside W_{1/2}(T_2).

Run:  python3 demos/04_truncations.py
"""
import numpy as np

from qrange.structure import run_convergence

dims = [2, 3, 4, 8, 16, 24]
r = run_convergence(1 / np.arange(1, 25), 0.5, dims, final_tol=2e-2)
print("  n   <T_n x, y>   min support   d_H to n=24")
for n in dims:
    d = r.metrics.get(f"d_H[{n}]", 0.0)
    print(f"{n:3d}   {r.metrics[f'witness[{n}]']:+.6f}    {r.metrics[f'margin[{n}]']:+.6f}     {d:.6f}")
