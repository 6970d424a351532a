"""Every bound in the catalog, evaluated on two fixtures.

Run:  python3 demos/02_bound_table.py
"""
import numpy as np

from qrange.bounds import bound_sweep
from qrange.findings import PRINTED_Q5_TABLE, q5_example_table

D = np.diag([2.0, 1.0])
rows = bound_sweep(D, [0.0, 0.5, 1.0])
print("diag(2,1)")
print(f"{'bound':16s} {'q':>4s} {'rhs':>10s} {'omega':>10s} {'slack':>10s}  holds")
for r in rows:
    lhs = "omega^2" if r.power == 2 else ""
    print(f"{r.bound_id:16s} {r.q:4.2f} {r.rhs:10.6f} {r.omega_est:10.6f} {r.slack:10.6f}  {r.holds} {lhs}")

# The combined bound min(B1, B2) on the triangular matrix, next to the
# reference table. The reference omega_q column ends at 2.414 for q = 1,
# but the numerical radius of this matrix is 3/2 + sqrt(2)/2.
print("\n[[2,1],[0,1]]     recomputed                          reference")
print("   q   omega_q    B1        B2        B         omega_q  B")
for got, ref in zip(q5_example_table(), PRINTED_Q5_TABLE):
    q, om, b1, b2, b = got
    print(f"{q:4.1f}  {om:.6f}  {b1:.6f}  {b2:.6f}  {b:.6f}   {ref[1]:.3f}    {ref[4]:.3f}")
