"""Ranges and radii of a small upper-triangular matrix.

Run:  python3 demos/01_ranges_and_radii.py [outdir]
Writes triangular_ranges.svg next to the printed numbers.
"""
import sys
from pathlib import Path

import numpy as np

from qrange.numrange import omega_q, omega_q_2x2_closed, range_cloud, tsing_ellipse
from qrange.radii import crawford, numerical_radius, transcendental_radius
from qrange.svg import render

T = np.array([[2, 1], [0, 1]], dtype=complex)
out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")

# The classical quantities first. W(T) is an ellipse with foci 1 and 2.
w = numerical_radius(T).value
print(f"w(T) = {w:.12f}   (3/2 + sqrt(2)/2 = {1.5 + np.sqrt(2) / 2:.12f})")
print(f"c(T) = {crawford(T).value:.12f}")
print(f"m(T) = {transcendental_radius(T).value:.12f}")

# Shrinking q pulls the foci towards 0 and fattens the ellipse.
print("\n   q    omega_q (ascent)   closed form     semi-axes")
hulls, labels = [], []
for q in (1.0, 0.8, 0.5, 0.2, 0.0):
    est = omega_q(T, q)
    _, a, b, _ = tsing_ellipse(T, q)
    print(f"{q:4.1f}   {est.value:.12f}   {omega_q_2x2_closed(T, q):.12f}   {a:.4f} {b:.4f}")
    hulls.append(range_cloud(T, q, n_theta=180, n_samples=200).hull)
    labels.append(f"q={q:g}")

# At q = 0 the range is a disk about the origin of radius m(T).
(out / "triangular_ranges.svg").write_text(render(hulls, labels, "W_q([[2,1],[0,1]])"))
print(f"\nwrote {out / 'triangular_ranges.svg'}")
