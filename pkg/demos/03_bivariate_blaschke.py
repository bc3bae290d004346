"""
The real bivariate Blaschke factor
==================================

Built from a conjugate pair alpha, conj(alpha) and a complex direction w.
The 2x2 factor is all-pass on the unit circle, real for real z, and its
determinant is the squared Blaschke factor of the pair.
"""
import numpy as np

from allpass import build_bivariate, diag_embed, squared_from_pair
from allpass.verify import allpass_defect

alpha = 0.4 + 0.6j
w = np.array([1.0, 1j])
B = build_bivariate(alpha, w)
sq = squared_from_pair(alpha)

print("B(1) =\n", np.round(B(1.0), 12))
for z in (0.3, -0.7, np.exp(0.9j)):
    print(f"z={z:.3f}  det B = {np.linalg.det(B(z)):.6f}  squared = {sq(z):.6f}")
print("imag part for real z:", np.abs(B(0.3).imag).max())
print("all-pass defect on 512 points:", f"{allpass_defect(B, 512):.1e}")
print("embedded in 3x3:", f"{allpass_defect(diag_embed(B, 3), 512):.1e}")
