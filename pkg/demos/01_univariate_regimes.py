"""
Regimes of a univariate MA(2)
=============================

A scalar MA(2) polynomial with two real roots outside the unit circle has
four spectrally equivalent representations, one per subset of roots moved
inside. We enumerate them and confirm the spectral density never changes.
"""
import numpy as np

from allpass import PolyMat, determinantal_roots, enumerate_regimes

# (1 - 0.75 z)(1 - 0.25 z): roots at 4/3 and 4
P = PolyMat.scalar(np.polynomial.polynomial.polymul([1, -0.75], [1, -0.25]))
print("roots:", np.sort(determinantal_roots(P).real))

for cfg, out, rep in enumerate_regimes(P, "qr"):
    roots = np.sort(determinantal_roots(out).real)
    print(cfg.to_bitstring(), "coeffs", np.round(out.coeffs[0, 0].real, 4),
          "roots", np.round(roots, 4),
          f"spectral defect {rep.max_spectral_defect:.1e}")
