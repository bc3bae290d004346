"""
A complex pair mirrored by both pipelines
=========================================

A 2x2 VMA(1) whose determinant has a conjugate pair of roots inside the
unit circle. Both mirroring pipelines move the pair to 1/conj(alpha),
keep real coefficients and preserve the spectral density. The two results
differ only by a constant orthogonal factor.
"""
import numpy as np

from allpass import (MirrorConfig, apply_config, determinantal_roots,
                     from_gmr_form, group_roots, verify_transform)

theta = np.array([[4.0, -3.0], [5.0, 4.0]])
P = from_gmr_form(theta, np.eye(2))
groups = group_roots(determinantal_roots(P))
print("groups:", [(g.kind.value, complex(np.round(g.alpha, 6)), g.location.value) for g in groups])

cfg = MirrorConfig((True,))
outs = {}
for method in ("svd", "qr"):
    out = apply_config(P, groups, cfg, method)
    rep = verify_transform(P, out, groups, cfg)
    outs[method] = out
    print(f"\n{method}: new roots", np.round(np.sort_complex(determinantal_roots(out)), 6))
    print(np.round(out.coeffs, 6))
    print("report:", {k: f"{v:.1e}" for k, v in rep.to_json().items()
                      if k.startswith("max_")})

# ratio of the two results on the circle is one constant orthogonal matrix
O = np.linalg.solve(outs["qr"](1.0), outs["svd"](1.0))
print("\nO =", np.round(O.real, 6))
print("O O^T - I:", f"{np.linalg.norm(O @ O.T - np.eye(2)):.1e}")
