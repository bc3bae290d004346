"""Line-by-line port of a published (and flawed) R implementation of
Blaschke transformations for VMA(1) models ``(I - Theta L) C``.

The point of this module is to reproduce the defects, not to fix them:

* vectors are "normalised" with ``sum(v**2)`` -- no complex conjugate --
  so ``(1, i)`` has length zero;
* that length is compared with zero exactly;
* complex-conjugate roots are flipped one member at a time;
* the root to flip is re-located by first index of the minimal distance.

R prints a message and carries on with ``NaN`` where the normalisation
fails; the subsequent matrix product then stops with "non-conformable
arguments".  Here that sequence is reported through :class:`ReplicaOutcome`
instead of a console print and an exception.

:func:`diagnose` replays the worked cases and contrasts them with the
correct pipelines from :mod:`allpass.mirror`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._exceptions import AllPassError
from .polymat import from_gmr_form
from .verify import PAPER_GRID, allpass_defect, quotient_filter, spectral_equivalence

__all__ = [
    "ReplicaStatus",
    "ReplicaOutcome",
    "ZeroNormFailure",
    "r_eigen",
    "gmr_orthonormal_basis",
    "gmr_other_basic_form",
    "gmr_all_forms",
    "AllForms",
    "CASES",
    "PAPER_VALUES",
    "diagnose",
]

ZERO_NORM_MESSAGE = "z should not be 0"
NONCONFORMABLE_MESSAGE = "Error in C_step %*% trafo_orth : non-conformable arguments"


class ZeroNormFailure(AllPassError):
    """``sum(vec**2) == 0`` in the orthonormal-basis routine."""

    def __init__(self, message=ZERO_NORM_MESSAGE):
        super().__init__(message)


class ReplicaStatus(str, Enum):
    OK = "Ok"
    ZERO_NORM = "ZeroNormFailure"
    DOWNSTREAM = "DownstreamDimensionError"


@dataclass
class ReplicaOutcome:
    status: ReplicaStatus
    theta: np.ndarray | None = None
    c: np.ndarray | None = None
    message: str = ""
    # what R would have printed, in order
    console: list = field(default_factory=list)

    @property
    def ok(self):
        return self.status is ReplicaStatus.OK


def _r_is_symmetric(M, tol=100 * np.finfo(float).eps):
    # isSymmetric.matrix: all.equal(M, t(M)) (Conj for complex), mean relative difference
    if M.shape[0] != M.shape[1]:
        return False
    other = M.conj().T if np.iscomplexobj(M) else M.T
    diff = np.abs(M - other).mean()
    scale = np.abs(M).mean()
    if np.isfinite(scale) and scale > tol:
        diff = diff / scale
    return diff <= tol


def r_eigen(M):
    """``eigen(M)`` as R returns it.

    Symmetric (Hermitian) input: values in decreasing order.  Otherwise
    LAPACK ``geev`` output stably sorted by decreasing modulus.  Vectors
    have unit norm with their largest component real (LAPACK convention).
    """
    M = np.asarray(M)
    if np.iscomplexobj(M) and np.all(M.imag == 0):
        M = M.real
    if _r_is_symmetric(M):
        vals, vecs = np.linalg.eigh(M)
        order = np.argsort(-vals, kind="stable")
    else:
        vals, vecs = np.linalg.eig(M)
        order = np.argsort(-np.abs(vals), kind="stable")
    return vals[order].astype(complex), vecs[:, order].astype(complex)


def gmr_orthonormal_basis(vec):
    """Port of ``build.orthonormal.basis``.

    Returns an ``n x n`` matrix whose first column is ``vec / sqrt(sum(vec**2))``
    and whose remaining columns are obtained by successive (transpose, not
    conjugate-transpose) projections of unit vectors.  Raises
    :class:`ZeroNormFailure` where R prints "z should not be 0".
    """
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    n = vec.size
    Id = np.eye(n)
    if n < 2:
        # Id[, 2:1] in R
        raise IndexError("subscript out of bounds")
    if vec[0] != 0:
        basis_non_orth = Id[:, 1:n]
    else:
        basis_non_orth = Id[:, 0:n - 1]
    sq = np.sum(vec ** 2)
    if sq == 0:
        raise ZeroNormFailure()
    orth = (vec / np.sqrt(sq)).reshape(n, 1)
    for ix_col in range(2, n + 1):
        X = orth[:, : ix_col - 1]
        y = basis_non_orth[:, ix_col - 2].reshape(n, 1)
        new = (Id - X @ np.linalg.solve(X.T @ X, X.T)) @ y
        new = new / np.sqrt(np.sum(new ** 2))
        orth = np.hstack([orth, new])
    return orth


def gmr_other_basic_form(Theta, C, w):
    """Port of ``compute.other.basic.form``: flip the i-th zero wherever ``w[i] != 1``."""
    Theta = np.asarray(Theta, dtype=complex)
    C = np.asarray(C, dtype=complex)
    w = list(w)
    n = C.shape[0]
    console = []
    with np.errstate(divide="ignore", invalid="ignore"):
        zeros_initial = 1 / r_eigen(Theta)[0]
        theta_step, c_step = Theta.copy(), C.copy()
        for ix in range(n):
            if w[ix] == 1:
                continue
            zero_this = zeros_initial[ix]
            vals, vecs = r_eigen(theta_step)
            zeros_step = 1 / vals
            dist = np.abs(zeros_step - zero_this)
            pos = int(np.flatnonzero(dist == dist.min())[0])
            ev = vecs[:, pos]
            ev_t = np.linalg.solve(c_step, ev)
            try:
                trafo = gmr_orthonormal_basis(ev_t)
            except ZeroNormFailure as exc:
                console.append(str(exc))
                # R continues with trafo_orth <- NaN; C_step %*% NaN is non-conformable
                console.append(NONCONFORMABLE_MESSAGE)
                return ReplicaOutcome(
                    ReplicaStatus.DOWNSTREAM,
                    message=NONCONFORMABLE_MESSAGE,
                    console=console,
                )
            except IndexError as exc:
                return ReplicaOutcome(ReplicaStatus.DOWNSTREAM, message=str(exc), console=console)

            ck_mod = c_step @ trafo
            a = ck_mod[:, 0].copy()
            ck_mod[:, 0] = -a * (1 / np.conj(zero_this))
            theta_mod = theta_step @ c_step @ trafo
            theta_mod[:, 0] = -a
            c_step = ck_mod
            theta_step = theta_mod @ np.linalg.inv(ck_mod)
    return ReplicaOutcome(ReplicaStatus.OK, theta=theta_step, c=c_step, console=console)


@dataclass
class AllForms:
    all_theta: np.ndarray  # (n, n, 2**n), NaN where a row failed
    all_c: np.ndarray
    combi: np.ndarray      # (2**n, n) flip indicators, 0 = flip
    outcomes: list


def _combi(n):
    # combi[, i] <- rep(c(0, 1), 2^(i-1)) %x% rep(1, 2^(n-i))
    combi = np.zeros((2 ** n, n), dtype=int)
    for i in range(1, n + 1):
        combi[:, i - 1] = np.kron(np.tile([0, 1], 2 ** (i - 1)), np.ones(2 ** (n - i), dtype=int))
    return combi


def gmr_all_forms(Theta, C):
    """Port of ``compute.all.forms``."""
    Theta = np.atleast_2d(np.asarray(Theta, dtype=complex))
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    n = C.shape[0]
    if n == 1:
        t, c = Theta[0, 0], C[0, 0]
        all_theta = np.array([1 / t, t]).reshape(1, 1, 2)
        all_c = np.array([c * t, c]).reshape(1, 1, 2)
        outcomes = [
            ReplicaOutcome(ReplicaStatus.OK, all_theta[:, :, k], all_c[:, :, k]) for k in range(2)
        ]
        return AllForms(all_theta, all_c, np.array([[0], [1]]), outcomes)

    combi = _combi(n)
    all_theta = np.full((n, n, 2 ** n), np.nan, dtype=complex)
    all_c = np.full((n, n, 2 ** n), np.nan, dtype=complex)
    outcomes = []
    for k in range(2 ** n):
        out = gmr_other_basic_form(Theta, C, combi[k])
        if out.ok:
            all_theta[:, :, k] = out.theta
            all_c[:, :, k] = out.c
        outcomes.append(out)
    return AllForms(all_theta, all_c, combi, outcomes)


def _theta(a, b, c=0.0):
    # matrix(c(a, b + c, -b, a), 2, 2) fills column-major
    return np.array([[a, -b], [b + c, a]], dtype=float)


CASES = {
    "PurelyComplex": [dict(a=0, b=1, c=0, w=(1, 0))],
    "SkewSymmetric": [dict(a=1, b=1, c=0, w=(1, 0)), dict(a=2, b=-6, c=0, w=(1, 0))],
    "GeneralComplex": [dict(a=4, b=3, c=2, w=(0, 0))],
    "DiscardImag": [dict(a=2, b=2, c=4, w=(1, 0))],
}

# values printed in the published session
PAPER_VALUES = {
    (0, 1, 0): {"status": "DownstreamDimensionError", "eigenvalues": [1j, -1j]},
    (1, 1, 0): {"status": "DownstreamDimensionError"},
    (2, -6, 0): {
        "status": "Ok",
        "eigenvalues": [2 + 6j, 2 - 6j],
        "theta": [[-2.639553e15 + 1.273073e16j, 1.273073e16 + 2.639553e15j],
                  [1.273073e16 + 2.639553e15j, 2.639553e15 - 1.273073e16j]],
        "c": [[-94906266 - 284718797j, 47453133j],
              [-284718797 + 94906266j, 47453133 + 0j]],
        "transformed_eigenvalues": [-295256766 - 93315703j, 295256765 + 93315703j],
    },
    (4, 3, 2): {
        "status": "Ok",
        "eigenvalues": [4 + 3.872983j, 4 - 3.872983j],
        "inverse_eigenvalues": [0.1290323 - 0.1249349j, 0.1290323 + 0.1249349j],
        "theta": [[0.05990783, 0.1105991], [-0.18433180, 0.1981567]],
        "c": [[3.600595 - 6.338657j, -4.909903 - 4.648348j],
              [-4.909903 - 8.028965j, -6.219210 + 6.338657j]],
        "transformed_eigenvalues": [0.1290323 - 0.1249349j, 0.1290323 + 0.1249349j],
        "dist_herm": [
            29924.8979591836, 19163.9224190856, 19947.6366425084, 32593.8082149725,
            58200.1756711532, 90032.6530612241, 111887.119096838, 109869.165310613,
            85366.7012425608, 53666.9816063492,
        ],
    },
    (2, 2, 4): {
        "status": "Ok",
        "eigenvalues": [2 + 3.464102j, 2 - 3.464102j],
        "theta": [[2.9375 - 1.623798j, 0.8125 + 1.623798j],
                  [8.8125 + 1.623798j, -0.8125 + 4.871393j]],
        "c": [[-2.44949 + 1.414214j, 1.224745 + 0j],
              [-2.44949 - 4.242641j, 0.7071068j]],
        "abs_eigenvalues": [4.00, 0.25],
        "abs_eigenvalues_real_part": [4.329881, 2.204881],
    },
}


def _cjson(x):
    x = np.asarray(x, dtype=complex)
    if x.ndim == 0:
        return {"re": float(x.real), "im": float(x.imag)}
    return [_cjson(v) for v in x]


def _rel_err(found, expected):
    found = np.asarray(found, dtype=complex)
    expected = np.asarray(expected, dtype=complex)
    return float(np.abs(found - expected).max() / max(np.abs(expected).max(), 1e-300))


def _sorted_abs_desc(vals):
    return sorted((abs(v) for v in vals), reverse=True)


def _correct_contrast(Theta, grid):
    """Run the real-valued pipelines on the same input for comparison."""
    from .mirror import MirrorConfig, apply_config
    from .roots import determinantal_roots, group_roots
    from .verify import verify_transform

    P = from_gmr_form(Theta, np.eye(2))
    try:
        groups = group_roots(determinantal_roots(P))
    except AllPassError as exc:
        return {"error": type(exc).__name__, "message": str(exc)}
    cfg = MirrorConfig((True,) * len(groups))
    out = {}
    for method in ("svd", "qr"):
        try:
            P2 = apply_config(P, groups, cfg, method)
        except AllPassError as exc:
            out[method] = {"error": type(exc).__name__, "message": str(exc)}
            continue
        rep = verify_transform(P, P2, groups, cfg, grid=grid)
        out[method] = {
            "max_imag": rep.max_imag,
            "max_spectral_defect": rep.max_spectral_defect,
            "max_allpass_defect": rep.max_allpass_defect,
            "max_root_displacement": rep.max_root_displacement,
            "passed": rep.all_passed,
        }
    return out


def _run_case(spec, grid):
    a, b, c, w = spec["a"], spec["b"], spec["c"], spec["w"]
    Theta = _theta(a, b, c)
    C = np.eye(2)
    paper = PAPER_VALUES.get((a, b, c), {})
    outcome = gmr_other_basic_form(Theta, C, w)
    eig = r_eigen(Theta)[0]
    rep = {
        "params": {"a": a, "b": b, "c": c, "w": list(w)},
        "theta_input": Theta.tolist(),
        "eigenvalues": _cjson(eig),
        "determinantal_roots": _cjson(1 / eig),
        "status": outcome.status.value,
        "console": outcome.console,
        "checks": {},
    }
    checks = rep["checks"]
    if "status" in paper:
        checks["status_matches"] = outcome.status.value == paper["status"]
    if "eigenvalues" in paper:
        checks["eigenvalues_rel_err"] = _rel_err(eig, paper["eigenvalues"])
    if outcome.ok:
        T, Cm = outcome.theta, outcome.c
        rep["theta"] = _cjson(T)
        rep["c"] = _cjson(Cm)
        teig = r_eigen(T)[0]
        rep["transformed_eigenvalues"] = _cjson(teig)
        rep["max_abs_entry"] = float(max(np.abs(T).max(), np.abs(Cm).max()))
        rep["max_imag"] = float(max(np.abs(T.imag).max(), np.abs(Cm.imag).max()))
        P = from_gmr_form(Theta, C)
        P2 = from_gmr_form(T, Cm, rank_tol=1e-300) if np.all(np.isfinite(T)) else None
        if P2 is not None:
            dists, dmax = spectral_equivalence(P, P2, PAPER_GRID)
            rep["dist_herm"] = dists.tolist()
            rep["allpass_defect"] = allpass_defect(quotient_filter(P, P2), grid)
        if "theta" in paper:
            checks["theta_rel_err"] = _rel_err(T, paper["theta"])
            # ill-conditioned cases only reproduce up to the order of magnitude
            checks["theta_order_of_magnitude"] = bool(
                abs(np.log10(np.abs(T).max()) - np.log10(np.abs(paper["theta"]).max())) < 1
            )
        if "transformed_eigenvalues" in paper:
            exp_ = paper["transformed_eigenvalues"]
            checks["transformed_eigenvalues_order_of_magnitude"] = bool(
                abs(np.log10(np.abs(teig).max()) - np.log10(np.abs(exp_).max())) < 1
            )
        if "dist_herm" in paper and P2 is not None:
            checks["dist_herm_rel_err"] = float(
                np.max(np.abs(np.asarray(rep["dist_herm"]) - paper["dist_herm"])
                       / np.asarray(paper["dist_herm"]))
            )
        if "abs_eigenvalues" in paper:
            rep["abs_eigenvalues"] = _sorted_abs_desc(np.linalg.eigvals(T))
            rep["abs_eigenvalues_real_part"] = _sorted_abs_desc(np.linalg.eigvals(T.real))
            checks["abs_eigenvalues_err"] = float(
                np.max(np.abs(np.subtract(rep["abs_eigenvalues"], paper["abs_eigenvalues"]))))
            checks["abs_eigenvalues_real_part_err"] = float(
                np.max(np.abs(np.subtract(rep["abs_eigenvalues_real_part"],
                                          paper["abs_eigenvalues_real_part"]))))
            inside = lambda vals: int(sum(1 for v in vals if v > 1))  # eigenvalue > 1 <=> root inside
            rep["roots_inside_complex"] = inside(rep["abs_eigenvalues"])
            rep["roots_inside_after_discard"] = inside(rep["abs_eigenvalues_real_part"])
    rep["correct_pipeline"] = _correct_contrast(Theta, grid)
    return rep


def diagnose(case, grid=512):
    """Replay one worked case end to end and compare with the printed values.

    ``case`` is one of ``PurelyComplex``, ``SkewSymmetric``,
    ``GeneralComplex`` or ``DiscardImag``.  Mismatches are reported in the
    ``checks`` entries, never raised.
    """
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; choose from {sorted(CASES)}")
    return {"case": case, "runs": [_run_case(spec, grid) for spec in CASES[case]]}
