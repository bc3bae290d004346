import numpy as np
import pytest

from allpass import from_gmr_form
from allpass.gmr_replica import (
    CASES,
    PAPER_VALUES,
    ReplicaStatus,
    ZeroNormFailure,
    diagnose,
    gmr_all_forms,
    gmr_orthonormal_basis,
    gmr_other_basic_form,
    r_eigen,
)
from allpass.verify import PAPER_GRID, allpass_defect, quotient_filter, spectral_equivalence


def theta(a, b, c=0.0):
    # matrix(c(a, b + c, -b, a), 2, 2) in R, column-major
    return np.array([[a, -b], [b + c, a]], dtype=float)


def test_theta_layout():
    np.testing.assert_array_equal(theta(0, 1), [[0, -1], [1, 0]])
    np.testing.assert_array_equal(theta(2, -6), [[2, 6], [-6, 2]])
    np.testing.assert_array_equal(theta(4, 3, 2), [[4, -3], [5, 4]])


def test_orthonormal_basis():
    with pytest.raises(ZeroNormFailure, match="z should not be 0"):
        gmr_orthonormal_basis([1, 1j])
    np.testing.assert_allclose(gmr_orthonormal_basis([1, 0]), np.eye(2))
    B = gmr_orthonormal_basis([3, 4])
    np.testing.assert_allclose(B[:, 0], [0.6, 0.8])
    np.testing.assert_allclose(B.T @ B, np.eye(2), atol=1e-15)
    # first entry zero: the other unit vectors are used
    B = gmr_orthonormal_basis([0, 1, 1])
    np.testing.assert_allclose(B.T @ B, np.eye(3), atol=1e-14)
    # complex input: orthonormal only in the bilinear (not Hermitian) sense
    B = gmr_orthonormal_basis([1, 2j, 1])
    np.testing.assert_allclose(B.T @ B, np.eye(3), atol=1e-12)
    assert np.abs(B.conj().T @ B - np.eye(3)).max() > 0.1


def test_r_eigen_ordering():
    vals, vecs = r_eigen(np.diag([1.0, -3.0, 2.0]))
    # symmetric input: decreasing algebraic order
    np.testing.assert_allclose(vals.real, [2, 1, -3])
    vals, _ = r_eigen(np.array([[0.0, 1.0], [-4.0, 0.1]]))
    assert np.all(np.diff(np.abs(vals)) <= 1e-15)
    vals, _ = r_eigen(theta(4, 3, 2))
    np.testing.assert_allclose(vals, PAPER_VALUES[(4, 3, 2)]["eigenvalues"], atol=1e-6)


@pytest.mark.parametrize("a,b", [(0, 1), (1, 1)])
def test_failure_cases(a, b):
    out = gmr_other_basic_form(theta(a, b), np.eye(2), (1, 0))
    assert out.status is ReplicaStatus.DOWNSTREAM
    assert out.console[0] == "z should not be 0"
    assert "non-conformable" in out.message
    assert out.theta is None


def test_skew_large_output():
    out = gmr_other_basic_form(theta(2, -6), np.eye(2), (1, 0))
    assert out.ok
    assert np.isfinite(out.theta).all() and np.isfinite(out.c).all()
    assert max(np.abs(out.theta).max(), np.abs(out.c).max()) > 1e7
    exp = PAPER_VALUES[(2, -6, 0)]
    # magnitudes reproduce only up to order (platform-dependent eigenvectors)
    assert abs(np.log10(np.abs(out.theta).max()) - np.log10(np.abs(exp["theta"]).max())) < 1
    assert abs(np.log10(np.abs(out.c).max()) - np.log10(np.abs(exp["c"]).max())) < 1
    teig = np.linalg.eigvals(out.theta)
    # eigenvalues come as (x, -x) like the printed pair
    assert abs(teig[0] + teig[1]) < 1e-6 * np.abs(teig).max()
    V = quotient_filter(from_gmr_form(theta(2, -6), np.eye(2)),
                        from_gmr_form(out.theta, out.c, rank_tol=1e-300))
    assert allpass_defect(V, 64) > 1


def test_general_complex():
    out = gmr_other_basic_form(theta(4, 3, 2), np.eye(2), (0, 0))
    assert out.ok
    exp = PAPER_VALUES[(4, 3, 2)]
    np.testing.assert_allclose(out.theta.real, exp["theta"], rtol=1e-6, atol=1e-7)
    assert np.abs(out.theta.imag).max() < 1e-12
    # eigenvalues flipped to the reciprocals ...
    np.testing.assert_allclose(sorted(np.linalg.eigvals(out.theta), key=np.imag),
                               sorted(exp["transformed_eigenvalues"], key=np.imag), atol=1e-6)
    # ... but the spectral density is not preserved
    d, _ = spectral_equivalence(from_gmr_form(theta(4, 3, 2), np.eye(2)),
                                from_gmr_form(out.theta, out.c), PAPER_GRID)
    np.testing.assert_allclose(d, exp["dist_herm"], rtol=1e-6)
    # C agrees with the printed one up to the sign of each column
    c = np.asarray(exp["c"])
    for j in range(2):
        s = np.sign((out.c[:, j].conj() @ c[:, j]).real)
        np.testing.assert_allclose(s * out.c[:, j], c[:, j], atol=1e-5)


def test_discard_imag():
    out = gmr_other_basic_form(theta(2, 2, 4), np.eye(2), (1, 0))
    assert out.ok
    exp = PAPER_VALUES[(2, 2, 4)]
    np.testing.assert_allclose(out.theta, exp["theta"], atol=1e-5)
    mods = sorted(np.abs(np.linalg.eigvals(out.theta)), reverse=True)
    np.testing.assert_allclose(mods, [4.00, 0.25], atol=1e-4)
    mods_re = sorted(np.abs(np.linalg.eigvals(out.theta.real)), reverse=True)
    np.testing.assert_allclose(mods_re, [4.329881, 2.204881], atol=1e-5)


def test_all_forms():
    af = gmr_all_forms(np.array([[0.5]]), np.array([[1.0]]))
    np.testing.assert_allclose(af.all_theta[0, 0], [2, 0.5])
    np.testing.assert_allclose(af.all_c[0, 0], [0.5, 1])

    af = gmr_all_forms(theta(4, 3, 2), np.eye(2))
    assert af.combi.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert af.all_theta.shape == (2, 2, 4) and len(af.outcomes) == 4
    row = gmr_other_basic_form(theta(4, 3, 2), np.eye(2), (0, 0))
    np.testing.assert_allclose(af.all_theta[:, :, 0], row.theta)
    # w = (1, 1): untouched
    np.testing.assert_allclose(af.all_theta[:, :, 3], theta(4, 3, 2))

    af = gmr_all_forms(theta(0, 1), np.eye(2))
    assert af.outcomes[3].ok
    assert all(o.status is ReplicaStatus.DOWNSTREAM for o in af.outcomes[:3])
    assert np.isnan(af.all_theta[:, :, 0]).all()


def test_combi_three():
    from allpass.gmr_replica import _combi

    assert [
        "".join(map(str, r)) for r in _combi(3)
    ] == ["000", "001", "010", "011", "100", "101", "110", "111"]


@pytest.mark.parametrize("case", sorted(CASES))
def test_diagnose(case):
    rep = diagnose(case, grid=64)
    assert rep["case"] == case
    for run in rep["runs"]:
        assert run["checks"]["status_matches"]
        if "theta_rel_err" in run["checks"] and case != "SkewSymmetric":
            assert run["checks"]["theta_rel_err"] < 1e-6
    if case == "PurelyComplex":
        assert rep["runs"][0]["correct_pipeline"]["error"] == "UnitCircleRoot"
    else:
        for run in rep["runs"]:
            for res in run["correct_pipeline"].values():
                assert res["passed"]
    if case == "DiscardImag":
        run = rep["runs"][0]
        assert run["roots_inside_complex"] == 1
        assert run["roots_inside_after_discard"] == 2


def test_diagnose_unknown():
    with pytest.raises(ValueError):
        diagnose("Nope")
