"""Gap closure location and inverse-size scaling fits."""

import numpy as np
import pytest

from nhchain.critical import ep_curve, find_ep_J, fit_inverse_poly, gap_at
from nhchain.hamiltonian import ChainParams

GAP_REF = 0.34641016151377546  # b/2 at J=0.3, h=0.1, gamma=1


def test_gap_reference_point():
    assert gap_at(ChainParams(N=2, J=0.3, h=0.1)) == pytest.approx(GAP_REF, abs=1e-10)


def test_gap_closes_on_the_boundary():
    # b = 0 along h = sqrt(gamma^2 - 4 J^2) / 4
    J = 0.3
    h = np.sqrt(1 - 4 * J**2) / 4.0
    assert gap_at(ChainParams(N=2, J=J, h=h)) <= 1e-8


def test_gap_decoupled_chain():
    assert gap_at(ChainParams(N=2, J=0.0, h=0.0)) == pytest.approx(0.5, abs=1e-12)


def test_gap_krylov_matches_dense():
    p = ChainParams(N=4, J=0.2, h=0.15, theta=0.4)
    dense = gap_at(p, method="dense")
    kry = gap_at(p, method="krylov", tol=1e-10)
    assert kry == pytest.approx(dense, abs=1e-7)


def test_gap_continuity_in_coupling():
    # empirical continuity scan away from the closure
    for J in np.linspace(0.05, 0.25, 9):
        g1 = gap_at(ChainParams(N=3, J=float(J), h=0.1))
        g2 = gap_at(ChainParams(N=3, J=float(J) + 1e-5, h=0.1))
        assert abs(g1 - g2) < 1e-3


def test_find_ep_two_site_reference_points():
    # analytic boundary: J_c = sqrt(gamma^2 - 16 h^2) / 2
    assert find_ep_J(N=2, h=0.2, tol_J=2e-5) == pytest.approx(0.3, abs=1e-4)
    assert find_ep_J(N=2, h=0.0, tol_J=2e-5) == pytest.approx(0.5, abs=1e-4)


def test_find_ep_invalid_bracket():
    with pytest.raises(ValueError, match="gap"):
        find_ep_J(N=2, h=0.2, bracket=(0.0, 0.1))  # gapped at both ends


def test_ep_curve_two_site_matches_analytic_boundary():
    h_grid = np.linspace(0.0, 0.24, 7)
    curve = ep_curve(N=2, h_grid=h_grid, tol_J=1e-4)
    assert not curve.failures
    assert len(curve.points) == 7
    for pt in curve.points:
        expected = np.sqrt(1 - 16 * pt.h**2) / 2.0
        assert pt.j_c == pytest.approx(expected, abs=1e-4)
        assert pt.bracket[1] - pt.bracket[0] <= curve.tol_J
    # monotone decreasing boundary
    jcs = [pt.j_c for pt in curve.points]
    assert all(b < a for a, b in zip(jcs, jcs[1:]))


def test_ep_curve_gapless_edge_point():
    # at h = 0.25 the gapped region has closed entirely: J_c collapses to
    # the lower bracket edge
    curve = ep_curve(N=2, h_grid=[0.25], tol_J=1e-4)
    assert not curve.failures
    assert curve.points[0].j_c == pytest.approx(0.0, abs=1e-4)


def test_ep_curve_bracket_indicator_consistency():
    curve = ep_curve(N=2, h_grid=[0.1], tol_J=1e-4)
    (pt,) = curve.points
    lo, hi = pt.bracket
    assert gap_at(ChainParams(N=2, J=lo, h=0.1)) > curve.tol_gap
    assert gap_at(ChainParams(N=2, J=hi, h=0.1)) <= curve.tol_gap


def test_ep_curve_records_per_point_failures():
    # a bracket that is still gapped at its upper edge cannot be bisected;
    # the point is recorded as a failure and the curve keeps going
    curve = ep_curve(N=2, h_grid=[0.0, 0.2], bracket=(0.0, 0.25), tol_J=1e-3)
    assert len(curve.failures) == 2
    assert all("bracket" in msg for _, msg in curve.failures)
    assert not curve.points


def test_boundary_shrinks_with_size():
    j2 = find_ep_J(N=2, h=0.2, tol_J=1e-4)
    j4 = find_ep_J(N=4, h=0.2, tol_J=1e-4)
    assert j4 < j2


def test_fit_recovers_exact_model():
    sizes = [2, 3, 4, 6, 8, 10]
    pts = [(n, 0.8 / n**2 + 0.05 / n + 0.25) for n in sizes]
    fit = fit_inverse_poly(pts, degree=2)
    assert fit.coefficients == pytest.approx((0.8, 0.05, 0.25), abs=1e-10)
    assert fit.residual_norm < 1e-12
    assert fit.extrapolated == pytest.approx(0.25, abs=1e-10)


def test_fit_residual_orthogonal_to_design():
    rng = np.random.default_rng(9)
    sizes = np.arange(2, 11)
    values = 0.9 / sizes**2 + 0.02 / sizes + 0.25 + 0.001 * rng.standard_normal(9)
    fit = fit_inverse_poly(list(zip(sizes, values)), degree=2)
    design = np.column_stack([sizes**-2.0, sizes**-1.0, np.ones(9)])
    resid = values - design @ np.array(fit.coefficients)
    assert np.abs(design.T @ resid).max() < 1e-10


def test_fit_residual_improves_with_degree():
    sizes = np.arange(2, 11)
    values = 1.1 / sizes**2 + 0.01 / sizes + 0.24
    pts = list(zip(sizes, values))
    r1 = fit_inverse_poly(pts, degree=1).residual_norm
    r2 = fit_inverse_poly(pts, degree=2).residual_norm
    assert r2 <= r1 + 1e-15


def test_fit_requires_four_distinct_sizes():
    with pytest.raises(ValueError, match="4 distinct"):
        fit_inverse_poly([(2, 0.5), (2, 0.5), (3, 0.35), (4, 0.31)])


def test_fit_rejects_bad_degree():
    with pytest.raises(ValueError, match="degree"):
        fit_inverse_poly([(2, 0.5), (3, 0.35), (4, 0.31), (5, 0.29)], degree=0)
