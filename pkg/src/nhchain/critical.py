"""Exceptional-point location and finite-size scaling of the gap closure.

The imaginary-part gap is non-negative and identically zero beyond the
coalescence boundary (the merging pair separates in real part, not in
imaginary part), so the boundary is bisected on the indicator
``gap > tol_gap`` rather than on a sign change.  ``tol_gap = 1e-6 * gamma``
sits well above dense-solver eigenvalue noise (~1e-12) and well below every
physical gap of interest (~1e-1).
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import ChainParams, build_total
from .spectral import default_tol_gap, dense_eigenvalues, steady_state_krylov


@dataclass(frozen=True)
class EpPoint:
    """One located boundary point with its final bisection bracket."""

    h: float
    j_c: float
    bracket: tuple[float, float]


@dataclass(frozen=True)
class EpCurve:
    """Gap-closure boundary J_c(h) for one chain size."""

    N: int
    gamma: float
    theta: float
    tol_gap: float
    tol_J: float
    points: list[EpPoint] = field(default_factory=list)
    failures: list[tuple[float, str]] = field(default_factory=list)


@dataclass(frozen=True)
class ScalingFit:
    """Ordinary least squares of J_c(N) on the basis {1/N^deg, ..., 1/N, 1}.

    ``coefficients`` are ordered from the highest inverse power down to the
    constant term, which is the extrapolated boundary at infinite size.
    """

    coefficients: tuple[float, ...]
    residual_norm: float
    degree: int
    points: tuple[tuple[int, float], ...]

    @property
    def extrapolated(self) -> float:
        return self.coefficients[-1]


def gap_at(p: ChainParams, method: str = "auto", **solver_kw) -> float:
    """Difference of the top two imaginary parts of the spectrum, >= 0.

    ``dense`` diagonalizes the full matrix (N <= 12); ``krylov`` uses the
    deflated two-vector subspace estimate, which is only reliable where the
    power iteration converges (away from the closure itself).
    """
    if method == "auto":
        method = "dense" if p.dim <= 4096 else "krylov"
    H = build_total(p)
    if method == "dense":
        w = dense_eigenvalues(H)
        return float(w[0].imag - w[1].imag)
    if method == "krylov":
        return steady_state_krylov(H, p, **solver_kw).gap
    raise ValueError(f"unknown method {method!r}; expected auto, dense or krylov")


def _bisect_ep(N, h, gamma, theta, bracket, tol_J, tol_gap, method):
    def gap(J):
        return gap_at(ChainParams(N=N, J=J, gamma=gamma, h=h, theta=theta), method)

    lo, hi = bracket
    if not 0 <= lo < hi:
        raise ValueError(f"invalid bracket {bracket}")
    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo <= tol_gap or g_hi > tol_gap:
        raise ValueError(
            f"bracket [{lo}, {hi}] does not enclose the gap closure: "
            f"gap({lo}) = {g_lo:.3e}, gap({hi}) = {g_hi:.3e}, tol_gap = {tol_gap:.3e}"
        )
    while hi - lo > tol_J:
        mid = 0.5 * (lo + hi)
        if gap(mid) > tol_gap:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), (lo, hi)


def find_ep_J(
    N: int,
    h: float,
    gamma: float = 1.0,
    theta: float = 0.0,
    bracket: tuple[float, float] = (0.0, 0.6),
    tol_J: float = 1e-4,
    tol_gap: float | None = None,
    method: str = "auto",
) -> float:
    """Bisection for the coupling J_c where the imaginary-part gap closes.

    Requires ``gap(bracket[0]) > tol_gap >= gap(bracket[1])``; returns the
    midpoint of the final bracket of width <= tol_J.
    """
    if tol_gap is None:
        tol_gap = default_tol_gap(gamma)
    j_c, _ = _bisect_ep(N, h, gamma, theta, bracket, tol_J, tol_gap, method)
    return j_c


def ep_curve(
    N: int,
    h_grid,
    gamma: float = 1.0,
    theta: float = 0.0,
    tol_J: float = 1e-4,
    tol_gap: float | None = None,
    bracket: tuple[float, float] = (0.0, 0.6),
    method: str = "auto",
) -> EpCurve:
    """Locate J_c over a grid of field amplitudes.

    A grid point whose lower bracket edge is already gapless reports
    ``j_c = bracket[0]`` (the gapped region has closed entirely); other
    per-point failures are recorded and leave a hole in the curve.  J_c is
    expected to decrease with h; violations raise a warning, not an error.
    """
    if tol_gap is None:
        tol_gap = default_tol_gap(gamma)
    points: list[EpPoint] = []
    failures: list[tuple[float, str]] = []
    for h in np.atleast_1d(np.asarray(h_grid, dtype=float)):
        h = float(h)
        lo_gap = gap_at(
            ChainParams(N=N, J=bracket[0], gamma=gamma, h=h, theta=theta), method
        )
        if lo_gap <= tol_gap:
            points.append(EpPoint(h=h, j_c=bracket[0], bracket=(bracket[0], bracket[0])))
            continue
        try:
            j_c, final = _bisect_ep(N, h, gamma, theta, bracket, tol_J, tol_gap, method)
        except (ValueError, RuntimeError) as exc:
            failures.append((h, str(exc)))
            continue
        points.append(EpPoint(h=h, j_c=j_c, bracket=final))
    for prev, cur in zip(points, points[1:]):
        if cur.h > prev.h and cur.j_c > prev.j_c + tol_J:
            warnings.warn(
                f"J_c is not monotone decreasing in h: "
                f"J_c({prev.h}) = {prev.j_c:.6f} < J_c({cur.h}) = {cur.j_c:.6f}",
                stacklevel=2,
            )
    return EpCurve(
        N=N,
        gamma=gamma,
        theta=theta,
        tol_gap=tol_gap,
        tol_J=tol_J,
        points=points,
        failures=failures,
    )


def fit_inverse_poly(points, degree: int = 2) -> ScalingFit:
    """Least-squares fit of boundary points (N, J_c) to a polynomial in 1/N."""
    pts = [(int(n), float(j)) for n, j in points]
    sizes = np.array([n for n, _ in pts], dtype=float)
    values = np.array([j for _, j in pts])
    if len(set(int(n) for n in sizes)) < 4:
        raise ValueError("fit requires at least 4 distinct chain sizes")
    if degree < 1:
        raise ValueError("degree must be >= 1")
    design = np.column_stack(
        [sizes ** (-k) for k in range(degree, 0, -1)] + [np.ones_like(sizes)]
    )
    coef, _, rank, _ = np.linalg.lstsq(design, values, rcond=None)
    if rank < degree + 1:
        raise ValueError(f"rank-deficient design matrix (rank {rank})")
    residual = values - design @ coef
    return ScalingFit(
        coefficients=tuple(float(c) for c in coef),
        residual_norm=float(np.linalg.norm(residual)),
        degree=degree,
        points=tuple(pts),
    )
