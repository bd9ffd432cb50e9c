"""Curvature of the real metrics: Christoffel, Riemann, Ricci, Weyl halves,
signature and Killing residuals.

Metric derivatives come from truncated-series arithmetic (exact up to
rounding), never from finite differences; an independent finite-difference
oracle lives in the test suite only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, SingularMetricError
from .geometry import REAL_COORD_LABELS, complex_covector_to_real, l_form_coefficients
from .jets import (TruncatedSeries, jet_of, series_map_coeffs, series_mul,
                   series_partial, series_permute, series_pow, series_scale)
from .pde import SCALE_FLOOR, HeavenlyParams
from .solutions import make_series_real_chart

SYMMETRY_TOL = 1e-9

# Wirtinger derivatives on real displacement coordinates (x1, y1, x2, y2):
# z1 -> (d_x1 - i d_y1)/2, conj z1 -> (d_x1 + i d_y1)/2, same pattern for z2.
_WIRTINGER = {
    1: ((0, 0.5), (1, -0.5j)),
    2: ((0, 0.5), (1, 0.5j)),
    3: ((2, 0.5), (3, -0.5j)),
    4: ((2, 0.5), (3, 0.5j)),
}


def wirtinger_partial(series: TruncatedSeries, axis: int) -> TruncatedSeries:
    """Derivative along complex axis 1..4 = (z1, conj z1, z2, conj z2)."""
    (v1, c1), (v2, c2) = _WIRTINGER[axis]
    return series_scale(series_partial(series, v1), c1) + \
        series_scale(series_partial(series, v2), c2)


@dataclass(frozen=True)
class MetricJet:
    """Real metric components as truncated series about a base point.

    `point` holds the real coordinates (x1, y1, x2, y2); every entry of `g`
    is a TruncatedSeries of the same degree with (numerically) real
    coefficients.  `orientation` (+1/-1) declares the orientation of the
    coordinate order relative to the tetrad volume form; the duality split of
    the Weyl tensor is taken with respect to it, which keeps the vanishing
    half's label constant across strata where Delta changes sign.
    """

    point: tuple
    g: tuple  # 4x4 nested tuple of TruncatedSeries
    degree: int
    orientation: float = 1.0

    def __post_init__(self):
        g0 = self.values()
        scale = max(np.abs(g0).max(), SCALE_FLOOR)
        if abs(np.linalg.det(g0)) <= 1e-12 * scale ** 4:
            raise SingularMetricError(
                f"metric determinant {np.linalg.det(g0)} below invertibility floor")

    def values(self) -> np.ndarray:
        return np.array([[self.g[i][j].constant_term.real for j in range(4)]
                         for i in range(4)])

    def derivative_arrays(self):
        """(g0, dg, ddg) with dg[l, i, j] = d_l g_ij and ddg[l, k, i, j]."""
        g0 = np.zeros((4, 4))
        dg = np.zeros((4, 4, 4))
        ddg = np.zeros((4, 4, 4, 4))
        for i in range(4):
            for j in range(4):
                jet = jet_of(self.g[i][j], 2)
                g0[i, j] = jet.value.real
                for l in range(4):
                    dg[l, i, j] = jet.d(l + 1).real
                    for k in range(4):
                        ddg[l, k, i, j] = jet.d(l + 1, k + 1).real
        return g0, dg, ddg


def real_metric_series(spec, point, p: HeavenlyParams, degree: int = 2):
    """Metric components as degree-`degree` series from order-(degree+2) data."""
    return _real_metric_series_with_delta(spec, point, p, degree)[0]


def _real_metric_series_with_delta(spec, point, p: HeavenlyParams, degree: int = 2):
    if p.branch not in ("neutral", "euclidean"):
        raise ContractViolationError("real metric series need a real branch")
    useries = make_series_real_chart(spec, point, degree + 2)
    u_w = {ax: wirtinger_partial(useries, ax) for ax in (1, 2, 3)}
    d12 = wirtinger_partial(u_w[1], 3)
    d12b = wirtinger_partial(u_w[1], 4)
    d21b = wirtinger_partial(u_w[2], 3)
    d1b2b = wirtinger_partial(u_w[2], 4)
    d22b = wirtinger_partial(u_w[3], 4)
    det = series_mul(d12, d1b2b) - series_mul(d12b, d21b)
    q = series_mul(d22b, det)
    q0 = q.constant_term.real
    if q0 == 0:
        raise SingularMetricError("u22bar * Delta vanishes at the base point")
    qabs = series_scale(q, 1.0 if q0 > 0 else -1.0)
    pref = series_scale(series_pow(qabs, -1), 2 * abs(p.gamma))
    l1, l2 = l_form_coefficients(d12, d1b2b, d12b, d21b, d22b)
    r1 = complex_covector_to_real(l1)
    r2 = complex_covector_to_real(l2)
    re1 = [series_map_coeffs(s, lambda c: c.real) for s in r1]
    im1 = [series_map_coeffs(s, lambda c: c.imag) for s in r1]
    re2 = [series_map_coeffs(s, lambda c: c.real) for s in r2]
    im2 = [series_map_coeffs(s, lambda c: c.imag) for s in r2]
    sign = 1.0 if p.branch == "euclidean" else -1.0
    d2 = p.delta ** 2
    rows = []
    for i in range(4):
        row = []
        for j in range(4):
            if j < i:
                row.append(rows[j][i])
                continue
            quad = (series_mul(re1[i], re1[j]) + series_mul(im1[i], im1[j])
                    + series_scale(series_mul(re2[i], re2[j])
                                   + series_mul(im2[i], im2[j]), sign * d2))
            row.append(series_mul(pref, quad))
        rows.append(row)
    return rows, det.constant_term


def metric_jet(spec, point, p: HeavenlyParams, degree: int = 2) -> MetricJet:
    """MetricJet of a real-branch solution about a real-slice point.

    The orientation is read off the tetrad volume form
    beta gamma Delta dz1^dz2^dz3^dz4 = -4 beta gamma Delta dx1^dy1^dx2^dy2.
    """
    rows, delta0 = _real_metric_series_with_delta(spec, point, p, degree)
    z1, z2 = point.coords[0], point.coords[2]
    base = (z1.real, z1.imag, z2.real, z2.imag)
    orient_val = (-4.0 * p.beta * p.gamma * delta0).real
    orientation = 1.0 if orient_val > 0 else -1.0
    return MetricJet(base, tuple(tuple(r) for r in rows), degree, orientation)


def metric_jet_from_table(point, table) -> MetricJet:
    """MetricJet from an explicit symmetric table of TruncatedSeries (fixtures)."""
    return MetricJet(tuple(point), tuple(tuple(row) for row in table),
                     table[0][0].degree)


def sample_metric_jets(spec, p: HeavenlyParams, n: int, rng, degree: int = 2,
                       min_denominator: float = 0.05, gscale_cap: float = 50.0,
                       relcond_floor: float = 1e-6, max_tries: int = 400):
    """Sample well-conditioned metric jets of a real-branch solution.

    On top of the solution sampler's admissibility, points are rejected when
    the metric scale or determinant conditioning would push curvature noise
    beyond what double precision can certify (the identities hold everywhere,
    but near-degenerate strata cannot be *verified* at the stated tolerances).
    """
    from .errors import SamplingExhaustedError
    from .solutions import sample_jets

    out = []
    stats = {"metric_singular": 0, "metric_scale": 0, "metric_cond": 0}
    for _ in range(max_tries):
        if len(out) >= n:
            break
        pairs, _ = sample_jets(spec, 1, 2, rng, min_denominator=min_denominator)
        point, _jet = pairs[0]
        try:
            mj = metric_jet(spec, point, p, degree)
        except SingularMetricError:
            stats["metric_singular"] += 1
            continue
        g0 = mj.values()
        scale = np.abs(g0).max()
        if scale > gscale_cap:
            stats["metric_scale"] += 1
            continue
        if abs(np.linalg.det(g0)) < relcond_floor * scale ** 4:
            stats["metric_cond"] += 1
            continue
        out.append((point, mj))
    if len(out) < n:
        raise SamplingExhaustedError(n, len(out), stats)
    return out, stats


def permute_axes(mj: MetricJet, perm) -> MetricJet:
    """Relabel real coordinates (used for orientation-flip checks).

    The declared orientation field is kept, so an odd permutation flips the
    effective orientation and with it the vanishing Weyl half's label.
    """
    perm = tuple(perm)
    pt = tuple(mj.point[perm[k]] for k in range(4))
    g = tuple(tuple(series_permute(mj.g[perm[i]][perm[j]], perm) for j in range(4))
              for i in range(4))
    return MetricJet(pt, g, mj.degree, mj.orientation)


def _levi_civita():
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        sign = 1
        p = list(perm)
        for i in range(4):
            for j in range(i + 1, 4):
                if p[i] > p[j]:
                    sign = -sign
        eps[perm] = sign
    return eps


_EPS4 = _levi_civita()


@dataclass(frozen=True)
class CurvatureReport:
    christoffel: np.ndarray      # Gamma[rho, mu, nu]
    riemann: np.ndarray          # lowered R[rho, sigma, mu, nu]
    ricci: np.ndarray
    scalar: float
    weyl_sd_norm: float
    weyl_asd_norm: float
    eigen_signs: tuple
    symmetry_residuals: dict
    max_riemann: float
    max_ricci: float

    @property
    def ricci_ratio(self) -> float:
        return self.max_ricci / max(self.max_riemann, SCALE_FLOOR)


def curvature(mj: MetricJet, symmetry_tol: float = SYMMETRY_TOL) -> CurvatureReport:
    """Full curvature data; raises if the Riemann index symmetries are violated."""
    g0, dg, ddg = mj.derivative_arrays()
    ginv = np.linalg.inv(g0)
    # Gamma^rho_{mu nu}
    gamma = 0.5 * np.einsum("rs,msn->rmn", ginv, dg + np.transpose(dg, (2, 1, 0))
                            - np.transpose(dg, (1, 0, 2)))
    # d_k Gamma^rho_{mu nu}
    dginv = -np.einsum("ra,kab,bs->krs", ginv, dg, ginv)
    sym_ddg = (ddg + np.transpose(ddg, (0, 3, 2, 1))
               - np.transpose(ddg, (0, 2, 1, 3)))
    dgamma = 0.5 * (np.einsum("krs,msn->krmn", dginv,
                              dg + np.transpose(dg, (2, 1, 0))
                              - np.transpose(dg, (1, 0, 2)))
                    + np.einsum("rs,kmsn->krmn", ginv, sym_ddg))
    # R^rho_{sigma mu nu} = d_mu Gamma^rho_{nu sigma} - d_nu Gamma^rho_{mu sigma}
    #                       + Gamma^rho_{mu lam} Gamma^lam_{nu sigma} - (mu <-> nu)
    # (transpose axes: result axis i is dgamma axis axes[i])
    riem_up = (np.transpose(dgamma, (1, 3, 0, 2)) - np.transpose(dgamma, (1, 3, 2, 0))
               + np.einsum("rml,lns->rsmn", gamma, gamma)
               - np.einsum("rnl,lms->rsmn", gamma, gamma))
    riem = np.einsum("ra,asmn->rsmn", g0, riem_up)
    ricci = np.einsum("msmn->sn", riem_up)
    scalar = float(np.einsum("sn,sn->", ginv, ricci))

    max_r = float(np.abs(riem).max())
    scale = max(max_r, SCALE_FLOOR)
    residuals = {
        "antisym_first_pair": float(np.abs(riem + np.transpose(riem, (1, 0, 2, 3))).max()) / scale,
        "antisym_second_pair": float(np.abs(riem + np.transpose(riem, (0, 1, 3, 2))).max()) / scale,
        "pair_symmetry": float(np.abs(riem - np.transpose(riem, (2, 3, 0, 1))).max()) / scale,
        "first_bianchi": float(np.abs(riem + np.transpose(riem, (0, 2, 3, 1))
                                      + np.transpose(riem, (0, 3, 1, 2))).max()) / scale,
    }
    worst = max(residuals.values())
    if max_r > 1e-10 and worst > symmetry_tol:
        raise ContractViolationError(
            f"Riemann symmetry residual {worst:.3e} exceeds {symmetry_tol}")

    # Weyl tensor in four dimensions
    weyl = (riem
            - 0.5 * (np.einsum("ac,bd->abcd", g0, ricci)
                     - np.einsum("ad,bc->abcd", g0, ricci)
                     - np.einsum("bc,ad->abcd", g0, ricci)
                     + np.einsum("bd,ac->abcd", g0, ricci))
            + (scalar / 6.0) * (np.einsum("ac,bd->abcd", g0, g0)
                                - np.einsum("ad,bc->abcd", g0, g0)))
    detg = np.linalg.det(g0)
    eps = mj.orientation * np.sqrt(abs(detg)) * _EPS4
    star = 0.5 * np.einsum("abij,ie,jf,efcd->abcd", eps, ginv, ginv, weyl)
    sd = 0.5 * (weyl + star)
    asd = 0.5 * (weyl - star)

    eigvals = np.linalg.eigvalsh(g0)
    signs = tuple(1 if v > 0 else -1 for v in sorted(eigvals))
    return CurvatureReport(
        christoffel=gamma,
        riemann=riem,
        ricci=ricci,
        scalar=scalar,
        weyl_sd_norm=float(np.sqrt((sd ** 2).sum())),
        weyl_asd_norm=float(np.sqrt((asd ** 2).sum())),
        eigen_signs=signs,
        symmetry_residuals=residuals,
        max_riemann=max_r,
        max_ricci=float(np.abs(ricci).max()),
    )


def asd_check(report: CurvatureReport, ratio_tol: float = 1e-6,
              flat_tol: float = 1e-12):
    """Which Weyl half vanishes: 'sd', 'asd', 'flat' or 'both', plus the ratio."""
    wsd, wasd = report.weyl_sd_norm, report.weyl_asd_norm
    if report.max_riemann <= flat_tol:
        return "flat", 0.0
    if max(wsd, wasd) <= flat_tol * max(report.max_riemann, 1.0):
        return "both", 0.0
    if wsd <= ratio_tol * wasd:
        return "sd", wsd / wasd
    if wasd <= ratio_tol * wsd:
        return "asd", wasd / wsd
    return "neither", min(wsd, wasd) / max(wsd, wasd, SCALE_FLOOR)


def killing_residual(mj: MetricJet, xi) -> float:
    """Max component of the Lie derivative of g along xi, relative to
    max|g| * max|xi|.

    `xi` is a 4-tuple of degree>=1 TruncatedSeries for the vector components.
    """
    g0, dg, _ = mj.derivative_arrays()
    xi0 = np.zeros(4)
    dxi = np.zeros((4, 4))  # dxi[mu, lam] = d_mu xi^lam
    for lam in range(4):
        jet = jet_of(xi[lam], 1)
        val = jet.value
        if abs(val.imag) > 1e-10 * (1.0 + abs(val)):
            raise ContractViolationError(
                f"Killing vector component {lam} is not real at the point ({val})")
        xi0[lam] = val.real
        for mu in range(4):
            dxi[mu, lam] = jet.d(mu + 1).real
    lie = (np.einsum("l,lmn->mn", xi0, dg)
           + np.einsum("ln,ml->mn", g0, dxi)
           + np.einsum("ml,nl->mn", g0, dxi))
    scale = max(np.abs(g0).max() * np.abs(xi0).max(), SCALE_FLOOR)
    return float(np.abs(lie).max() / scale)
