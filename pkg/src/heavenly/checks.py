"""Named verification checks aggregated by the CLI commands and acceptance run.

Every check returns a CheckResult whose pass flag is equivalent to
max_relative_residual <= tolerance, so reports are self-describing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .curvature import asd_check, curvature, killing_residual, sample_metric_jets
from .errors import HeavenlyError, RealityViolationError
from .exactpoly import (QQi, build_P, format_nonzero_terms, heavenly_oracle_Q,
                        is_zero)
from .jets import Point4, multi_indices
from .pde import (SCALE_FLOOR, HeavenlyParams, constraint_difcon,
                  integrability_residuals, lagrangian_density, real_residual,
                  residual_phi)
from .solutions import (CustomPolynomial, RealAnsatz, make_series,
                        nondegeneracy_check, real_R_for_branch, sample_jets,
                        sol1_coefficients, sol2_coefficients)
from .symmetry import invariance_matrix, kernel_rank, killing_vectors

DEFAULT_TOLERANCES = {
    "pde_residual": 1e-10,
    "duality": 1e-12,
    "volume": 1e-10,
    "metric_equality": 1e-10,
    "lax_onshell": 1e-10,
    "lax_offshell": 1e-10,
    "spinor_commutators": 1e-10,
    "ricci_ratio": 1e-6,
    "riemann_symmetry": 1e-9,
    "weyl_half_ratio": 1e-6,
    "signature": 0.0,
    "weyl_half_consistent": 0.0,
    "killing": 1e-8,
    "rank": 1e-10,
    "determinant": 1e-10,
    "oracle": 0.0,
    "lagrangian": 1e-10,
    "difcon": 1e-10,
    "theorem2_composed": 1e-9,
    "integrability": 1e-8,
}

LAX_LAMBDAS = (0.5, 1 + 1j, -2.0)


@dataclass
class CheckResult:
    name: str
    n_points: int
    max_relative_residual: float
    tolerance: float
    passed: bool = field(default=None)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.passed is None:
            self.passed = self.max_relative_residual <= self.tolerance

    def as_record(self):
        rec = {
            "name": self.name,
            "n_points": self.n_points,
            "max_relative_residual": self.max_relative_residual,
            "tolerance": self.tolerance,
            "pass": bool(self.passed),
        }
        if self.extra:
            rec["extra"] = self.extra
        return rec


def _tol(tolerances, name):
    if tolerances and name in tolerances:
        return float(tolerances[name])
    return DEFAULT_TOLERANCES[name]


def check_pde_residual(spec, p, samples, tolerances=None) -> CheckResult:
    """Heavenly residual (complex) or branch real-form residual on samples."""
    tol = _tol(tolerances, "pde_residual")
    worst = 0.0
    for _pt, jet in samples:
        r = real_residual(jet, p) if p.branch else residual_phi(jet, p)
        worst = max(worst, r.relative)
    return CheckResult("pde_residual", len(samples), worst, tol)


def check_duality(p, samples, tolerances=None) -> CheckResult:
    tol = _tol(tolerances, "duality")
    worst = 0.0
    eye = np.eye(4)
    for _pt, jet in samples:
        fr = geometry.null_tetrad(jet, p)
        co = geometry.coframe(jet, p)
        worst = max(worst, float(np.abs(geometry.duality_matrix(co, fr) - eye).max()))
    return CheckResult("duality", len(samples), worst, tol)


def check_volume(p, samples, tolerances=None) -> CheckResult:
    tol = _tol(tolerances, "volume")
    worst = 0.0
    for _pt, jet in samples:
        fr = geometry.null_tetrad(jet, p)
        worst = max(worst, abs(geometry.volume_normalization(jet, fr, p)))
    return CheckResult("volume", len(samples), worst, tol)


def check_metric_equality(p, samples, tolerances=None) -> CheckResult:
    """2(w2 w4 - w1 w3) against the displayed metric, on solutions."""
    tol = _tol(tolerances, "metric_equality")
    worst = 0.0
    for _pt, jet in samples:
        g1 = geometry.metric_explicit(jet, p).g
        g2 = geometry.metric_from_coframe(geometry.coframe(jet, p)).g
        scale = max(np.abs(g1).max(), np.abs(g2).max(), SCALE_FLOOR)
        worst = max(worst, float(np.abs(g1 - g2).max() / scale))
    return CheckResult("metric_equality", len(samples), worst, tol)


def check_lax_onshell(p, samples3, tolerances=None, lambdas=LAX_LAMBDAS) -> CheckResult:
    tol = _tol(tolerances, "lax_onshell")
    worst = 0.0
    for _pt, jet in samples3:
        for lam in lambdas:
            coeffs, _expected, scale = geometry.lax_commutator(jet, lam, p)
            worst = max(worst, float(np.abs(coeffs).max() / max(scale, SCALE_FLOOR)))
    return CheckResult("lax_onshell", len(samples3), worst, tol,
                       extra={"lambdas": [complex(l) for l in lambdas]})


def _random_offshell_jet(rng, order=3):
    """Jet of a random sparse quartic (generically not a solution)."""
    from .solutions import make_jets
    idxs = [i for i in multi_indices(4) if sum(i) >= 1]
    while True:
        chosen = rng.choice(len(idxs), size=12, replace=False)
        monos = tuple((idxs[i], complex(rng.standard_normal(), rng.standard_normal()))
                      for i in chosen)
        poly = CustomPolynomial(monos, power=1.0)
        pt = Point4(tuple(rng.standard_normal(4) + 1j * rng.standard_normal(4)))
        jet = make_jets(poly, pt, order)
        if abs(jet.d(3, 4)) > 0.1:
            return jet


def check_lax_offshell(p, n, rng, tolerances=None) -> CheckResult:
    """Computed commutator against the closed form on random non-solutions."""
    tol = _tol(tolerances, "lax_offshell")
    worst = 0.0
    nonzero = 0
    for _ in range(n):
        jet = _random_offshell_jet(rng)
        lam = complex(rng.standard_normal(), rng.standard_normal())
        coeffs, expected, _scale = geometry.lax_commutator(jet, lam, p)
        worst = max(worst, geometry.relative_vector_residual(coeffs, expected))
        if np.abs(coeffs).max() > 1e-8:
            nonzero += 1
    return CheckResult("lax_offshell", n, worst, tol,
                       extra={"nonzero_commutators": nonzero})


def check_spinor_commutators(p, samples3, tolerances=None) -> CheckResult:
    tol = _tol(tolerances, "spinor_commutators")
    worst = 0.0
    for _pt, jet in samples3:
        frame = geometry.spinor_frame(jet, p)
        for vec, scale in geometry.spinor_commutator_residuals(frame):
            worst = max(worst, float(np.abs(vec).max() / max(scale, SCALE_FLOOR)))
    return CheckResult("spinor_commutators", len(samples3), worst, tol)


def verify_suite(spec, p, n_points, rng, tolerances=None):
    """The full identity suite: residuals, duality, volume, metric equality,
    Lax on/off-shell, spinor-frame commutators."""
    samples2, _ = sample_jets(spec, n_points, 2, rng)
    samples3, _ = sample_jets(spec, min(n_points, 40), 3, rng)
    return [
        check_pde_residual(spec, p, samples2, tolerances),
        check_duality(p, samples2, tolerances),
        check_volume(p, samples2, tolerances),
        check_metric_equality(p, samples2, tolerances),
        check_lax_onshell(p, samples3, tolerances),
        check_lax_offshell(p, 50, rng, tolerances),
        check_spinor_commutators(p, samples3, tolerances),
    ]


def curvature_suite(spec, p, n_points, rng, tolerances=None):
    """Ricci flatness, Riemann symmetries, signature and the Weyl split."""
    pairs, _ = sample_metric_jets(spec, p, n_points, rng)
    reports = [curvature(mj, symmetry_tol=1.0) for _pt, mj in pairs]
    worst_ricci = max(r.ricci_ratio for r in reports)
    worst_sym = max(max(r.symmetry_residuals.values()) for r in reports)
    expected_signs = (1, 1, 1, 1) if p.branch == "euclidean" else (-1, -1, 1, 1)
    sign_miss = sum(1 for r in reports if r.eigen_signs != expected_signs)
    halves = [asd_check(r) for r in reports]
    labels = [h[0] for h in halves]
    nonflat = [h for h in halves if h[0] != "flat"]
    ratio = max((h[1] for h in nonflat), default=0.0)
    label_set = sorted(set(l for l in labels if l != "flat"))
    inconsistent = 0 if len(label_set) <= 1 else 1
    bad_half = sum(1 for l in labels if l == "neither")
    return [
        CheckResult("ricci_ratio", n_points, worst_ricci, _tol(tolerances, "ricci_ratio")),
        CheckResult("riemann_symmetry", n_points, worst_sym,
                    _tol(tolerances, "riemann_symmetry")),
        CheckResult("signature", n_points, float(sign_miss), _tol(tolerances, "signature"),
                    extra={"expected": list(expected_signs)}),
        CheckResult("weyl_half_ratio", n_points, ratio, _tol(tolerances, "weyl_half_ratio"),
                    extra={"labels": label_set}),
        CheckResult("weyl_half_consistent", n_points, float(inconsistent + bad_half),
                    _tol(tolerances, "weyl_half_consistent")),
    ]


def symmetry_suite(spec, p, n_points, rng, tolerances=None):
    """Invariance-system determinant/rank and Killing residuals for `spec`."""
    if not isinstance(spec, RealAnsatz):
        raise HeavenlyError("symmetry checks need a genersol (RealAnsatz) spec")
    sys = invariance_matrix(spec)
    svals = np.linalg.svd(sys.M, compute_uv=False)
    smax = max(svals[0], SCALE_FLOOR)
    det_rel = abs(np.linalg.det(sys.M)) / smax ** 4
    rank, basis = kernel_rank(sys)
    rank_resid = float(svals[2] / smax) if rank == 2 else 1.0
    pairs, _ = sample_metric_jets(spec, p, n_points, rng)
    worst_killing = 0.0
    for pt, mj in pairs:
        for vec in basis:
            xi = killing_vectors(spec, vec, pt)
            worst_killing = max(worst_killing, killing_residual(mj, xi))
    return [
        CheckResult("determinant", 1, det_rel, _tol(tolerances, "determinant")),
        CheckResult("rank", 1, rank_resid, _tol(tolerances, "rank"),
                    extra={"rank": rank, "sigma_ratio_2": float(svals[1] / smax)}),
        CheckResult("killing", n_points, worst_killing, _tol(tolerances, "killing"),
                    extra={"kernel_dim": len(basis)}),
    ]


def random_real_ansatz(rng, m=3, delta_range=(1.2, 3.0), max_tries=10_000) -> RealAnsatz:
    """A random RealAnsatz satisfying reality and nondegeneracy conditions."""
    for _ in range(max_tries):
        A, B, F = (float(rng.uniform(0.3, 2.0)) * float(s)
                   for s in rng.choice([-1.0, 1.0], 3))
        delta = float(rng.uniform(*delta_range))
        E = float(rng.uniform(0.3, 2.0)) * float(rng.choice([-1.0, 1.0]))
        C = float(rng.uniform(0.5, 2.0))
        rad = (delta ** 2 - 1) * A * B + delta ** 2 * F ** 2
        if rad < 0.05:
            continue
        try:
            spec = RealAnsatz(m=m, A=A, B=B, E=E, F=F, delta=delta, C=C)
        except HeavenlyError:
            continue
        if not nondegeneracy_check(spec):
            continue
        return spec
    raise HeavenlyError("could not draw a valid RealAnsatz")


def oracle_suite(family, exact_params, param_p, m_values, perturb=True,
                 tolerances=None):
    """Exact zero-polynomial oracle for sol1/sol2 coefficient outputs.

    `exact_params` maps names to QQi; `param_p` is (alpha, beta, gamma) as QQi.
    Returns one CheckResult; extra carries per-m outcomes and perturbation
    reports.
    """
    alpha, beta, gamma = param_p
    if family == "sol1":
        free = [exact_params[k] for k in ("a4", "a5", "a6", "a8", "a9", "a10")]
        a1, a2, a3, a7 = sol1_coefficients(*free, alpha, beta, gamma)
        coeffs = [a1, a2, a3, free[0], free[1], free[2], a7, free[3], free[4], free[5]]
        derived = {"a1": 0, "a2": 1, "a3": 2, "a7": 6}
    elif family == "sol2":
        free = [exact_params[k] for k in ("a4", "a5", "a7", "a8", "a9")]
        a1, a2, a3, a6, a10 = sol2_coefficients(*free, alpha, beta, gamma)
        coeffs = [a1, a2, a3, free[0], free[1], a6, free[2], free[3], free[4], a10]
        derived = {"a1": 0, "a2": 1, "a3": 2, "a6": 5, "a10": 9}
    else:
        raise HeavenlyError(f"oracle needs a sol1/sol2 family, got {family!r}")
    per_m = {}
    failures = 0
    for m in m_values:
        q = heavenly_oracle_Q(build_P(m, coeffs), m, alpha, beta, gamma)
        ok = is_zero(q)
        per_m[str(m)] = {"zero": ok}
        if not ok:
            per_m[str(m)]["nonzero_terms"] = format_nonzero_terms(q)
            failures += 1
    perturbed = {}
    if perturb:
        m0 = min(m_values)
        for name, idx in derived.items():
            mod = list(coeffs)
            mod[idx] = mod[idx] + QQi(1)
            q = heavenly_oracle_Q(build_P(m0, mod), m0, alpha, beta, gamma)
            broke = not is_zero(q)
            perturbed[name] = broke
            if not broke:
                failures += 1
    return CheckResult("oracle", len(m_values), float(failures),
                       _tol(tolerances, "oracle"),
                       extra={"per_m": per_m, "perturbation_breaks": perturbed,
                              "derived": {k: repr(coeffs[i]) for k, i in derived.items()}})


def theorem2_suite(spec_poly, p, n_points, rng, tolerances=None):
    """Functionally-invariant construction: the defining polynomial satisfies
    the equation, the differential constraint, zero Lagrangian density, the
    third-order integrability conditions, and h(P) = P^3 + P solves the
    equation."""
    poly = CustomPolynomial(tuple(spec_poly.monomials()), power=1.0)
    samples, _ = sample_jets(poly, n_points, 3, rng)
    worst = {"phi": 0.0, "difcon": 0.0, "lagrangian": 0.0, "composed": 0.0,
             "integrability": 0.0}
    from .jets import jet_of
    for pt, jet in samples:
        worst["phi"] = max(worst["phi"], residual_phi(jet, p).relative)
        worst["difcon"] = max(worst["difcon"], constraint_difcon(jet, p).relative)
        worst["lagrangian"] = max(worst["lagrangian"],
                                  lagrangian_density(jet, p).relative)
        r1, r2, det = integrability_residuals(jet)
        worst["integrability"] = max(worst["integrability"], r1.relative,
                                     r2.relative, det.relative)
        pser = make_series(poly, pt, 2)
        composed = pser * pser * pser + pser
        worst["composed"] = max(worst["composed"],
                                residual_phi(jet_of(composed, 2), p).relative)
    return [
        CheckResult("theorem2_phi", n_points, worst["phi"], _tol(tolerances, "difcon")),
        CheckResult("theorem2_difcon", n_points, worst["difcon"],
                    _tol(tolerances, "difcon")),
        CheckResult("lagrangian", n_points, worst["lagrangian"],
                    _tol(tolerances, "lagrangian")),
        CheckResult("theorem2_composed", n_points, worst["composed"],
                    _tol(tolerances, "theorem2_composed")),
        CheckResult("integrability", n_points, worst["integrability"],
                    _tol(tolerances, "integrability")),
    ]


def euclidean_reality_scan(n_samples, rng):
    """Sample the euclidean branch's reality bound with the branch-consistent
    radicand; returns (valid_R_count, satisfiable_count, margins).

    The satisfiable count is expected to be zero: with R^2 read off the same
    coefficient relation that produces the neutral form, the bound
    |B(R^2+F^2+AB) - 4AE^2| <= 4|EF|R fails strictly whenever beta/gamma > 0.
    """
    valid = 0
    satisfiable = 0
    margins = []
    for _ in range(n_samples):
        A, B, F = (float(rng.uniform(0.3, 2.0)) * float(s)
                   for s in rng.choice([-1.0, 1.0], 3))
        E = float(rng.uniform(0.3, 2.0)) * float(rng.choice([-1.0, 1.0]))
        delta = float(rng.uniform(1.2, 3.0))
        p = HeavenlyParams.euclidean(1.0, delta)
        try:
            R = real_R_for_branch(A, B, F, p)
        except RealityViolationError:
            continue
        if R < 1e-9:
            continue
        valid += 1
        num = abs(B * (R ** 2 + F ** 2 + A * B) - 4 * A * E ** 2)
        den = 4 * abs(E * F) * R
        margins.append(num - den)
        if num <= den:
            satisfiable += 1
    return valid, satisfiable, margins
