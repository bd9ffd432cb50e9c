"""Lax operators, spinor frame, null tetrad, coframe and metrics built from jets.

Branch handling: all square roots are taken once per evaluation point as the
three factors sqrt(beta), sqrt(gamma), sqrt(u34*Delta) (principal branch) and
every tetrad/coframe prefactor is assembled from those shared factors.  This
makes the bi-orthogonality and normalization identities exact algebraically;
naive per-formula radicals can pick up point-dependent signs for complex
parameters.

Sign convention: the displayed coframe 1-forms pair with the displayed tetrad
to -identity; this module returns the negated coframe so that
omega^i(e_j) = +delta^i_j holds, leaving the (quadratic) metric unchanged.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, DenominatorError
from .jets import JetView
from .pde import SCALE_FLOOR, HeavenlyParams, delta_det, residual_phi

REAL_COORD_LABELS = ("x1", "y1", "x2", "y2")


@dataclass(frozen=True)
class FirstOrderOperator:
    """c^1 d_1 + c^2 d_2 + c^3 d_3 + c^4 d_4 with optional coefficient gradients.

    grad[k, i] is the derivative of coefficient k with respect to variable i;
    it is required for commutators and present when built from order-3 jets.
    """

    coeffs: np.ndarray
    lam: complex | None = None
    grad: np.ndarray | None = None

    def at_lambda(self):
        return self.coeffs


def operator_commutator(A: FirstOrderOperator, B: FirstOrderOperator):
    """[A, B]^k = sum_i A^i d_i B^k - B^i d_i A^k, plus the largest term scale."""
    if A.grad is None or B.grad is None:
        raise ContractViolationError(
            "commutator needs coefficient gradients (build operators from order-3 jets)")
    terms_a = A.coeffs[np.newaxis, :] * B.grad          # [k,i] = A^i dB^k/dz^i
    terms_b = B.coeffs[np.newaxis, :] * A.grad
    coeffs = (terms_a - terms_b).sum(axis=1)
    scale = float(max(np.abs(terms_a).max(), np.abs(terms_b).max()))
    return coeffs, scale


def relative_vector_residual(got, expected=None):
    """max component mismatch relative to the larger vector's max component."""
    got = np.asarray(got)
    if expected is None:
        expected = np.zeros_like(got)
    expected = np.asarray(expected)
    scale = max(np.abs(got).max(), np.abs(expected).max(), SCALE_FLOOR)
    return float(np.abs(got - expected).max() / scale)


def _d(jet, *axes):
    return jet.d(*axes)


def _require_u34(jet):
    u34 = jet.d(3, 4)
    if u34 == 0:
        raise DenominatorError("u34")
    return u34


def _ratio_grad(jet, num_axes, den_axes):
    """Gradient of u_num/u_den over the four variables (needs order-3 jets)."""
    num = jet.d(*num_axes)
    den = jet.d(*den_axes)
    out = np.empty(4, dtype=complex)
    for i in range(1, 5):
        out[i - 1] = (jet.d(*num_axes, i) * den - num * jet.d(*den_axes, i)) / den ** 2
    return out


def lax_pair(jet: JetView, lam, p: HeavenlyParams):
    """The pair L0, M0 that commutes exactly on solutions.

    L0 = (1 + gamma lam) d1 - gamma lam (u14/u34) d3 - (u13/u34) d4
    M0 = (beta lam - 1) d2 - beta lam (u24/u34) d3 + (u23/u34) d4
    """
    u34 = _require_u34(jet)
    lam = complex(lam)
    lc = np.array([1 + p.gamma * lam, 0.0,
                   -p.gamma * lam * jet.d(1, 4) / u34,
                   -jet.d(1, 3) / u34])
    mc = np.array([0.0, p.beta * lam - 1,
                   -p.beta * lam * jet.d(2, 4) / u34,
                   jet.d(2, 3) / u34])
    lgrad = mgrad = None
    if jet.order >= 3:
        lgrad = np.zeros((4, 4), dtype=complex)
        lgrad[2] = -p.gamma * lam * _ratio_grad(jet, (1, 4), (3, 4))
        lgrad[3] = -_ratio_grad(jet, (1, 3), (3, 4))
        mgrad = np.zeros((4, 4), dtype=complex)
        mgrad[2] = -p.beta * lam * _ratio_grad(jet, (2, 4), (3, 4))
        mgrad[3] = _ratio_grad(jet, (2, 3), (3, 4))
    return (FirstOrderOperator(lc, lam, lgrad),
            FirstOrderOperator(mc, lam, mgrad))


def lax_commutator_expected(jet: JetView, lam, p: HeavenlyParams):
    """Closed form of [L0, M0]: (lam/u34^2) {(Phi_4 - u344/u34 Phi) d3
    - (Phi_3 - u334/u34 Phi) d4}; valid off-shell."""
    if jet.order < 3:
        raise ContractViolationError("order-3 jets required")
    u34 = _require_u34(jet)
    lam = complex(lam)
    phi = residual_phi(jet, p).value
    a, b, g = p.alpha, p.beta, p.gamma
    phi3 = (a * (jet.d(1, 2, 3) * u34 + jet.d(1, 2) * jet.d(3, 3, 4))
            + b * (jet.d(1, 3, 3) * jet.d(2, 4) + jet.d(1, 3) * jet.d(2, 3, 4))
            + g * (jet.d(1, 3, 4) * jet.d(2, 3) + jet.d(1, 4) * jet.d(2, 3, 3)))
    phi4 = (a * (jet.d(1, 2, 4) * u34 + jet.d(1, 2) * jet.d(3, 4, 4))
            + b * (jet.d(1, 3, 4) * jet.d(2, 4) + jet.d(1, 3) * jet.d(2, 4, 4))
            + g * (jet.d(1, 4, 4) * jet.d(2, 3) + jet.d(1, 4) * jet.d(2, 3, 4)))
    pref = lam / u34 ** 2
    return np.array([0.0, 0.0,
                     pref * (phi4 - jet.d(3, 4, 4) / u34 * phi),
                     -pref * (phi3 - jet.d(3, 3, 4) / u34 * phi)])


def lax_commutator(jet: JetView, lam, p: HeavenlyParams):
    """Computed commutator coefficients, the closed form, and the term scale."""
    L0, M0 = lax_pair(jet, lam, p)
    coeffs, scale = operator_commutator(L0, M0)
    return coeffs, lax_commutator_expected(jet, lam, p), scale


@dataclass(frozen=True)
class SpinorFrame:
    e00: FirstOrderOperator
    e10: FirstOrderOperator
    e01: FirstOrderOperator
    e11: FirstOrderOperator

    def lax_at(self, lam):
        """L0 = e00 - lam e01 and M0 = e10 - lam e11 as coefficient vectors."""
        lam = complex(lam)
        return (self.e00.coeffs - lam * self.e01.coeffs,
                self.e10.coeffs - lam * self.e11.coeffs)


def spinor_frame(jet: JetView, p: HeavenlyParams) -> SpinorFrame:
    """The lambda-linear frame: e00 = d1 - (u13/u34) d4, e10 = -d2 + (u23/u34) d4,
    e01 = -gamma (d1 - (u14/u34) d3), e11 = -beta (d2 - (u24/u34) d3)."""
    u34 = _require_u34(jet)
    with_grad = jet.order >= 3

    def op(coeffs, grad_rows):
        grad = None
        if with_grad:
            grad = np.zeros((4, 4), dtype=complex)
            for row, vec in grad_rows:
                grad[row] = vec
        return FirstOrderOperator(np.array(coeffs, dtype=complex), None, grad)

    e00 = op([1.0, 0.0, 0.0, -jet.d(1, 3) / u34],
             [(3, -_ratio_grad(jet, (1, 3), (3, 4)))] if with_grad else [])
    e10 = op([0.0, -1.0, 0.0, jet.d(2, 3) / u34],
             [(3, _ratio_grad(jet, (2, 3), (3, 4)))] if with_grad else [])
    e01 = op([-p.gamma, 0.0, p.gamma * jet.d(1, 4) / u34, 0.0],
             [(2, p.gamma * _ratio_grad(jet, (1, 4), (3, 4)))] if with_grad else [])
    e11 = op([0.0, -p.beta, p.beta * jet.d(2, 4) / u34, 0.0],
             [(2, p.beta * _ratio_grad(jet, (2, 4), (3, 4)))] if with_grad else [])
    return SpinorFrame(e00, e10, e01, e11)


def spinor_commutator_residuals(frame: SpinorFrame):
    """The three lambda-split commutator conditions, as (vector, scale) pairs:
    [e00,e10], [e00,e11] + [e01,e10], [e01,e11]."""
    c1, s1 = operator_commutator(frame.e00, frame.e10)
    ca, sa = operator_commutator(frame.e00, frame.e11)
    cb, sb = operator_commutator(frame.e01, frame.e10)
    c3, s3 = operator_commutator(frame.e01, frame.e11)
    return [(c1, s1), (ca + cb, max(sa, sb)), (c3, max(s3, SCALE_FLOOR))]


@dataclass(frozen=True)
class FrameAtPoint:
    """Null tetrad vectors, the conformal factor and its shared radical factors."""

    W: np.ndarray
    Z: np.ndarray
    Wt: np.ndarray
    Zt: np.ndarray
    omega: complex
    s_beta: complex
    s_gamma: complex
    s_ud: complex

    def matrix(self):
        return np.array([self.W, self.Z, self.Wt, self.Zt])


def _tetrad_radicals(jet, p):
    u34 = _require_u34(jet)
    det = delta_det(jet)
    if det == 0:
        raise DenominatorError("Delta")
    if p.beta * p.gamma == 0:
        raise DenominatorError("beta*gamma")
    return u34, det, cmath.sqrt(p.beta), cmath.sqrt(p.gamma), cmath.sqrt(u34 * det)


def null_tetrad(jet: JetView, p: HeavenlyParams) -> FrameAtPoint:
    """Tetrad W, Z, Wt, Zt with Omega = sqrt(beta gamma Delta / u34)."""
    u34, det, sb, sg, sud = _tetrad_radicals(jet, p)
    pref = 1.0 / (sb * sg * sud)
    W = pref * np.array([u34, 0.0, 0.0, -jet.d(1, 3)])
    Z = pref * np.array([0.0, -u34, 0.0, jet.d(2, 3)])
    Wt = (sb / (sg * sud)) * np.array([0.0, -u34, jet.d(2, 4), 0.0])
    Zt = (sg / (sb * sud)) * np.array([-u34, 0.0, jet.d(1, 4), 0.0])
    omega = sb * sg * sud / u34
    return FrameAtPoint(W, Z, Wt, Zt, omega, sb, sg, sud)


@dataclass(frozen=True)
class CoframeAtPoint:
    omega1: np.ndarray
    omega2: np.ndarray
    omega3: np.ndarray
    omega4: np.ndarray

    def matrix(self):
        return np.array([self.omega1, self.omega2, self.omega3, self.omega4])


def coframe(jet: JetView, p: HeavenlyParams) -> CoframeAtPoint:
    """Coframe dual to the tetrad (omega^i(e_j) = delta^i_j, e = (W, Z, Wt, Zt))."""
    u34, det, sb, sg, sud = _tetrad_radicals(jet, p)
    u13, u14 = jet.d(1, 3), jet.d(1, 4)
    u23, u24 = jet.d(2, 3), jet.d(2, 4)
    pref12 = -sb * sg / sud
    w1 = pref12 * np.array([u23 * u14, u23 * u24, u34 * u23, u34 * u24])
    w2 = pref12 * np.array([u13 * u14, u13 * u24, u34 * u13, u34 * u14])
    w3 = (sg / (sb * sud)) * np.array([u14 * u13, u14 * u23, u34 * u13, u34 * u14])
    w4 = (-sb / (sg * sud)) * np.array([u24 * u13, u24 * u23, u34 * u23, u34 * u24])
    return CoframeAtPoint(w1, w2, w3, w4)


def dual_coframe(frame: FrameAtPoint) -> CoframeAtPoint:
    """Coframe obtained by inverting the tetrad matrix (independent dual route)."""
    inv = np.linalg.inv(frame.matrix())
    return CoframeAtPoint(inv[:, 0], inv[:, 1], inv[:, 2], inv[:, 3])


def duality_matrix(co: CoframeAtPoint, frame: FrameAtPoint) -> np.ndarray:
    """omega^i(e_j); equals the identity for a dual pair."""
    return co.matrix() @ frame.matrix().T


def volume_normalization(jet: JetView, frame: FrameAtPoint, p: HeavenlyParams):
    """beta gamma Delta det([W|Z|Wt|Zt]) - 1 under the plain-determinant
    wedge convention (calibrated to vanish exactly on the quadratic fixture)."""
    det = delta_det(jet)
    return p.beta * p.gamma * det * np.linalg.det(frame.matrix()) - 1.0


@dataclass(frozen=True)
class MetricAtPoint:
    g: np.ndarray
    labels: tuple

    def eigenvalue_signs(self):
        vals = np.linalg.eigvalsh(self.g.real if np.iscomplexobj(self.g) else self.g)
        return tuple(1 if v > 0 else -1 for v in sorted(vals))


def metric_explicit(jet: JetView, p: HeavenlyParams) -> MetricAtPoint:
    """The displayed metric with prefactor 2(beta+gamma)/Delta, as g_ij dz^i dz^j."""
    det = delta_det(jet)
    if det == 0:
        raise DenominatorError("Delta")
    u12, u34 = jet.d(1, 2), jet.d(3, 4)
    u13, u14 = jet.d(1, 3), jet.d(1, 4)
    u23, u24 = jet.d(2, 3), jet.d(2, 4)
    pref = 2 * (p.beta + p.gamma) / det
    c = np.zeros((4, 4), dtype=complex)
    c[0, 0] = u12 * u13 * u14
    c[1, 1] = u12 * u23 * u24
    c[2, 2] = u34 * u13 * u23
    c[3, 3] = u34 * u14 * u24
    c[0, 1] = (u13 * u24 + u14 * u23) * u12
    c[2, 3] = (u13 * u24 + u14 * u23) * u34
    c[0, 2] = (u12 * u34 + u14 * u23) * u13
    c[1, 3] = (u12 * u34 + u14 * u23) * u24
    c[1, 2] = (u12 * u34 + u13 * u24) * u23
    c[0, 3] = (u12 * u34 + u13 * u24) * u14
    g = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        g[i, i] = pref * c[i, i]
        for j in range(i + 1, 4):
            g[i, j] = g[j, i] = pref * c[i, j] / 2.0
    return MetricAtPoint(g, ("z1", "z2", "z3", "z4"))


def metric_from_coframe(co: CoframeAtPoint) -> MetricAtPoint:
    """2(omega^2 omega^4 - omega^1 omega^3) as a symmetric matrix."""
    g = (np.outer(co.omega2, co.omega4) + np.outer(co.omega4, co.omega2)
         - np.outer(co.omega1, co.omega3) - np.outer(co.omega3, co.omega1))
    return MetricAtPoint(g, ("z1", "z2", "z3", "z4"))


def l_form_coefficients(d12, d1b2b, d12b, d21b, d22b):
    """Coefficients of the 1-forms l1, l2 over (dz1, dzbar1, dz2, dzbar2).

    Works for scalar second derivatives and for series-valued ones alike.
    """
    l1 = (d12b * d12, d12b * d21b, d22b * d12, d22b * d12b)
    l2 = (d12 * d12b, d12 * d1b2b, d22b * d12, d22b * d12b)
    return l1, l2


def complex_covector_to_real(c):
    """Push (dz1, dzbar1, dz2, dzbar2) components to (x1, y1, x2, y2) via
    dz = dx + i dy."""
    c1, c2, c3, c4 = c
    return (c1 + c2, 1j * (c1 - c2), c3 + c4, 1j * (c3 - c4))


def real_metric(jet: JetView, p: HeavenlyParams) -> MetricAtPoint:
    """Real 4x4 metric in (x1, y1, x2, y2) from the real cross-section forms.

    ds^2 = (2|gamma| / |u22b Delta|) (|l1|^2 +/- delta^2 |l2|^2), + euclidean,
    - neutral.  The jet is indexed over (z1, conj z1, z2, conj z2).
    """
    if p.branch not in ("neutral", "euclidean"):
        raise ContractViolationError("real_metric needs a real branch")
    u22b = jet.d(3, 4)
    if u22b == 0:
        raise DenominatorError("u22bar")
    det = delta_det(jet)
    if det == 0:
        raise DenominatorError("Delta")
    l1, l2 = l_form_coefficients(jet.d(1, 3), jet.d(2, 4), jet.d(1, 4),
                                 jet.d(2, 3), u22b)
    r1 = np.array(complex_covector_to_real(l1))
    r2 = np.array(complex_covector_to_real(l2))
    pref = 2 * abs(p.gamma) / abs(u22b * det)
    sign = 1.0 if p.branch == "euclidean" else -1.0
    d2 = p.delta ** 2

    def quad(v):
        return np.outer(v.real, v.real) + np.outer(v.imag, v.imag)

    g = pref * (quad(r1) + sign * d2 * quad(r2))
    return MetricAtPoint(g, REAL_COORD_LABELS)
