"""Pointwise evaluators for the scalar differential expressions of the model.

Every residual-like quantity is returned together with the magnitude of its
largest constituent term, so callers can report relative residuals that stay
meaningful across wildly different parameter scales.

Real-form index convention (fixed here, used by every real-form consumer):
jet axes 1..4 are (z1, conj z1, z2, conj z2).  In that ordering the complex
equation's derivative pairs map as
    u_12 -> u_{1 1bar},  u_34 -> u_{2 2bar},  u_13 -> u_{12},
    u_24 -> u_{1bar 2bar},  u_14 -> u_{1 2bar},  u_23 -> u_{2 1bar}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import ContractViolationError
from .jets import JetView

SCALE_FLOOR = 1e-300

# real-form axis dictionary: name -> 1-based jet axis
REAL_AXES = {"z1": 1, "z1bar": 2, "z2": 3, "z2bar": 4}


class Residual(NamedTuple):
    """A residual value plus the scale of its largest constituent term."""

    value: complex
    scale: float

    @property
    def relative(self) -> float:
        return abs(self.value) / max(self.scale, SCALE_FLOOR)


@dataclass(frozen=True)
class HeavenlyParams:
    """Equation coefficients with alpha + beta + gamma = 0 and gamma != 0.

    Real branches additionally carry delta > 0 and the signature branch:
    neutral encodes beta = -gamma delta^2, euclidean beta = +gamma delta^2.
    """

    alpha: complex
    beta: complex
    gamma: complex
    delta: float | None = None
    branch: str | None = None

    def __post_init__(self):
        a, b, g = complex(self.alpha), complex(self.beta), complex(self.gamma)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "gamma", g)
        scale = max(abs(a), abs(b), abs(g))
        if scale == 0 or abs(a + b + g) > 1e-14 * scale:
            raise ContractViolationError(
                f"alpha + beta + gamma = {a + b + g} must vanish (relative 1e-14)")
        if g == 0:
            raise ContractViolationError("gamma must be nonzero")
        if self.branch is not None:
            if self.branch not in ("neutral", "euclidean"):
                raise ContractViolationError(f"unknown branch {self.branch!r}")
            if self.delta is None or not self.delta > 0:
                raise ContractViolationError("real branches need delta > 0")

    @classmethod
    def from_coefficients(cls, alpha, beta, gamma):
        return cls(alpha, beta, gamma)

    @classmethod
    def neutral(cls, gamma, delta):
        gamma = complex(gamma)
        beta = -gamma * delta ** 2
        return cls(-beta - gamma, beta, gamma, delta=float(delta), branch="neutral")

    @classmethod
    def euclidean(cls, gamma, delta):
        gamma = complex(gamma)
        beta = gamma * delta ** 2
        return cls(-beta - gamma, beta, gamma, delta=float(delta), branch="euclidean")

    @property
    def rho(self) -> complex:
        """beta/gamma; its sign selects the real signature."""
        return self.beta / self.gamma


def _require_order(jet: JetView, order: int):
    if jet.order < order:
        raise ContractViolationError(
            f"jet of order >= {order} required, got {jet.order}")


def residual_phi(jet: JetView, p: HeavenlyParams) -> Residual:
    """Heavenly residual alpha u12 u34 + beta u13 u24 + gamma u14 u23."""
    _require_order(jet, 2)
    t1 = p.alpha * jet.d(1, 2) * jet.d(3, 4)
    t2 = p.beta * jet.d(1, 3) * jet.d(2, 4)
    t3 = p.gamma * jet.d(1, 4) * jet.d(2, 3)
    return Residual(t1 + t2 + t3, max(abs(t1), abs(t2), abs(t3)))


def delta_det(jet: JetView) -> complex:
    """u13 u24 - u14 u23, the determinant entering every geometric denominator."""
    _require_order(jet, 2)
    return jet.d(1, 3) * jet.d(2, 4) - jet.d(1, 4) * jet.d(2, 3)


def lagrangian_density(jet: JetView, p: HeavenlyParams) -> Residual:
    """First-order Lagrangian whose Euler-Lagrange equation is the heavenly PDE."""
    _require_order(jet, 2)
    u1, u2, u3, u4 = jet.d(1), jet.d(2), jet.d(3), jet.d(4)
    t1 = p.alpha * (u1 * u2 * jet.d(3, 4) + u3 * u4 * jet.d(1, 2))
    t2 = p.beta * (u1 * u3 * jet.d(2, 4) + u2 * u4 * jet.d(1, 3))
    t3 = p.gamma * (u1 * u4 * jet.d(2, 3) + u2 * u3 * jet.d(1, 4))
    return Residual(t1 + t2 + t3, max(abs(t1), abs(t2), abs(t3)))


def constraint_difcon(jet: JetView, p: HeavenlyParams) -> Residual:
    """Differential constraint of the functionally-invariant construction.

    Identical formula to the Lagrangian density, applied to the defining
    polynomial rather than the solution.
    """
    return lagrangian_density(jet, p)


def integrability_ABDE(jet: JetView):
    """The four third-order expressions of the joint-system integrability pair."""
    _require_order(jet, 3)
    d = jet.d
    u2, u3, u4 = d(2), d(3), d(4)
    A = (u4 * (u4 * d(2, 2, 3) - u2 * d(2, 3, 4))
         - u3 * (u4 * d(2, 2, 4) - u2 * d(2, 4, 4))
         + u2 * (d(2, 4) * d(3, 4) - d(2, 3) * d(4, 4)))
    B = (u2 * (u2 * d(3, 4, 4) - u4 * d(2, 3, 4))
         - u3 * (u2 * d(2, 4, 4) - u4 * d(2, 2, 4))
         + u4 * (d(2, 3) * d(2, 4) - d(2, 2) * d(3, 4)))
    D = (2 * u3 * u4 * d(2, 3, 4) - u3 ** 2 * d(2, 4, 4) - u4 ** 2 * d(2, 3, 3)
         + d(2, 3) * (u3 * d(4, 4) - u4 * d(3, 4))
         - d(2, 4) * (u3 * d(3, 4) - u4 * d(3, 3)))
    E = (u3 * (u3 * d(2, 4, 4) - u4 * d(2, 3, 4))
         - u2 * (u3 * d(3, 4, 4) - u4 * d(3, 3, 4))
         + u4 * (d(2, 3) * d(3, 4) - d(2, 4) * d(3, 3)))
    return A, B, D, E


def integrability_residuals(jet: JetView):
    """The two third-order conditions and the 2x2 determinant constraint.

    Returns three Residuals: r1 = A X + B Y, r2 = D X + E Y (with
    X = u2 u34 - u3 u24, Y = u4 u23 - u3 u24) and det = A E - B D.
    """
    _require_order(jet, 3)
    A, B, D, E = integrability_ABDE(jet)
    X = jet.d(2) * jet.d(3, 4) - jet.d(3) * jet.d(2, 4)
    Y = jet.d(4) * jet.d(2, 3) - jet.d(3) * jet.d(2, 4)
    r1 = Residual(A * X + B * Y, max(abs(A * X), abs(B * Y)))
    r2 = Residual(D * X + E * Y, max(abs(D * X), abs(E * Y)))
    det = Residual(A * E - B * D, max(abs(A * E), abs(B * D)))
    return r1, r2, det


def real_residual(jet: JetView, p: HeavenlyParams) -> Residual:
    """Left minus right of the real cross-section equation on the active branch.

    The jet is indexed over (z1, conj z1, z2, conj z2); see REAL_AXES.
    neutral:   (delta^2 - 1) u_{1 1b} u_{2 2b} - delta^2 u_{12} u_{1b 2b} + u_{1 2b} u_{2 1b}
    euclidean: (delta^2 + 1) u_{1 1b} u_{2 2b} - delta^2 u_{12} u_{1b 2b} - u_{1 2b} u_{2 1b}
    """
    _require_order(jet, 2)
    if p.branch not in ("neutral", "euclidean"):
        raise ContractViolationError("real_residual needs a real branch (neutral/euclidean)")
    d2 = p.delta ** 2
    u11b = jet.d(1, 2)
    u22b = jet.d(3, 4)
    u12 = jet.d(1, 3)
    u1b2b = jet.d(2, 4)
    u12b = jet.d(1, 4)
    u21b = jet.d(2, 3)
    if p.branch == "neutral":
        t1 = (d2 - 1) * u11b * u22b
        t2 = -d2 * u12 * u1b2b
        t3 = u12b * u21b
    else:
        t1 = (d2 + 1) * u11b * u22b
        t2 = -d2 * u12 * u1b2b
        t3 = -u12b * u21b
    return Residual(t1 + t2 + t3, max(abs(t1), abs(t2), abs(t3)))
