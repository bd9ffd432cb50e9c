"""Solution families: complex algebraic ansatz, real neutral-signature families,
custom polynomials and quadratic fixtures, plus the admissible-point sampler.

Coefficient derivations are written once over generic field operations, so the
same code runs on floats/complex and on exact rational-complex (QQi) inputs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import (BranchCutError, BranchPointError, ContractViolationError,
                     DenominatorError, PairingViolationError,
                     RealityViolationError, SamplingExhaustedError)
from .exactpoly import QQi
from .jets import (JetView, Point4, TruncatedSeries, jet_of,
                   series_from_monomials, series_pow)
from .pde import HeavenlyParams, delta_det

ANNULUS = (0.3, 1.5)
DEGENERACY_TOL = 1e-6
MAX_TRIES_DEFAULT = 10_000


def _is_exact(*vals):
    return all(isinstance(v, (QQi, int)) or isinstance(v, str) for v in vals)


def _vanishes(x, scale=None):
    if isinstance(x, QQi):
        return x.is_zero()
    mag = abs(complex(x))
    if scale is None:
        return mag == 0.0
    return mag <= 1e-14 * max(abs(scale), 1.0)


def _mag(x):
    return abs(complex(x))


def sol1_coefficients(a4, a5, a6, a8, a9, a10, alpha, beta, gamma):
    """Dependent coefficients (a1, a2, a3, a7) of the seven-parameter family.

    Works elementwise on complex or exact QQi inputs.  Raises DenominatorError
    naming the offending denominator; a6 = 0 is redirected to the sol2 family.
    """
    if _vanishes(gamma):
        raise DenominatorError("gamma")
    if _vanishes(a6):
        err = DenominatorError("a6")
        err.args = ("a6 = 0 is the six-parameter family; use sol2_coefficients",)
        raise err
    a7 = -(alpha * a5 * a8 + beta * a9 * a10) / (gamma * a6)
    den1 = 2 * a4 * a7 - a8 * a10
    if _vanishes(den1, scale=_mag(2 * a4 * a7) + _mag(a8 * a10)):
        raise DenominatorError("2a4a7-a8a10", den1)
    den2 = 2 * a4 * a9 - a6 * a8
    if _vanishes(den2, scale=_mag(2 * a4 * a9) + _mag(a6 * a8)):
        raise DenominatorError("2a4a9-a6a8", den2)
    den3 = a6 * a10 - 2 * a4 * a5
    if _vanishes(den3, scale=_mag(a6 * a10) + _mag(2 * a4 * a5)):
        raise DenominatorError("a6a10-2a4a5", den3)
    a1 = (a6 * (alpha * a9 * a10 + beta * a5 * a8) + 2 * gamma * a4 * a5 * a9) \
        / (2 * gamma * den1)
    a2 = (alpha * a10 * (a5 * a8 - a9 * a10) + gamma * a5 * den1) / (2 * gamma * den2)
    a3 = (beta * a8 * (a5 * a8 - a9 * a10) - gamma * a9 * den1) / (2 * gamma * den3)
    return a1, a2, a3, a7


def sol2_coefficients(a4, a5, a7, a8, a9, alpha, beta, gamma):
    """Dependent coefficients (a1, a2, a3, a6=0, a10) of the six-parameter family."""
    for name, v in (("beta", beta), ("a4", a4), ("a5", a5), ("a9", a9)):
        if _vanishes(v):
            raise DenominatorError(name)
    den = alpha * a5 * a8 * a8 + 2 * beta * a4 * a7 * a9
    if _vanishes(den, scale=_mag(alpha * a5 * a8 * a8) + _mag(2 * beta * a4 * a7 * a9)):
        raise DenominatorError("alpha*a5*a8^2+2*beta*a4*a7*a9", den)
    a1 = beta * a4 * a5 * a9 * a9 / den
    a2 = a5 * (2 * beta * beta * a4 * a7 * a9 - alpha * gamma * a5 * a8 * a8) \
        / (4 * beta * beta * a4 * a9 * a9)
    a3 = (2 * beta * a4 * a7 * a9 - gamma * a5 * a8 * a8) / (4 * beta * a4 * a5)
    a10 = -(alpha * a5 * a8) / (beta * a9)
    a6 = QQi(0) if _is_exact(a4, a5, a7, a8, a9, alpha, beta, gamma) else 0j
    return a1, a2, a3, a6, a10


def real_R(A, B, F, delta):
    """Mixing amplitude R = sqrt((delta^2-1) A B + delta^2 F^2) (neutral branch)."""
    rad = (delta ** 2 - 1) * A * B + delta ** 2 * F ** 2
    if rad < 0:
        raise RealityViolationError(rad, 0, "R radicand negative")
    return math.sqrt(rad)


def real_R_for_branch(A, B, F, p: HeavenlyParams):
    """R from the coefficient relation with general rho = beta/gamma.

    Specializes to real_R on the neutral branch; on the euclidean branch the
    radicand becomes -(delta^2+1) A B - delta^2 F^2.
    """
    rho = p.rho.real
    rad = (-rho - 1) * A * B - rho * F ** 2
    if rad < 0:
        raise RealityViolationError(rad, 0, "R radicand negative")
    return math.sqrt(rad)


def genersol_phase(A, B, E, F, delta, R=None):
    """Phase phi from cos(phi) = [B (R^2 + A B + F^2) - 4 A E^2] / (4 E F R).

    Raises RealityViolationError with both sides of the defining inequality
    when |cos phi| > 1.
    """
    if R is None:
        R = real_R(A, B, F, delta)
    for name, v in (("E", E), ("F", F), ("R", R)):
        if v == 0:
            raise DenominatorError(name)
    num = B * (R ** 2 + A * B + F ** 2) - 4 * A * E ** 2
    den = 4 * E * F * R
    c = num / den
    if abs(c) > 1 + 1e-14:
        raise RealityViolationError(abs(num), abs(4 * E * F) * R,
                                    f"cos(phi) = {c} out of range")
    return math.acos(max(-1.0, min(1.0, c)))


def genersol_a1(A, B, E, F, phi, delta, R=None):
    """Leading holomorphic coefficient of the general real solution."""
    if R is None:
        R = real_R(A, B, F, delta)
    eiph = cmath.exp(1j * phi)
    den = 2 * (B * F / eiph - 2 * E * R)
    if abs(den) == 0:
        raise DenominatorError("2(B F e^{-i phi} - 2 E R)")
    return (2 * A * E * F * eiph - R * (R ** 2 + A * B - F ** 2)) / den


def particular_E(A, B, F, delta, sign=+1):
    """E making the general solution collapse to the particular one at phi = 0."""
    if A == 0:
        raise DenominatorError("A")
    R = real_R(A, B, F, delta)
    return (sign * delta * abs(A * B + F ** 2) - F * R) / (2 * A)


@dataclass(frozen=True)
class ComplexAnsatz:
    """Even-order algebraic ansatz u^(2m) = P over independent complex z1..z4."""

    m: float
    a: tuple  # ten coefficients a1..a10
    C: complex = 0j
    family: str = "complex"
    real_slice: bool = False

    def __post_init__(self):
        if len(self.a) != 10:
            raise ContractViolationError("need ten coefficients a1..a10")
        if self.m == 0:
            raise ContractViolationError("m must be nonzero")
        if all(_mag(c) == 0 for c in self.a):
            raise ContractViolationError("at least one of a1..a10 must be nonzero")

    @property
    def exponent(self):
        return 1.0 / (2.0 * self.m)

    def monomials(self):
        m = self.m
        if float(m).is_integer():
            m = int(m)
        expos = [
            (2 * m, 0, 0, 0), (0, 2 * m, 0, 0), (0, 0, 2 * m, 0), (0, 0, 0, 2 * m),
            (m, m, 0, 0), (m, 0, 0, m), (0, m, m, 0), (0, 0, m, m),
            (m, 0, m, 0), (0, m, 0, m),
        ]
        out = [(e, complex(c)) for e, c in zip(expos, self.a) if _mag(c) != 0]
        out.append(((0, 0, 0, 0), complex(self.C)))
        return out

    @classmethod
    def from_sol1(cls, m, a4, a5, a6, a8, a9, a10, p: HeavenlyParams, C=0j):
        a1, a2, a3, a7 = sol1_coefficients(a4, a5, a6, a8, a9, a10,
                                           p.alpha, p.beta, p.gamma)
        coeffs = tuple(complex(x) for x in (a1, a2, a3, a4, a5, a6, a7, a8, a9, a10))
        return cls(m, coeffs, complex(C), family="sol1")

    @classmethod
    def from_sol2(cls, m, a4, a5, a7, a8, a9, p: HeavenlyParams, C=0j):
        a1, a2, a3, a6, a10 = sol2_coefficients(a4, a5, a7, a8, a9,
                                                p.alpha, p.beta, p.gamma)
        coeffs = tuple(complex(x) for x in (a1, a2, a3, a4, a5, a6, a7, a8, a9, a10))
        return cls(m, coeffs, complex(C), family="sol2")


@dataclass(frozen=True)
class RealAnsatz:
    """General real solution of the neutral-signature reality conditions.

    Variables are ordered (z1, conj z1, z2, conj z2); the derived quantities
    R, phi and a1 are computed on construction unless phi is supplied.
    """

    m: float
    A: float
    B: float
    E: float
    F: float
    delta: float
    C: float = 0.0
    phi: float = field(default=None)
    family: str = "genersol"
    real_slice: bool = True

    def __post_init__(self):
        if self.m == 0:
            raise ContractViolationError("m must be nonzero")
        R = real_R(self.A, self.B, self.F, self.delta)
        object.__setattr__(self, "R", R)
        if self.phi is None:
            object.__setattr__(self, "phi", genersol_phase(
                self.A, self.B, self.E, self.F, self.delta, R=R))
        object.__setattr__(self, "a1", genersol_a1(
            self.A, self.B, self.E, self.F, self.phi, self.delta, R=R))

    @property
    def exponent(self):
        return 1.0 / (2.0 * self.m)

    def monomials(self):
        m = int(self.m) if float(self.m).is_integer() else self.m
        a1 = self.a1
        R = self.R
        eiph = cmath.exp(1j * self.phi)
        return [
            ((2 * m, 0, 0, 0), a1),
            ((0, 2 * m, 0, 0), a1.conjugate()),
            ((0, 0, 2 * m, 0), complex(self.E)),
            ((0, 0, 0, 2 * m), complex(self.E)),
            ((m, m, 0, 0), complex(-self.A)),
            ((m, 0, 0, m), complex(R)),
            ((0, m, m, 0), complex(R)),
            ((0, 0, m, m), complex(self.B)),
            ((m, 0, m, 0), self.F * eiph),
            ((0, m, 0, m), self.F / eiph),
            ((0, 0, 0, 0), complex(self.C)),
        ]

    def as_sol1_tuple(self):
        """The ten complex coefficients this family occupies in the ansatz."""
        eiph = cmath.exp(1j * self.phi)
        return (self.a1, self.a1.conjugate(), complex(self.E), complex(self.E),
                complex(-self.A), complex(self.R), complex(self.R),
                complex(self.B), self.F * eiph, self.F / eiph)


@dataclass(frozen=True)
class RealParticular:
    """Particular real solution with explicit phase theta (scaled out at theta=0)."""

    m: float
    A: float
    B: float
    F: float
    theta: float
    delta: float
    C: float = 0.0
    family: str = "realsol"
    real_slice: bool = True

    def __post_init__(self):
        if self.A == 0:
            raise DenominatorError("A")
        R = real_R(self.A, self.B, self.F, self.delta)
        if abs(self.delta * self.F - R) == 0:
            raise DenominatorError("delta*F-R")
        object.__setattr__(self, "R", R)

    @property
    def exponent(self):
        return 1.0 / (2.0 * self.m)

    def monomials(self):
        m = int(self.m) if float(self.m).is_integer() else self.m
        A, B, F, R, dl = self.A, self.B, self.F, self.R, self.delta
        eth = cmath.exp(1j * self.theta)
        c1 = (A / 2) * (F - dl * R) / (dl * F - R)
        c2 = (dl * (A * B + F ** 2) - F * R) / (2 * A)
        return [
            ((2 * m, 0, 0, 0), c1 * eth ** 2),
            ((0, 2 * m, 0, 0), c1 / eth ** 2),
            ((0, 0, 2 * m, 0), complex(c2)),
            ((0, 0, 0, 2 * m), complex(c2)),
            ((m, m, 0, 0), complex(-A)),
            ((m, 0, 0, m), R * eth),
            ((0, m, m, 0), R / eth),
            ((0, 0, m, m), complex(B)),
            ((m, 0, m, 0), F * eth),
            ((0, m, 0, m), F / eth),
            ((0, 0, 0, 0), complex(self.C)),
        ]


@dataclass(frozen=True)
class CustomPolynomial:
    """User polynomial P with u = P^(1/(2m)); `power` overrides the exponent
    (power=1 makes u the polynomial itself)."""

    monomial_list: tuple
    m: float = 3.0
    power: float = None
    family: str = "custom"
    real_slice: bool = False

    @property
    def exponent(self):
        if self.power is not None:
            return float(self.power)
        return 1.0 / (2.0 * self.m)

    def monomials(self):
        return [(tuple(e), complex(c)) for e, c in self.monomial_list]


@dataclass(frozen=True)
class QuadraticFixture:
    """u is itself a quadratic polynomial given by its second-derivative table.

    `table` maps 1-based axis pairs (i, j), i <= j, to the value of u_ij.
    """

    table: dict
    real_slice: bool = False
    family: str = "quadratic"

    @property
    def exponent(self):
        return 1.0

    def monomials(self):
        out = []
        for (i, j), val in sorted(self.table.items()):
            if i > j:
                i, j = j, i
            expo = [0, 0, 0, 0]
            expo[i - 1] += 1
            expo[j - 1] += 1
            coeff = complex(val) if i != j else complex(val) / 2.0
            out.append((tuple(expo), coeff))
        return out


@dataclass(frozen=True)
class NondegeneracyReport:
    passed: bool
    failures: tuple

    def __bool__(self):
        return self.passed


def nondegeneracy_check(spec: RealAnsatz) -> NondegeneracyReport:
    """Conditions guaranteeing no identically vanishing metric denominators."""
    failures = []
    if spec.A * (spec.A * spec.B + spec.F ** 2) * (spec.delta ** 2 - 1) == 0:
        failures.append("A*(A*B+F^2)*(delta^2-1) != 0")
    if spec.B == 0:
        failures.append("B != 0 (u_{2 2bar} would vanish identically)")
    if spec.m == 1 and spec.C == 0:
        failures.append("C != 0 required when m = 1")
    return NondegeneracyReport(not failures, tuple(failures))


def eval_polynomial(spec, point: Point4) -> complex:
    """Value of the defining polynomial P at the point."""
    total = 0j
    for expo, coeff in spec.monomials():
        t = coeff
        for k in range(4):
            if expo[k]:
                t *= point.coords[k] ** expo[k]
        total += t
    return total


def make_series(spec, point: Point4, degree: int) -> TruncatedSeries:
    """Truncated series of u about `point` (root of P taken when needed)."""
    if spec.real_slice and not point.real_slice:
        raise PairingViolationError(
            "real-slice solution evaluated off the conjugate pairing")
    pser = series_from_monomials(spec.monomials(), point, degree)
    expo = spec.exponent
    if expo == 1.0:
        return pser
    if spec.real_slice:
        p0 = pser.constant_term
        if abs(p0.imag) > 1e-10 * (1.0 + abs(p0)):
            raise PairingViolationError(
                f"P is not real at a real-slice point (P = {p0})")
        if p0.real <= 0:
            raise BranchPointError(f"P = {p0.real} must be positive on the real slice")
    return series_pow(pser, expo)


def make_jets(spec, point: Point4, order: int) -> JetView:
    """Jet of u at `point` to the requested order."""
    return jet_of(make_series(spec, point, order), order)


def make_series_real_chart(spec, point: Point4, degree: int) -> TruncatedSeries:
    """Series of u in the real chart (x1, y1, x2, y2) about a real-slice point.

    The four complex arguments (z1, conj z1, z2, conj z2) become affine series
    in the real displacements, so every coefficient is an exact real-coordinate
    Taylor coefficient of u (the carrier for metric jets).
    """
    if not point.real_slice:
        raise PairingViolationError("real-chart series need a real-slice point")
    c = point.coords
    w = []
    for k, (re_var, im_var, iunit) in enumerate(
            [(0, 1, 1j), (0, 1, -1j), (2, 3, 1j), (2, 3, -1j)]):
        s = TruncatedSeries.zero(degree)
        s.coeffs[(0, 0, 0, 0)] = c[k]
        e = [0, 0, 0, 0]
        e[re_var] = 1
        s.coeffs[tuple(e)] = 1.0 + 0j
        e = [0, 0, 0, 0]
        e[im_var] = 1
        s.coeffs[tuple(e)] = iunit
        w.append(s)
    pows = [[TruncatedSeries.constant(1.0, degree), wk] for wk in w]

    def wpow(k, e):
        lst = pows[k]
        while len(lst) <= e:
            lst.append(lst[-1] * w[k])
        return lst[e]

    total = TruncatedSeries.zero(degree)
    for expo, coeff in spec.monomials():
        term = TruncatedSeries.constant(coeff, degree)
        for k in range(4):
            if expo[k]:
                term = term * wpow(k, int(expo[k]))
        total = total + term
    expo = spec.exponent
    if expo == 1.0:
        return total
    p0 = total.constant_term
    if abs(p0.imag) > 1e-10 * (1.0 + abs(p0)):
        raise PairingViolationError(f"P is not real at a real-slice point (P = {p0})")
    if p0.real <= 0:
        raise BranchPointError(f"P = {p0.real} must be positive on the real slice")
    return series_pow(total, expo)


def _draw_annulus(rng):
    r = rng.uniform(*ANNULUS)
    th = rng.uniform(0.0, 2.0 * math.pi)
    return r * cmath.exp(1j * th)


def sample_jets(spec, n: int, order: int, rng, max_tries: int = MAX_TRIES_DEFAULT,
                min_denominator: float = DEGENERACY_TOL):
    """Rejection-sample `n` admissible points and their jets.

    Points are rejected when the defining polynomial is unusable for the root
    (nonpositive on the real slice, near the branch cut otherwise) or when a
    geometric denominator (u_34 or Delta) falls below `min_denominator`.
    Deep pipelines (curvature, Killing) pass a larger floor: near the
    degenerate stratum the curvature loses double-precision conditioning.
    Raises SamplingExhaustedError with rejection statistics when the try
    budget runs out.
    """
    stats = {"tries": 0, "branch": 0, "u34_small": 0, "delta_small": 0}
    out = []
    for _ in range(max_tries):
        if len(out) >= n:
            break
        stats["tries"] += 1
        if spec.real_slice:
            point = Point4.real_slice_point(_draw_annulus(rng), _draw_annulus(rng))
        else:
            point = Point4(tuple(_draw_annulus(rng) for _ in range(4)))
        try:
            jet = make_jets(spec, point, order)
        except (BranchPointError, BranchCutError, PairingViolationError):
            stats["branch"] += 1
            continue
        if abs(jet.d(3, 4)) < min_denominator:
            stats["u34_small"] += 1
            continue
        if abs(delta_det(jet)) < min_denominator:
            stats["delta_small"] += 1
            continue
        out.append((point, jet))
    if len(out) < n:
        raise SamplingExhaustedError(n, len(out), stats)
    return out, stats
