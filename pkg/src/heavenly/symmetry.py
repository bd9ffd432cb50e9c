"""Point symmetries of the real equation: the invariance linear system, its
kernel, the two Killing vector fields, and finite symmetry flows.

Generator payloads are restricted to the three families the construction
uses: constant (translation), linear (scaling) and the power law c/z^(m-1)
whose flow preserves the algebraic solution families.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, DenominatorError
from .jets import JetView, Point4, TruncatedSeries
from .solutions import RealAnsatz

RANK_TOL = 1e-10


@dataclass(frozen=True)
class Generator:
    """One symmetry generator: a(z) d/dz on a coordinate, u d/du, or c(z) d/du.

    kind: 'z1', 'z1bar', 'z2', 'z2bar' (coordinate flows), 'scale_u',
    'shift_u_z1', 'shift_u_z2' (and bar versions).
    payload: ('const', c) | ('linear', c) | ('power', c, m) for a(z) = c/z^(m-1).
    """

    kind: str
    payload: tuple

    def coefficient_at(self, z):
        name = self.payload[0]
        c = self.payload[1]
        if name == "const":
            return c
        if name == "linear":
            return c * z
        if name == "power":
            m = self.payload[2]
            if z == 0 and m > 1:
                raise DenominatorError("z^(m-1)", z)
            return c * z ** (1 - m)
        raise ContractViolationError(f"unknown payload {name!r}")


@dataclass(frozen=True)
class InvarianceSystem:
    """The 4x4 linear system acting on (c1, conj c1, c2, conj c2)."""

    M: np.ndarray
    ansatz: RealAnsatz


def invariance_matrix(spec: RealAnsatz) -> InvarianceSystem:
    """Invariance conditions of the general real solution under the combined
    coordinate generator with power-law payloads c_i / z^(m-1).

    Rows (acting on (c1, c1bar, c2, c2bar)):
        2 a1 c1 - A c1bar + F e^{i phi} c2 + R c2bar = 0
        -A c1 + 2 conj(a1) c1bar + R c2 + F e^{-i phi} c2bar = 0
        F e^{i phi} c1 + R c1bar + 2 E c2 + B c2bar = 0
        R c1 + F e^{-i phi} c1bar + B c2 + 2 E c2bar = 0
    """
    A, B, E, F, R = spec.A, spec.B, spec.E, spec.F, spec.R
    a1 = spec.a1
    eip = cmath.exp(1j * spec.phi)
    eim = 1.0 / eip
    M = np.array([
        [2 * a1, -A, F * eip, R],
        [-A, 2 * a1.conjugate(), R, F * eim],
        [F * eip, R, 2 * E, B],
        [R, F * eim, B, 2 * E],
    ], dtype=complex)
    return InvarianceSystem(M, spec)


def _conj_swap(v):
    """The antilinear kernel symmetry J: (c1, c1b, c2, c2b) ->
    (conj c1b, conj c1, conj c2b, conj c2)."""
    return np.array([v[1].conjugate(), v[0].conjugate(),
                     v[3].conjugate(), v[2].conjugate()])


def kernel_rank(sys: InvarianceSystem, tol: float = RANK_TOL):
    """SVD rank with threshold tol * sigma_max; kernel basis chosen
    conjugation-compatible (the bar entries are conjugates of the others)."""
    u, s, vh = np.linalg.svd(sys.M)
    smax = s[0] if s[0] > 0 else 1.0
    rank = int((s > tol * smax).sum())
    raw = [vh[i].conjugate() for i in range(rank, 4)]
    # symmetrize under the antilinear symmetry J, then keep an independent set
    candidates = []
    for v in raw:
        for w in (v + _conj_swap(v), 1j * (v - _conj_swap(v))):
            n = np.linalg.norm(w)
            if n > 1e-10:
                candidates.append(w / n)
    basis = []
    for w in candidates:
        for b in basis:
            w = w - (b.conjugate() @ w) * b
        n = np.linalg.norm(w)
        if n > 1e-8:
            basis.append(w / n)
        if len(basis) == len(raw):
            break
    return rank, basis


def system_determinant(sys: InvarianceSystem):
    """det(M) and the sigma_max^4 scale it should be compared against."""
    s = np.linalg.svd(sys.M, compute_uv=False)
    return complex(np.linalg.det(sys.M)), float(s[0] ** 4)


def killing_vectors(spec: RealAnsatz, kernel_vec, point: Point4):
    """Vector field xi = c1 z1^(1-m) d1 + conj + c2 z2^(1-m) d2 + conj pushed
    to (x1, y1, x2, y2), as degree-1 series about the point.

    The kernel vector must be conjugation-compatible; the result is then real.
    """
    m = spec.m
    if float(m).is_integer():
        m = int(m)
    c1, c1b, c2, c2b = kernel_vec
    if abs(c1b - c1.conjugate()) > 1e-8 * (1 + abs(c1)) or \
       abs(c2b - c2.conjugate()) > 1e-8 * (1 + abs(c2)):
        raise ContractViolationError(
            "kernel vector is not conjugation-compatible; no real field results")
    z1, z2 = point.coords[0], point.coords[2]
    if m > 1 and (z1 == 0 or z2 == 0):
        raise DenominatorError("z^(m-1)", 0)
    # holomorphic components f_i = c_i z_i^(1-m); real parts give (x, y) flows
    out = []
    for c, z, (xvar, yvar) in ((c1, z1, (0, 1)), (c2, z2, (2, 3))):
        f0 = c * z ** (1 - m)
        fprime = c * (1 - m) * z ** (-m) if m != 1 else 0j
        sx = TruncatedSeries.zero(1)
        sy = TruncatedSeries.zero(1)
        ex = [0, 0, 0, 0]
        ex[xvar] = 1
        ey = [0, 0, 0, 0]
        ey[yvar] = 1
        # d/dx f(z) = f'(z), d/dy f(z) = i f'(z); xi^x = Re f, xi^y = Im f
        sx.coeffs[(0, 0, 0, 0)] = complex(f0.real)
        sx.coeffs[tuple(ex)] = complex(fprime.real)
        sx.coeffs[tuple(ey)] = complex((1j * fprime).real)
        sy.coeffs[(0, 0, 0, 0)] = complex(f0.imag)
        sy.coeffs[tuple(ex)] = complex(fprime.imag)
        sy.coeffs[tuple(ey)] = complex((1j * fprime).imag)
        out.extend([sx, sy])
    return tuple(out)


@dataclass(frozen=True)
class PointMap:
    """Finite flow of a coordinate generator plus its jet pushforward data.

    For the diagonal maps used here, z_i -> f_i(z_i), the inverse derivative
    factors lambda_i = dz_i/dz~_i at the image point multiply mixed jets.
    """

    forward: tuple   # four callables z -> z~
    inv_deriv: tuple  # four callables z~ -> dz/dz~ at the image

    def apply_point(self, point: Point4) -> Point4:
        coords = tuple(f(z) for f, z in zip(self.forward, point.coords))
        return Point4(coords, real_slice=False)


def finite_transformation(gen: Generator, eps: float) -> PointMap:
    """Finite flow of a coordinate generator on its axis.

    const c:   z -> z + eps c            (translation)
    linear c:  z -> e^{eps c} z          (scaling)
    power c,m: z -> (z^m + eps m c)^(1/m)
    """
    axis = {"z1": 0, "z1bar": 1, "z2": 2, "z2bar": 3}.get(gen.kind)
    if axis is None:
        raise ContractViolationError(
            f"finite_transformation acts on coordinate generators, not {gen.kind!r}")
    name = gen.payload[0]
    c = gen.payload[1]

    if name == "const":
        def fwd(z):
            return z + eps * c

        def ider(_zt):
            return 1.0 + 0j
    elif name == "linear":
        fac = cmath.exp(eps * c)

        def fwd(z):
            return fac * z

        def ider(_zt):
            return 1.0 / fac
    elif name == "power":
        m = gen.payload[2]

        def fwd(z):
            return (z ** m + eps * m * c) ** (1.0 / m)

        def ider(zt):
            # dz/dz~ = (z~/z)^(m-1) with z = inverse image
            z = (zt ** m - eps * m * c) ** (1.0 / m)
            return (zt / z) ** (m - 1)
    else:
        raise ContractViolationError(f"unknown payload {name!r}")

    fwds = [lambda z: z] * 4
    iders = [lambda zt: 1.0 + 0j] * 4
    fwds[axis] = fwd
    iders[axis] = ider
    return PointMap(tuple(fwds), tuple(iders))


def pushforward_second_jet(jet, pmap: PointMap, image_point: Point4):
    """Mixed second derivatives of the transformed solution at the image point.

    For diagonal maps, u~_{ij}(z~) = u_{ij}(z) lam_i lam_j for i != j with
    lam_i = dz_i/dz~_i; that is all the heavenly residual needs.
    """
    lam = [pmap.inv_deriv[k](image_point.coords[k]) for k in range(4)]
    table = {}
    for i in range(1, 5):
        for j in range(i + 1, 5):
            table[(i, j)] = jet.d(i, j) * lam[i - 1] * lam[j - 1]
    return table


def scale_u_jet(jet, factor):
    """Jet of factor * u (the u-scaling symmetry)."""
    return JetView(jet.order, {k: factor * v for k, v in jet.partials.items()})


def shift_u_jet(jet, axis: int, coeffs, point: Point4):
    """Jet of u + c(z_axis) with polynomial c given as {power: coefficient}.

    Only derivatives purely along `axis` change, so every mixed second
    derivative (hence the heavenly residual) is untouched.
    """
    z0 = point.coords[axis - 1]
    partials = dict(jet.partials)
    for idx in list(partials):
        k = idx[axis - 1]
        if sum(idx) != k:
            continue
        add = 0j
        for power, coeff in coeffs.items():
            if power >= k:
                add += coeff * math.perm(power, k) * z0 ** (power - k)
        partials[idx] += add
    return JetView(jet.order, partials)
