"""Truncated multivariate Taylor ("jet") arithmetic in four complex variables.

A :class:`TruncatedSeries` stores every coefficient of total degree up to its
truncation degree (dense by total degree: at most 70 slots for degree 4 in
four variables).  All operations are pure and return new objects, so values
are safe to share between workers.

Fractional powers use the principal branch; see :func:`series_pow`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import (BranchCutError, BranchPointError, ContractViolationError,
                     DegreeMismatchError, PairingViolationError)

NVARS = 4

# Tolerance (radians) around the negative real axis inside which fractional
# powers are refused; sample points this close to the cut are rejected upstream.
BRANCH_CUT_TOL = 1e-6


@lru_cache(maxsize=None)
def multi_indices(degree):
    """All 4-variable exponent tuples with total degree <= degree, graded lex."""
    out = []
    for total in range(degree + 1):
        for i in range(total + 1):
            for j in range(total - i + 1):
                for k in range(total - i - j + 1):
                    out.append((i, j, k, total - i - j - k))
    return tuple(out)


@lru_cache(maxsize=None)
def indices_of_grade(degree):
    """Multi-indices grouped by total degree: grade g -> tuple of indices."""
    grades = [[] for _ in range(degree + 1)]
    for idx in multi_indices(degree):
        grades[sum(idx)].append(idx)
    return tuple(tuple(g) for g in grades)


@lru_cache(maxsize=None)
def _multi_factorial(idx):
    f = 1
    for e in idx:
        f *= math.factorial(e)
    return f


@dataclass(frozen=True)
class Point4:
    """A point in C^4; on a real slice coords obey z2 = conj(z1), z4 = conj(z3)."""

    coords: tuple
    real_slice: bool = False

    def __post_init__(self):
        coords = tuple(complex(c) for c in self.coords)
        if len(coords) != NVARS:
            raise ContractViolationError("Point4 needs exactly 4 coordinates")
        object.__setattr__(self, "coords", coords)
        if self.real_slice:
            for a, b in ((0, 1), (2, 3)):
                za, zb = coords[a], coords[b]
                if abs(zb - za.conjugate()) > 1e-14 * (1.0 + abs(za)):
                    raise PairingViolationError(
                        f"coords[{b}] = {zb} is not the conjugate of coords[{a}] = {za}")

    @classmethod
    def real_slice_point(cls, z1, z2):
        z1, z2 = complex(z1), complex(z2)
        return cls((z1, z1.conjugate(), z2, z2.conjugate()), real_slice=True)


@dataclass(frozen=True)
class TruncatedSeries:
    """Taylor coefficients (not derivatives) about a base point, dense up to `degree`."""

    degree: int
    coeffs: dict = field(compare=False)

    def __post_init__(self):
        if self.degree < 0:
            raise ContractViolationError("truncation degree must be >= 0")

    @classmethod
    def zero(cls, degree):
        return cls(degree, {idx: 0j for idx in multi_indices(degree)})

    @classmethod
    def constant(cls, value, degree):
        s = cls.zero(degree)
        s.coeffs[(0, 0, 0, 0)] = complex(value)
        return s

    @classmethod
    def variable(cls, var, degree, center_value=0j):
        """Series of the affine function center_value + w_var."""
        if degree < 1:
            raise ContractViolationError("need degree >= 1 to represent a variable")
        s = cls.zero(degree)
        s.coeffs[(0, 0, 0, 0)] = complex(center_value)
        e = [0] * NVARS
        e[var] = 1
        s.coeffs[tuple(e)] = 1.0 + 0j
        return s

    @property
    def constant_term(self):
        return self.coeffs[(0, 0, 0, 0)]

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, series_scale(other, -1.0))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return series_scale(self, other)

    __rmul__ = __mul__


def _check_same_degree(a, b):
    if a.degree != b.degree:
        raise DegreeMismatchError(
            f"series degrees differ: {a.degree} vs {b.degree}")


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_same_degree(a, b)
    return TruncatedSeries(a.degree,
                           {idx: a.coeffs[idx] + b.coeffs[idx] for idx in a.coeffs})


def series_scale(a: TruncatedSeries, factor) -> TruncatedSeries:
    factor = complex(factor)
    return TruncatedSeries(a.degree, {idx: factor * c for idx, c in a.coeffs.items()})


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common degree."""
    _check_same_degree(a, b)
    d = a.degree
    out = {idx: 0j for idx in multi_indices(d)}
    bitems = [(idx, c, sum(idx)) for idx, c in b.coeffs.items() if c != 0]
    for ia, ca in a.coeffs.items():
        if ca == 0:
            continue
        ta = sum(ia)
        for ib, cb, tb in bitems:
            if ta + tb > d:
                continue
            key = (ia[0] + ib[0], ia[1] + ib[1], ia[2] + ib[2], ia[3] + ib[3])
            out[key] += ca * cb
    return TruncatedSeries(d, out)


def series_from_monomials(monomials, center: Point4, degree: int) -> TruncatedSeries:
    """Expand a polynomial (list of (multi-index, coeff)) about `center`.

    Exact up to scalar rounding: each monomial is shifted binomially, so the
    result is the Taylor expansion of the polynomial truncated at `degree`.
    """
    if degree < 0:
        raise ContractViolationError("degree must be >= 0")
    c = center.coords if isinstance(center, Point4) else tuple(complex(x) for x in center)
    out = {idx: 0j for idx in multi_indices(degree)}
    for expo, coeff in monomials:
        coeff = complex(coeff)
        if coeff == 0:
            continue
        expo = tuple(int(e) for e in expo)
        # per-variable binomial shift tables: (z_k)^{e_k} = sum_j C(e_k,j) c_k^{e_k-j} w_k^j
        tables = []
        for k in range(NVARS):
            ek = expo[k]
            col = []
            for j in range(min(ek, degree) + 1):
                col.append(math.comb(ek, j) * (c[k] ** (ek - j) if ek > j else 1.0))
            tables.append(col)
        for idx in multi_indices(degree):
            if any(idx[k] > expo[k] for k in range(NVARS)):
                continue
            term = coeff
            for k in range(NVARS):
                term *= tables[k][idx[k]]
            out[idx] += term
    return TruncatedSeries(degree, out)


def series_partial(a: TruncatedSeries, var: int) -> TruncatedSeries:
    """Formal partial derivative with respect to variable `var` (0-based).

    The result is a series of degree `a.degree - 1`; higher coefficients of the
    derivative are not determined by the truncated data.
    """
    if a.degree == 0:
        raise ContractViolationError("cannot differentiate a degree-0 series")
    d = a.degree - 1
    out = {idx: 0j for idx in multi_indices(d)}
    for idx in multi_indices(d):
        src = list(idx)
        src[var] += 1
        out[idx] = a.coeffs[tuple(src)] * src[var]
    return TruncatedSeries(d, out)


def series_pow(base: TruncatedSeries, exponent) -> TruncatedSeries:
    """base**exponent via the first-order recurrence on homogeneous parts.

    Integer exponents are single-valued and accept any nonzero constant term.
    Fractional exponents take the principal branch and refuse constant terms
    within BRANCH_CUT_TOL of the negative real axis.
    """
    c0 = base.constant_term
    is_int = isinstance(exponent, int) or (
        isinstance(exponent, float) and float(exponent).is_integer())
    a = complex(exponent)
    if is_int and int(a.real) >= 0 and c0 == 0:
        # non-negative integer powers of a cut-free zero-constant series are fine
        n = int(a.real)
        out = TruncatedSeries.constant(1.0, base.degree)
        for _ in range(n):
            out = series_mul(out, base)
        return out
    if c0 == 0:
        raise BranchPointError("constant term of the base series vanishes")
    if not is_int and abs(math.pi - abs(cmath.phase(c0))) < BRANCH_CUT_TOL:
        raise BranchCutError(c0)

    d = base.degree
    grades = indices_of_grade(d)
    # homogeneous parts of the base, as sparse dicts
    f = [{idx: base.coeffs[idx] for idx in grades[g] if base.coeffs[idx] != 0}
         for g in range(d + 1)]
    g0 = c0 ** a if not is_int else (c0 ** int(a.real))
    gparts = [{(0, 0, 0, 0): g0}]
    for n in range(1, d + 1):
        acc = {}
        for k in range(n):
            w = a * (n - k) - k
            if w == 0 or not f[n - k]:
                continue
            for ig, cg in gparts[k].items():
                for jf, cf in f[n - k].items():
                    key = (ig[0] + jf[0], ig[1] + jf[1], ig[2] + jf[2], ig[3] + jf[3])
                    acc[key] = acc.get(key, 0j) + w * cg * cf
        gparts.append({idx: v / (n * c0) for idx, v in acc.items()})
    out = {idx: 0j for idx in multi_indices(d)}
    for part in gparts:
        for idx, v in part.items():
            out[idx] = v
    return TruncatedSeries(d, out)


@dataclass(frozen=True)
class JetView:
    """True partial derivatives of a scalar field at a point, up to `order`.

    Axes are 1-based in accessor calls: ``jet.d(1, 3)`` is the mixed second
    derivative with respect to the first and third variables.
    """

    order: int
    partials: dict = field(compare=False)

    def d(self, *axes):
        idx = [0] * NVARS
        for ax in axes:
            idx[ax - 1] += 1
        return self.partials[tuple(idx)]

    def at(self, idx):
        return self.partials[tuple(idx)]

    @property
    def value(self):
        return self.partials[(0, 0, 0, 0)]


def jet_of(series: TruncatedSeries, order: int) -> JetView:
    """Rescale series coefficients by multi-index factorials into derivatives."""
    if order > series.degree:
        raise ContractViolationError(
            f"jet order {order} exceeds series degree {series.degree}")
    partials = {idx: series.coeffs[idx] * _multi_factorial(idx)
                for idx in multi_indices(order)}
    return JetView(order, partials)


def series_map_coeffs(a: TruncatedSeries, fn) -> TruncatedSeries:
    """Apply `fn` to every coefficient (e.g. real/imaginary projection)."""
    return TruncatedSeries(a.degree, {idx: complex(fn(c)) for idx, c in a.coeffs.items()})


def series_permute(a: TruncatedSeries, perm) -> TruncatedSeries:
    """Relabel variables: new variable k is old variable perm[k]."""
    perm = tuple(perm)
    if sorted(perm) != list(range(NVARS)):
        raise ContractViolationError("perm must be a permutation of 0..3")
    out = {}
    for idx, c in a.coeffs.items():
        out[tuple(idx[perm[k]] for k in range(NVARS))] = c
    return TruncatedSeries(a.degree, out)
