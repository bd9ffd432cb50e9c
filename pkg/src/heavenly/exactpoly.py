"""Exact sparse polynomial arithmetic over rational-complex coefficients.

This is the symbolic oracle: the additive constant C is carried as a fifth
ring variable, so a single zero-test covers every value of the constant.
Rational arithmetic is backed by gmpy2.mpq (fractions.Fraction if gmpy2 is
missing); all ring operations are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolationError

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _Q

VARS = ("z1", "z2", "z3", "z4", "C")
NV = len(VARS)
ORACLE_MAX_M = 8


def _to_q(x):
    if isinstance(x, str):
        return _Q(x)
    return _Q(x)


class QQi:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_q(re)
        self.im = _to_q(im)

    @classmethod
    def of(cls, x):
        if isinstance(x, QQi):
            return x
        if isinstance(x, complex):
            raise ContractViolationError(
                "refusing silent float->rational conversion; pass ints, "
                "fraction strings, or QQi")
        return cls(x)

    @classmethod
    def _coerce(cls, x):
        try:
            return cls.of(x)
        except (ContractViolationError, TypeError, ValueError):
            return None

    def __add__(self, other):
        o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return QQi.of(other) + (-self)

    def __mul__(self, other):
        o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re * o.re - self.im * o.im,
                   self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QQi.of(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero QQi")
        return QQi((self.re * o.re + self.im * o.im) / den,
                   (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        return QQi.of(other) / self

    def __eq__(self, other):
        o = QQi._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __complex__(self):
        return float(self.re) + 1j * float(self.im)

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {abs(self.im)}*i)"


QQI_ZERO = QQi(0)
QQI_ONE = QQi(1)


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial in (z1, z2, z3, z4, C) with QQi coefficients.

    Zero coefficients are never stored, so the zero polynomial has an empty
    term map and equality is structural.
    """

    terms: dict

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def const(cls, c):
        c = QQi.of(c)
        return cls({} if c.is_zero() else {(0,) * NV: c})

    @classmethod
    def monomial(cls, expo, coeff=QQI_ONE):
        coeff = QQi.of(coeff)
        expo = tuple(int(e) for e in expo)
        if len(expo) != NV:
            raise ContractViolationError(f"exponent tuple must have {NV} entries")
        return cls({} if coeff.is_zero() else {expo: coeff})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, QQI_ZERO) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPoly(out)

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QQi):
            if other.is_zero():
                return MultiPoly.zero()
            return MultiPoly({e: c * other for e, c in self.terms.items()})
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(ea[k] + eb[k] for k in range(NV))
                s = out.get(e, QQI_ZERO) + ca * cb
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return MultiPoly(out)

    __rmul__ = __mul__

    def eval(self, values):
        """Exact evaluation; `values` is a 5-tuple of QQi (z1..z4, C)."""
        values = [QQi.of(v) for v in values]
        total = QQI_ZERO
        for e, c in self.terms.items():
            t = c
            for k in range(NV):
                for _ in range(e[k]):
                    t = t * values[k]
            total = total + t
        return total

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))


def is_zero(p: MultiPoly) -> bool:
    return not p.terms


def poly_partial(p: MultiPoly, var: int) -> MultiPoly:
    """Exact formal partial derivative; differentiation in C is forbidden."""
    if not 0 <= var <= 3:
        raise ContractViolationError(
            "can only differentiate in z1..z4 (0-based index 0..3), not C")
    out = {}
    for e, c in p.terms.items():
        if e[var] == 0:
            continue
        ne = list(e)
        ne[var] -= 1
        out[tuple(ne)] = c * e[var]
    return MultiPoly(out)


# exponent layout of the ten ansatz monomials; C is the fifth ring variable
def _exponents(m):
    return [
        (2 * m, 0, 0, 0, 0),  # a1 (z1)^2m
        (0, 2 * m, 0, 0, 0),  # a2
        (0, 0, 2 * m, 0, 0),  # a3
        (0, 0, 0, 2 * m, 0),  # a4
        (m, m, 0, 0, 0),      # a5 (z1 z2)^m
        (m, 0, 0, m, 0),      # a6 (z1 z4)^m
        (0, m, m, 0, 0),      # a7 (z2 z3)^m
        (0, 0, m, m, 0),      # a8 (z3 z4)^m
        (m, 0, m, 0, 0),      # a9 (z1 z3)^m
        (0, m, 0, m, 0),      # a10 (z2 z4)^m
    ]


def build_P(m: int, a) -> MultiPoly:
    """The even-order algebraic ansatz polynomial with symbolic constant C."""
    if m < 1:
        raise ContractViolationError("m must be a positive integer")
    a = [QQi.of(x) for x in a]
    if len(a) != 10:
        raise ContractViolationError("need exactly 10 coefficients a1..a10")
    p = MultiPoly.monomial((0, 0, 0, 0, 1))
    for expo, coeff in zip(_exponents(m), a):
        p = p + MultiPoly.monomial(expo, coeff)
    return p


def heavenly_oracle_Q(P: MultiPoly, m: int, alpha, beta, gamma) -> MultiPoly:
    """Exact obstruction polynomial for u = P^(1/(2m)).

    With s = 1/(2m) and B_ij = (s-1) P_i P_j + P P_ij, returns
    Q = alpha B12 B34 + beta B13 B24 + gamma B14 B23.  The PDE residual of u
    factors as s^2 P^(2s-4) Q, so Q == 0 certifies the solution identically,
    for every value of the constant C.
    """
    if m < 1:
        raise ContractViolationError("m must be a positive integer")
    if m > ORACLE_MAX_M:
        raise ContractViolationError(
            f"oracle capped at m <= {ORACLE_MAX_M} (degree grows like 8m and the "
            "coefficient relations are m-independent)")
    alpha, beta, gamma = QQi.of(alpha), QQi.of(beta), QQi.of(gamma)
    if not (alpha + beta + gamma).is_zero():
        raise ContractViolationError("alpha + beta + gamma must vanish exactly")
    s = QQi(_Q(1, 2 * m))
    sm1 = s - QQI_ONE
    dP = [poly_partial(P, k) for k in range(4)]

    def bfactor(i, j):
        return sm1 * (dP[i - 1] * dP[j - 1]) + P * poly_partial(dP[i - 1], j - 1)

    return (alpha * (bfactor(1, 2) * bfactor(3, 4))
            + beta * (bfactor(1, 3) * bfactor(2, 4))
            + gamma * (bfactor(1, 4) * bfactor(2, 3)))


def poly_phi(P: MultiPoly, alpha, beta, gamma) -> MultiPoly:
    """Exact heavenly residual of the polynomial itself (not of its root)."""
    alpha, beta, gamma = QQi.of(alpha), QQi.of(beta), QQi.of(gamma)
    dP = [poly_partial(P, k) for k in range(4)]

    def dd(i, j):
        return poly_partial(dP[i - 1], j - 1)

    return (alpha * (dd(1, 2) * dd(3, 4)) + beta * (dd(1, 3) * dd(2, 4))
            + gamma * (dd(1, 4) * dd(2, 3)))


def poly_difcon(P: MultiPoly, alpha, beta, gamma) -> MultiPoly:
    """Exact differential constraint selecting zero-Lagrangian solutions."""
    alpha, beta, gamma = QQi.of(alpha), QQi.of(beta), QQi.of(gamma)
    dP = [poly_partial(P, k) for k in range(4)]

    def dd(i, j):
        return poly_partial(dP[i - 1], j - 1)

    def trip(i, j, k, l):
        return dP[i - 1] * dP[j - 1] * dd(k, l)

    return (alpha * (trip(1, 2, 3, 4) + trip(3, 4, 1, 2))
            + beta * (trip(1, 3, 2, 4) + trip(2, 4, 1, 3))
            + gamma * (trip(1, 4, 2, 3) + trip(2, 3, 1, 4)))


def format_nonzero_terms(p: MultiPoly, limit=8) -> str:
    """Human-readable listing of (at most `limit`) nonzero terms."""
    if is_zero(p):
        return "0"
    items = sorted(p.terms.items())[:limit]
    parts = []
    for e, c in items:
        mono = "*".join(f"{VARS[k]}^{e[k]}" for k in range(NV) if e[k])
        parts.append(f"({c})" + (f"*{mono}" if mono else ""))
    more = len(p.terms) - len(items)
    return " + ".join(parts) + (f" + ... ({more} more)" if more > 0 else "")
