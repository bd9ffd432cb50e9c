"""Frozen fixtures used by the verification suite, tests and the CLI docs.

The quadratic real-slice fixtures were constructed by solving the constant
second-derivative form of the real cross-section equation directly; their
residuals vanish identically, so they exercise every geometric identity with
exactly-known numbers.
"""

from __future__ import annotations

import math

from .curvature import MetricJet, metric_jet_from_table
from .jets import TruncatedSeries
from .pde import HeavenlyParams
from .solutions import ComplexAnsatz, QuadraticFixture, RealAnsatz


def s0_fixture():
    """Constant-second-derivative complex solution with (alpha,beta,gamma)=(-2,1,1).

    u = z1 z2 + z3 z4 + z1 z3 + 2 z2 z4: every hand-checkable geometry value
    in the test suite is derived from this one.
    """
    spec = QuadraticFixture({(1, 2): 1.0, (3, 4): 1.0, (1, 3): 1.0, (2, 4): 2.0})
    return spec, HeavenlyParams(-2.0, 1.0, 1.0)


def flat_neutral_fixture():
    """Real-slice quadratic solving the neutral equation at delta = 2.

    u = z1 conj(z1) - z2 conj(z2) + (z1 z2 + c.c.) + sqrt(7)(z1 conj(z2) + c.c.);
    (delta^2-1)(1)(-1) - delta^2 (1)(1) + 7 = 0.  Constant metric, flat.
    """
    r = math.sqrt(7.0)
    spec = QuadraticFixture({(1, 2): 1.0, (3, 4): -1.0, (1, 3): 1.0, (2, 4): 1.0,
                             (1, 4): r, (2, 3): r}, real_slice=True)
    return spec, HeavenlyParams.neutral(1.0, 2.0)


def euclidean_synthetic_fixture():
    """Real-slice quadratic solving the euclidean equation at delta = 2.

    (delta^2+1)(1)(1) - delta^2 (1/2)^2 - 2*2 = 5 - 1 - 4 = 0; Delta != 0.
    """
    spec = QuadraticFixture({(1, 2): 1.0, (3, 4): 1.0, (1, 3): 0.5, (2, 4): 0.5,
                             (1, 4): 2.0, (2, 3): 2.0}, real_slice=True)
    return spec, HeavenlyParams.euclidean(1.0, 2.0)


def genersol_fixture():
    """The acceptance instance A=B=F=1, delta=2, E=3/2 (phi=pi/2), m=3, C=1."""
    spec = RealAnsatz(m=3, A=1.0, B=1.0, E=1.5, F=1.0, delta=2.0, C=1.0)
    return spec, HeavenlyParams.neutral(1.0, 2.0)


def sol1_unit_fixture(m=3, C=1.0):
    """Seven-parameter family at unit free parameters, (alpha,beta,gamma)=(-2,1,1)."""
    p = HeavenlyParams(-2.0, 1.0, 1.0)
    spec = ComplexAnsatz.from_sol1(m, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, p, C=C)
    return spec, p


def sol2_unit_fixture(m=3, C=1.0):
    """Six-parameter family at unit free parameters, (alpha,beta,gamma)=(-3,2,1)."""
    p = HeavenlyParams(-3.0, 2.0, 1.0)
    spec = ComplexAnsatz.from_sol2(m, 1.0, 1.0, 1.0, 1.0, 1.0, p, C=C)
    return spec, p


def sphere_product_metric_jet(theta0=1.0, degree=2) -> MetricJet:
    """Unit 2-sphere times flat plane: g = diag(1, sin^2 theta, 1, 1).

    Curvature oracle values: Ricci = diag(1, sin^2 theta0, 0, 0), scalar = 2.
    """
    one = TruncatedSeries.constant(1.0, degree)
    zero = TruncatedSeries.zero(degree)
    g11 = TruncatedSeries.zero(degree)
    g11.coeffs[(0, 0, 0, 0)] = complex(math.sin(theta0) ** 2)
    g11.coeffs[(1, 0, 0, 0)] = complex(math.sin(2 * theta0))
    if degree >= 2:
        g11.coeffs[(2, 0, 0, 0)] = complex(math.cos(2 * theta0))
    table = [[one, zero, zero, zero],
             [zero, g11, zero, zero],
             [zero, zero, one, zero],
             [zero, zero, zero, one]]
    return metric_jet_from_table((theta0, 0.0, 0.0, 0.0), table)
