"""Solution-spec JSON parsing for the CLI.

Schema: {"family": "sol1"|"sol2"|"realsol"|"genersol"|"custom"|"quadratic",
"m": number, "C": number|[re,im], "params": {...}, "heavenly":
{"alpha":..., "beta":..., "gamma":...} or {"gamma":..., "delta":...,
"branch": "neutral"|"euclidean"}}.

Numbers may be ints, floats, [re, im] pairs, or exact fraction strings like
"1/2"; when every relevant input is exact the derive/oracle paths stay in
rational arithmetic.
"""

from __future__ import annotations

import json

from .errors import HeavenlyError
from .exactpoly import QQi
from .pde import HeavenlyParams
from .solutions import (ComplexAnsatz, CustomPolynomial, QuadraticFixture,
                        RealAnsatz, RealParticular)


def _is_exact_number(v):
    if isinstance(v, (int, str)):
        return True
    if isinstance(v, list):
        return all(_is_exact_number(x) for x in v)
    return False


def parse_number(v):
    """-> complex (floats allowed)."""
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, str):
        return complex(QQi(v))
    if isinstance(v, list) and len(v) == 2:
        return complex(parse_number(v[0]).real, parse_number(v[1]).real)
    raise HeavenlyError(f"cannot parse number {v!r}")


def parse_exact(v) -> QQi:
    if isinstance(v, (int, str)):
        return QQi(v)
    if isinstance(v, list) and len(v) == 2:
        return QQi(v[0] if isinstance(v[0], (int, str)) else str(v[0]),
                   v[1] if isinstance(v[1], (int, str)) else str(v[1]))
    raise HeavenlyError(f"value {v!r} is not exact (use ints or 'p/q' strings)")


def parse_params(raw) -> HeavenlyParams:
    if "branch" in raw or "delta" in raw:
        branch = raw.get("branch", "neutral")
        gamma = parse_number(raw.get("gamma", 1)).real
        delta = parse_number(raw["delta"]).real
        if branch == "neutral":
            return HeavenlyParams.neutral(gamma, delta)
        if branch == "euclidean":
            return HeavenlyParams.euclidean(gamma, delta)
        raise HeavenlyError(f"unknown branch {branch!r}")
    return HeavenlyParams(parse_number(raw["alpha"]), parse_number(raw["beta"]),
                          parse_number(raw["gamma"]))


def load_spec(path):
    """-> (solution spec object, HeavenlyParams, raw dict)."""
    with open(path) as fh:
        raw = json.load(fh)
    return build_spec(raw) + (raw,)


def build_spec(raw):
    family = raw.get("family")
    params = raw.get("params", {})
    p = parse_params(raw.get("heavenly", {"alpha": -2, "beta": 1, "gamma": 1}))
    m = raw.get("m", 3)
    C = parse_number(raw.get("C", 0))
    if family == "sol1":
        spec = ComplexAnsatz.from_sol1(
            m, *(parse_number(params[k]) for k in ("a4", "a5", "a6", "a8", "a9", "a10")),
            p, C=C)
    elif family == "sol2":
        spec = ComplexAnsatz.from_sol2(
            m, *(parse_number(params[k]) for k in ("a4", "a5", "a7", "a8", "a9")),
            p, C=C)
    elif family == "genersol":
        if p.delta is None:
            raise HeavenlyError("genersol needs a real branch ('delta' in heavenly)")
        spec = RealAnsatz(m=m, A=parse_number(params["A"]).real,
                          B=parse_number(params["B"]).real,
                          E=parse_number(params["E"]).real,
                          F=parse_number(params["F"]).real,
                          delta=p.delta, C=C.real,
                          phi=(parse_number(params["phi"]).real
                               if "phi" in params else None))
    elif family == "realsol":
        if p.delta is None:
            raise HeavenlyError("realsol needs a real branch ('delta' in heavenly)")
        spec = RealParticular(m=m, A=parse_number(params["A"]).real,
                              B=parse_number(params["B"]).real,
                              F=parse_number(params["F"]).real,
                              theta=parse_number(params.get("theta", 0)).real,
                              delta=p.delta, C=C.real)
    elif family == "custom":
        monos = tuple((tuple(e), parse_number(c)) for e, c in params["monomials"])
        spec = CustomPolynomial(monos, m=m, power=params.get("power"),
                                real_slice=bool(params.get("real_slice", False)))
    elif family == "quadratic":
        table = {}
        for key, val in params.items():
            if not (key.startswith("u") and len(key) == 3):
                raise HeavenlyError(f"quadratic table keys look like 'u12', got {key!r}")
            table[(int(key[1]), int(key[2]))] = parse_number(val)
        spec = QuadraticFixture(table, real_slice=bool(raw.get("real_slice",
                                                               p.branch is not None)))
    else:
        raise HeavenlyError(f"unknown family {family!r}")
    return spec, p


def exact_oracle_inputs(raw):
    """Exact (QQi) free parameters and equation coefficients for the oracle."""
    family = raw.get("family")
    params = raw.get("params", {})
    heav = raw.get("heavenly", {})
    needed = {"sol1": ("a4", "a5", "a6", "a8", "a9", "a10"),
              "sol2": ("a4", "a5", "a7", "a8", "a9")}.get(family)
    if needed is None:
        raise HeavenlyError("oracle runs on sol1/sol2 specs")
    for k in needed:
        if not _is_exact_number(params.get(k)):
            raise HeavenlyError(
                f"oracle needs exact rational parameters; {k}={params.get(k)!r}")
    for k in ("alpha", "beta", "gamma"):
        if not _is_exact_number(heav.get(k)):
            raise HeavenlyError(
                f"oracle needs exact rational equation coefficients; {k} is not")
    exact = {k: parse_exact(params[k]) for k in needed}
    abg = tuple(parse_exact(heav[k]) for k in ("alpha", "beta", "gamma"))
    return family, exact, abg
