"""Deterministic report serialization: JSON with 17-significant-digit floats,
complex values as [re, im] pairs, and CSV tables with a fixed header.

Repeated runs with the same seed must produce byte-identical output, so no
timestamps or environment-dependent fields are ever written.
"""

from __future__ import annotations

import hashlib
import json

from . import __version__


def format_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite float in report: {x}")
    s = f"{x:.17g}"
    # keep it a JSON number token
    return s


def _emit(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, complex):
        return f"[{format_float(obj.real)},{format_float(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_emit(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}:{_emit(v)}" for k, v in obj.items())
        return "{" + ",".join(items) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__} deterministically")


def dumps(obj) -> str:
    return _emit(obj)


def spec_hash(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def build_report(command: str, checks, seed, spec_digest, spec_raw=None,
                 extra_env=None) -> dict:
    env = {"version": __version__, "seed": seed, "spec_hash": spec_digest}
    if extra_env:
        env.update(extra_env)
    report = {
        "command": command,
        "environment": env,
        "checks": [c.as_record() for c in checks],
        "pass": all(c.passed for c in checks),
    }
    if spec_raw is not None:
        report["spec"] = spec_raw
    return report


def write_report(report: dict, out_path=None) -> str:
    text = dumps(report) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    return text


def csv_line(values) -> str:
    cells = []
    for v in values:
        if isinstance(v, float):
            cells.append(format_float(v))
        elif isinstance(v, bool):
            cells.append("true" if v else "false")
        else:
            cells.append(str(v))
    return ",".join(cells)


def write_csv(header, rows, out_path=None) -> str:
    lines = [",".join(header)]
    lines.extend(csv_line(r) for r in rows)
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    return text
