"""JSON and CSV serialization.

Matrices are stored as ``{"dim": n, "re": [...], "im": [...]}`` with the
entries flattened row-major.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile

import numpy as np

from .operators import NAMED, destroy, number, pauli_string

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "parse_operator",
    "dumps",
    "write_text_atomic",
    "write_json",
    "write_csv",
    "csv_text",
]


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("only square matrices are serialized")
    return {"dim": int(a.shape[0]), "re": a.real.ravel().tolist(), "im": a.imag.ravel().tolist()}


def matrix_from_json(d: dict) -> np.ndarray:
    n = int(d["dim"])
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d.get("im", np.zeros(n * n)), dtype=float)
    if re.size != n * n or im.size != n * n:
        raise ValueError(f"matrix object with dim {n} needs {n * n} entries")
    return (re + 1j * im).reshape(n, n)


def parse_operator(desc) -> np.ndarray:
    """Build an operator from a config entry.

    Accepted forms: a matrix object; a name from
    :data:`unifact.operators.NAMED`; a Pauli string such as ``"XZ"``;
    ``{"kron": [desc, ...]}``; ``{"sum": [desc, ...]}``;
    ``{"scale": c, "op": desc}`` with ``c`` real or ``[re, im]``;
    ``{"destroy": n}`` / ``{"number": n}``.
    """
    if isinstance(desc, str):
        if desc in NAMED:
            return NAMED[desc].copy()
        if desc and all(c in "IXYZ" for c in desc):
            return pauli_string(desc)
        raise ValueError(f"unknown operator name {desc!r}")
    if isinstance(desc, dict):
        if "dim" in desc:
            return matrix_from_json(desc)
        if "kron" in desc:
            out = np.ones((1, 1), dtype=complex)
            for s in desc["kron"]:
                out = np.kron(out, parse_operator(s))
            return out
        if "sum" in desc:
            terms = [parse_operator(s) for s in desc["sum"]]
            return sum(terms[1:], terms[0])
        if "scale" in desc:
            c = desc["scale"]
            c = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
            return c * parse_operator(desc["op"])
        if "destroy" in desc:
            return destroy(int(desc["destroy"]))
        if "number" in desc:
            return number(int(desc["number"]))
        if "dagger" in desc:
            return parse_operator(desc["dagger"]).conj().T
    raise ValueError(f"cannot parse operator desc {desc!r}")


def _default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"{type(o).__name__} is not JSON serializable")


def _clean(o):
    # +inf is written as the string "inf", nan as null
    if isinstance(o, (float, np.floating)) and math.isinf(o):
        return "inf" if o > 0 else "-inf"
    if isinstance(o, (float, np.floating)) and math.isnan(o):
        return None
    if isinstance(o, dict):
        return {k: _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    return o


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, default=_default) + "\n"


def write_text_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj) -> None:
    write_text_atomic(path, dumps(obj))


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(float(v))
    return v


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def write_csv(path, header, rows) -> None:
    write_text_atomic(path, csv_text(header, rows))
