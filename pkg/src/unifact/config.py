"""Parsing of JSON scenario blocks into library objects."""
from __future__ import annotations

import math

import numpy as np

from .io import matrix_from_json, parse_operator
from .linalg import as_density, tensor
from .models.cavity import Example1Params, poisson_distribution
from .models.dephasing import Example2Params, ohmic
from .operators import fock_interior_mask
from .trotter import BipartiteSystem


class ValidationError(ValueError):
    """Config block does not satisfy a module precondition."""


def require(block: dict, key: str):
    if key not in block:
        raise ValidationError(f"missing required key {key!r}")
    return block[key]


def parse_coefficient(desc):
    """Coefficient of time: number, ``[re, im]``, ``{"cos"|"sin": {...}}``,
    ``{"poly": [c0, c1, ...]}`` or ``{"sum": [...]}``."""
    if isinstance(desc, (int, float)):
        return float(desc)
    if isinstance(desc, list) and len(desc) == 2 and all(isinstance(x, (int, float)) for x in desc):
        return complex(desc[0], desc[1])
    if isinstance(desc, dict):
        for fn_name, fn in (("cos", math.cos), ("sin", math.sin)):
            if fn_name in desc:
                p = desc[fn_name]
                amp = float(p.get("amplitude", 1.0))
                om = float(p.get("omega", 1.0))
                ph = float(p.get("phase", 0.0))
                return lambda t, fn=fn, amp=amp, om=om, ph=ph: amp * fn(om * t + ph)
        if "poly" in desc:
            c = [float(x) for x in desc["poly"]]
            return lambda t, c=c: sum(ck * t**k for k, ck in enumerate(c))
        if "sum" in desc:
            parts = [parse_coefficient(s) for s in desc["sum"]]

            def total(t, parts=parts):
                return sum(p(t) if callable(p) else p for p in parts)

            return total
    raise ValidationError(f"cannot parse coefficient {desc!r}")


def parse_state(desc) -> np.ndarray:
    """Density operator from ``{"ket": [...]}``, ``{"bloch": [x, y, z]}``,
    ``{"kron": [...]}`` of states, or a matrix object."""
    if isinstance(desc, dict):
        if "ket" in desc:
            v = np.array([complex(*x) if isinstance(x, list) else complex(x) for x in desc["ket"]])
            v = v / np.linalg.norm(v)
            return np.outer(v, v.conj())
        if "bloch" in desc:
            from .operators import SX, SY, SZ

            x, y, z = (float(c) for c in desc["bloch"])
            if x * x + y * y + z * z > 1 + 1e-12:
                raise ValidationError("Bloch vector longer than 1")
            return 0.5 * (np.eye(2) + x * SX + y * SY + z * SZ)
        if "kron" in desc:
            return tensor(*[parse_state(s) for s in desc["kron"]])
        if "dim" in desc:
            return as_density(matrix_from_json(desc))
    raise ValidationError(f"cannot parse state {desc!r}")


def parse_system(block: dict) -> BipartiteSystem:
    try:
        return BipartiteSystem(parse_operator(require(block, "h_a")),
                               parse_operator(require(block, "h_b")),
                               parse_operator(require(block, "h_int")),
                               float(block.get("lam", 1.0)))
    except ValidationError:
        raise
    except (ValueError, TypeError) as exc:
        raise ValidationError(str(exc)) from exc


def parse_times(desc) -> np.ndarray:
    if isinstance(desc, dict):
        t = np.linspace(float(desc.get("start", 0.0)), float(require(desc, "stop")),
                        int(desc.get("num", 101)))
    else:
        t = np.asarray(desc, dtype=float)
    if t.ndim != 1 or len(t) == 0 or np.any(t < 0) or np.any(np.diff(t) < 0):
        raise ValidationError("times must be a non-empty non-decreasing list of t >= 0")
    return t


def parse_range(desc) -> list[int]:
    """``"2..8"``, ``[2, 3, 4]`` or a single integer."""
    if isinstance(desc, int):
        return [desc]
    if isinstance(desc, str) and ".." in desc:
        lo, hi = desc.split("..")
        return list(range(int(lo), int(hi) + 1))
    if isinstance(desc, str):
        return [int(desc)]
    return [int(x) for x in desc]


def parse_interior(desc, dim: int):
    if desc is None:
        return None
    mask = fock_interior_mask(require(desc, "dims"), require(desc, "fock_axes"),
                              int(desc.get("margin", 2)))
    if mask.size != dim:
        raise ValidationError("interior dims do not match operator dimension")
    return mask


def parse_example1(block: dict) -> Example1Params:
    pd = block.get("photon_dist", {"poisson": {"mean": 2.0, "n_max": 12}})
    if isinstance(pd, dict) and "poisson" in pd:
        pd = poisson_distribution(float(pd["poisson"].get("mean", 2.0)),
                                  int(pd["poisson"].get("n_max", 12)))
    try:
        return Example1Params(
            omega=float(block.get("omega", 1.0)),
            omega_f=float(block.get("omega_f", 1.0)),
            g=float(block.get("g", 0.2)),
            lam=float(block.get("lam", 0.2)),
            fock_cutoff=int(block.get("fock_cutoff", 16)),
            photon_dist=[tuple(x) for x in pd],
        )
    except (ValueError, TypeError) as exc:
        raise ValidationError(str(exc)) from exc


def parse_example2(block: dict) -> Example2Params:
    try:
        if "modes" in block:
            return Example2Params(omega0=float(block.get("omega0", 1.0)), modes=block["modes"])
        bath = require(block, "bath")
        if bath.get("type", "ohmic") != "ohmic":
            raise ValidationError("only the ohmic spectral density is configurable")
        return Example2Params(
            omega0=float(block.get("omega0", 1.0)),
            spectral_density=ohmic(float(bath.get("omega_c", 5.0)), float(bath.get("scale", 1.0))),
            omega_max=float(bath.get("omega_max", math.inf)),
            g_a=float(bath.get("g_a", 0.1)),
            g_b=float(bath.get("g_b", 0.1)),
        )
    except ValidationError:
        raise
    except (ValueError, TypeError) as exc:
        raise ValidationError(str(exc)) from exc
