"""``unifact`` command line: one subcommand per scenario kind.

Every run writes its artifacts plus ``manifest.json`` into ``--out``.
Invalid input exits with status 2 and a JSON error object on stderr;
a numerical failure (breakdown, cutoff leakage, ...) exits with 3.
"""
from __future__ import annotations

import argparse
import copy
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    ValidationError,
    parse_coefficient,
    parse_example1,
    parse_example2,
    parse_interior,
    parse_range,
    parse_state,
    parse_system,
    parse_times,
    require,
)
from .errors import UnifactError
from .io import dumps, matrix_from_json, matrix_to_json, parse_operator, write_csv, write_json
from .lie import close_algebra, jacobi_residual
from .linalg import as_density, dagger, propagator, tensor
from .measures import check_measure_axioms, entanglement_report, marginal_product
from .models.cavity import (
    REFERENCE,
    analytic_rho_ab,
    deviation_table,
    delta_d_example1,
    simulate_example1,
)
from .models.dephasing import delta_d_example2, simulate_example2
from .perturbation import perturb_case_a, perturb_case_b
from .trotter import SplitSchedule, trotter_error
from .wei_norman import TimeDependentHamiltonian, integrate_wn

KINDS = ("closure", "wei-norman", "trotter", "perturb", "measure", "axioms",
         "example1", "example2", "sweep")

TOLERANCES = {
    "independence_tol": 1e-10,
    "closure_tol": 1e-9,
    "ode_tol": 1e-6,
    "cond_max": 1e12,
    "leakage_tol": 1e-8,
    "state_tol": 1e-10,
}

SWEEP_AXES = {"lam": "lam", "n": "n", "g": "g", "t_end": "t_end", "dlam": "dlam"}


@dataclass
class ScenarioConfig:
    kind: str
    params: dict
    out: Path = Path("results")
    seed: int = 0
    tolerances: dict = field(default_factory=dict)

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, TOLERANCES[name]))

    def digest(self) -> str:
        blob = json.dumps({"kind": self.kind, "params": self.params, "seed": self.seed,
                           "tolerances": self.tolerances}, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()


class Artifacts:
    """Files produced by one computation, written only after it succeeds."""

    def __init__(self):
        self.files = {}
        self.summary = {}
        self.points = []  # (subdir, config, artifacts) for sweeps

    def csv(self, name, header, rows):
        self.files[name] = ("csv", header, list(rows))

    def json(self, name, obj):
        self.files[name] = ("json", obj)

    def write(self, out: Path) -> list[str]:
        out.mkdir(parents=True, exist_ok=True)
        for name, item in self.files.items():
            if item[0] == "csv":
                write_csv(out / name, item[1], item[2])
            else:
                write_json(out / name, item[1])
        return sorted(self.files)


def _load_matrix(desc, base: Path | None = None):
    if isinstance(desc, str):
        path = Path(desc)
        if base is not None and not path.is_absolute():
            path = base / path
        try:
            desc = json.loads(path.read_text())
        except OSError as exc:
            raise ValidationError(f"cannot read {path}: {exc}") from exc
    if isinstance(desc, dict) and "dim" in desc:
        return matrix_from_json(desc)
    return parse_state(desc)


# -- scenario handlers: validate eagerly, return a thunk that computes --------


def _closure(cfg: ScenarioConfig):
    p = cfg.params
    seeds = [parse_operator(s) for s in require(p, "seeds")]
    if not seeds:
        raise ValidationError("seeds must be non-empty")
    interior = parse_interior(p.get("interior"), seeds[0].shape[0])
    max_dim = int(p.get("max_dim", 64))

    def compute():
        basis = close_algebra(seeds, max_dim=max_dim, independence_tol=cfg.tol("independence_tol"),
                              closure_tol=cfg.tol("closure_tol"), interior=interior)
        art = Artifacts()
        art.json("basis.json", basis.to_dict())
        n = basis.dim
        rows = [[i + 1, j + 1, k + 1, c.real, c.imag]
                for (i, j, k), c in np.ndenumerate(basis.structure) if abs(c) > 1e-14]
        art.csv("structure.csv", ["i", "j", "k", "re", "im"], rows)
        art.summary = {"dim": n, "closure_residual": basis.closure_residual,
                       "jacobi_residual": jacobi_residual(basis.structure)}
        return art

    return compute


def _wei_norman(cfg: ScenarioConfig):
    p = cfg.params
    terms = []
    for term in require(p, "terms"):
        gen = require(term, "generator")
        gen = int(gen) if isinstance(gen, int) else parse_operator(gen)
        terms.append((parse_coefficient(require(term, "coefficient")), gen))
    seeds = [parse_operator(s) for s in p["seeds"]] if "seeds" in p else \
        [g for _, g in terms if not isinstance(g, int)]
    if not seeds:
        raise ValidationError("give 'seeds' when all generators are basis indices")
    t_end = float(require(p, "t_end"))
    step = float(p.get("step", 1e-2))
    if t_end <= 0 or step <= 0:
        raise ValidationError("t_end and step must be positive")
    interior = parse_interior(p.get("interior"), seeds[0].shape[0])
    h = TimeDependentHamiltonian(terms)

    def compute():
        basis = close_algebra(seeds, max_dim=int(p.get("max_dim", 64)),
                              independence_tol=cfg.tol("independence_tol"),
                              closure_tol=cfg.tol("closure_tol"), interior=interior)
        fp = integrate_wn(h, basis, t_end, step, ode_tol=cfg.tol("ode_tol"),
                          shadow=bool(p.get("shadow", True)), cond_max=cfg.tol("cond_max"))
        art = Artifacts()
        art.csv("trajectory.csv", fp.csv_header(), fp.csv_rows())
        art.json("propagator.json", fp.to_dict())
        art.summary = {"basis_dim": basis.dim, "steps": len(fp.grid) - 1,
                       "error_estimate": fp.error_estimate}
        return art

    return compute


def _trotter(cfg: ScenarioConfig):
    p = cfg.params
    sys_ = parse_system(p)
    t_end = float(p.get("t_end", 1.0))
    ns = parse_range(p.get("n", "2..8"))
    if not ns or min(ns) < 0 or t_end <= 0:
        raise ValidationError("need t_end > 0 and a non-empty list of n >= 0")
    corrected = not bool(p.get("plain_trotter", False))

    def compute():
        rows = []
        for n in ns:
            sched = SplitSchedule(t_end, n)
            t0 = time.perf_counter()
            err = trotter_error(sys_, sched, corrected=corrected,
                                oracle_max_dim=int(p.get("oracle_max_dim", 256)))
            rows.append([n, sched.tau, err, round(time.perf_counter() - t0, 6)])
        art = Artifacts()
        art.csv("trotter.csv", ["n", "tau", "error", "seconds"], rows)
        art.summary = {"tau": rows[-1][1], "error": rows[-1][2]}
        return art

    return compute


def _perturb(cfg: ScenarioConfig):
    p = cfg.params
    case = str(p.get("case", "b")).lower()
    if case not in ("a", "b"):
        raise ValidationError("case must be 'a' or 'b'")
    base = parse_system(p)
    rho_a, rho_b = parse_state(require(p, "rho_a")), parse_state(require(p, "rho_b"))
    if rho_a.shape[0] != base.dims[0] or rho_b.shape[0] != base.dims[1]:
        raise ValidationError("state dimensions do not match the system")
    t_end = float(p.get("t_end", 1.0))
    n = int(p.get("n", 6))
    lam_values = [float(x) for x in p.get("lam_values", [base.lam])]
    if not lam_values:
        raise ValidationError("lam_values must be non-empty")
    bracket = p.get("bracket", "commutator")
    if bracket not in ("commutator", "anticommutator"):
        raise ValidationError("bracket must be 'commutator' or 'anticommutator'")
    sched = SplitSchedule(t_end, n)
    rho0 = tensor(rho_a, rho_b)
    d_a, d_b = base.dims

    def run_one(lam):
        sys_ = base.with_lam(lam)
        if case == "b":
            return perturb_case_b(sys_, rho_a, rho_b, sched, bracket=bracket)
        ha = np.kron(sys_.h_a, np.eye(d_b))
        hb = np.kron(np.eye(d_a), sys_.h_b)

        def family(x):
            return TimeDependentHamiltonian([(1.0, ha), (1.0, hb), (x, sys_.h_int)])

        basis = close_algebra([ha, hb, sys_.h_int], independence_tol=cfg.tol("independence_tol"),
                              closure_tol=cfg.tol("closure_tol"))
        return perturb_case_a(family, basis, rho0, lam, t_end, dlam=p.get("dlam"),
                              step=float(p.get("step", 1e-3)),
                              second_order=bool(p.get("second_order", False)))

    def compute():
        rows, first = [], None
        prev = None
        for lam in lam_values:
            res = run_one(lam)
            u = propagator(base.with_lam(lam).hamiltonian, t_end)
            exact = u @ rho0 @ dagger(u)
            disc = float(np.linalg.norm(res.rho - exact))
            ratio = "" if prev is None or disc == 0 else prev / disc
            rows.append([lam, disc, ratio, res.trace_defect, res.hermiticity_defect])
            prev = disc
            if first is None:
                first = res
        art = Artifacts()
        art.json("state.json", {"case": case, "lam": lam_values[0], "t_end": t_end,
                                "rho": matrix_to_json(first.rho),
                                "reference": matrix_to_json(first.reference),
                                "order_used": first.order_used,
                                "remainder_estimate": first.remainder_estimate})
        art.csv("discrepancy.csv",
                ["lam", "discrepancy", "ratio", "trace_defect", "hermiticity_defect"], rows)
        art.summary = {"discrepancy": rows[0][1], "trace_defect": rows[0][3],
                       "hermiticity_defect": rows[0][4]}
        return art

    return compute


def _state_pair(cfg: ScenarioConfig):
    p = cfg.params
    base = Path(p["_base"]) if "_base" in p else None
    tol = cfg.tol("state_tol")
    rho = as_density(_load_matrix(require(p, "rho"), base), tol)
    mode = p.get("reference", "free")
    if mode == "traced":
        dims = [int(d) for d in require(p, "dims")]
        reference = marginal_product(rho, dims)
        label = "product of marginals of rho"
    elif mode == "free":
        reference = as_density(_load_matrix(require(p, "reference_state"), base), tol)
        label = "free product rho_A^0(t) x rho_B^0(t)"
    else:
        raise ValidationError("reference must be 'free' or 'traced'")
    if reference.shape != rho.shape:
        raise ValidationError("state and reference dimensions differ")
    return rho, reference, label


def _measure(cfg: ScenarioConfig):
    rho, reference, label = _state_pair(cfg)
    t = float(cfg.params.get("t", 0.0))

    def compute():
        report = entanglement_report(rho, reference, t, label)
        art = Artifacts()
        art.json("report.json", report.to_dict())
        art.summary = {"delta_d": report.delta_d, "relative_entropy": report.relative_entropy,
                       "bures": report.bures}
        return art

    return compute


def _axioms(cfg: ScenarioConfig):
    p = cfg.params
    rho, reference, _ = _state_pair(cfg)
    dims = [int(d) for d in require(p, "dims")]
    if dims[0] * dims[1] != rho.shape[0]:
        raise ValidationError("dims do not factor the state dimension")

    def compute():
        rep = check_measure_axioms(rho, reference, dims, trials=int(p.get("trials", 100)),
                                   seed=cfg.seed, n_kraus=int(p.get("n_kraus", 2)))
        art = Artifacts()
        art.json("axioms.json", rep.to_dict())
        art.summary = {"monotonicity_violations": rep.monotonicity_violations,
                       "local_unitary_max_dev": rep.local_unitary_max_dev}
        return art

    return compute


def _snapshot_indices(times, requested):
    out = []
    for t in requested:
        k = int(np.argmin(np.abs(times - float(t))))
        if abs(times[k] - float(t)) > 1e-9 * max(1.0, abs(float(t))):
            raise ValidationError(f"snapshot time {t} is not on the time grid")
        out.append(k)
    return out


def _example1(cfg: ScenarioConfig):
    p = cfg.params
    params = parse_example1(p)
    times = parse_times(p.get("times", {"stop": 50.0, "num": 501}))
    snaps = _snapshot_indices(times, p.get("snapshots", []))
    mode = "modulus" if p.get("modulus_squared") else "printed"
    dev_times = parse_times(p.get("deviation_times", times[:: max(1, len(times) // 10)].tolist()))

    def compute():
        traj = simulate_example1(params, times, leakage_tol=cfg.tol("leakage_tol"))
        rows = []
        for k, t in enumerate(times):
            r = traj.rho_ab[k]
            rep = entanglement_report(r, REFERENCE, t, "|ee><ee|")
            pops = np.diag(r).real
            rows.append([t, delta_d_example1(r), rep.relative_entropy, rep.bures,
                         pops[0], pops[1], pops[2], traj.singlet_population[k]])
        art = Artifacts()
        art.csv("timeseries.csv", ["t", "delta_d", "relative_entropy", "bures",
                                   "pop_gg", "pop_EG", "pop_ee", "pop_singlet"], rows)
        dev = simulate_example1(params, dev_times, leakage_tol=cfg.tol("leakage_tol"))
        art.csv("deviation.csv", *deviation_table(params, dev_times, dev))
        art.json("snapshots.json", {
            "basis": ["gg", "EG", "ee"],
            "analytic_mode": mode,
            "snapshots": [{"t": float(times[k]),
                           "simulated": matrix_to_json(traj.rho_ab[k]),
                           "analytic": matrix_to_json(analytic_rho_ab(params, times[k], mode))}
                          for k in snaps],
        })
        dd = [r[1] for r in rows]
        art.summary = {"max_delta_d": max(dd), "final_delta_d": dd[-1]}
        return art

    return compute


def _example2(cfg: ScenarioConfig):
    p = cfg.params
    params = parse_example2(p)
    rho_a = as_density(parse_state(p.get("rho_a", {"ket": [1, 1]})))
    rho_b = as_density(parse_state(p.get("rho_b", {"ket": [1, 1]})))
    if rho_a.shape != (2, 2) or rho_b.shape != (2, 2):
        raise ValidationError("rho_a and rho_b must be single-qubit states")
    times = parse_times(p.get("times", {"stop": 20.0, "num": 201}))
    snaps = _snapshot_indices(times, p.get("snapshots", []))

    def compute():
        pairs = simulate_example2(params, rho_a, rho_b, times)
        rows = []
        for t, (r, r0) in zip(times, pairs):
            rep = entanglement_report(r, r0, t)
            pops = np.diag(r).real
            rows.append([t, rep.delta_d, delta_d_example2(r, r0), rep.relative_entropy,
                         rep.bures, *pops])
        art = Artifacts()
        art.csv("timeseries.csv", ["t", "delta_d", "delta_d_elementwise", "relative_entropy",
                                   "bures", "pop_11", "pop_12", "pop_21", "pop_22"], rows)
        art.json("snapshots.json", {
            "basis": ["11", "12", "21", "22"],
            "snapshots": [{"t": float(times[k]), "rho": matrix_to_json(pairs[k][0]),
                           "reference": matrix_to_json(pairs[k][1])} for k in snaps],
        })
        dd = [r[1] for r in rows]
        art.summary = {"max_delta_d": max(dd), "final_delta_d": dd[-1]}
        return art

    return compute


HANDLERS = {
    "closure": _closure,
    "wei-norman": _wei_norman,
    "trotter": _trotter,
    "perturb": _perturb,
    "measure": _measure,
    "axioms": _axioms,
    "example1": _example1,
    "example2": _example2,
}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("UNIFACT_THREADS", "1")))
    except ValueError:
        return 1


def _sweep(cfg: ScenarioConfig):
    p = cfg.params
    kind = require(p, "base")
    if kind not in HANDLERS:
        raise ValidationError(f"cannot sweep over scenario kind {kind!r}")
    axis = require(p, "axis")
    if axis not in SWEEP_AXES:
        raise ValidationError(f"sweep axis must be one of {sorted(SWEEP_AXES)}")
    values = p.get("values")
    if not isinstance(values, list) or not values:
        raise ValidationError("sweep needs a non-empty list of values")
    key = SWEEP_AXES[axis]
    points = []
    for v in values:
        block = copy.deepcopy(p.get("params", {}))
        block[key] = [v] if kind == "trotter" and key == "n" else v
        if kind == "perturb" and key == "lam":
            block["lam_values"] = [v]
        sub = ScenarioConfig(kind, block, cfg.out, cfg.seed, cfg.tolerances)
        points.append((v, sub, HANDLERS[kind](sub)))

    def compute():
        with ThreadPoolExecutor(max_workers=min(_threads(), len(points))) as pool:
            arts = list(pool.map(lambda pt: pt[2](), points))
        art = Artifacts()
        names = sorted(arts[0].summary)
        rows = [[v, *(a.summary[k] for k in names)] for (v, _, _), a in zip(points, arts)]
        art.csv("sweep.csv", [axis, *names], rows)
        art.points = [(f"points/{i:03d}", sub, a) for i, ((_, sub, _), a) in enumerate(zip(points, arts))]
        art.summary = {"points": len(rows)}
        return art

    return compute


HANDLERS["sweep"] = _sweep


# -- driver --------------------------------------------------------------------


def _manifest(cfg: ScenarioConfig, outputs, wall, summary=None) -> dict:
    return {
        "kind": cfg.kind,
        "config_sha256": cfg.digest(),
        "seed": cfg.seed,
        "version": __version__,
        "wall_seconds": wall,
        "tolerances": {k: cfg.tol(k) for k in sorted(TOLERANCES)},
        "outputs": outputs,
        "summary": summary or {},
    }


def _fail(status: int, payload: dict) -> int:
    sys.stderr.write(dumps(payload) + "\n")
    return status


def run(cfg: ScenarioConfig) -> int:
    """Validate, compute and write one scenario; returns the exit status."""
    start = time.perf_counter()
    try:
        if cfg.kind not in HANDLERS:
            raise ValidationError(f"unknown scenario kind {cfg.kind!r}")
        unknown = sorted(set(cfg.tolerances) - set(TOLERANCES))
        if unknown:
            raise ValidationError(f"unknown tolerance name(s) {unknown}; known: {sorted(TOLERANCES)}")
        compute = HANDLERS[cfg.kind](cfg)
    except UnifactError as exc:
        return _fail(2, exc.to_dict())
    except (ValidationError, ValueError, KeyError, TypeError, IndexError) as exc:
        return _fail(2, {"error": "validation", "type": type(exc).__name__, "message": str(exc)})
    try:
        art = compute()
    except UnifactError as exc:
        return _fail(3, exc.to_dict())
    outputs = art.write(cfg.out)
    for sub_dir, sub, sub_art in art.points:
        sub_out = sub_art.write(cfg.out / sub_dir)
        write_json(cfg.out / sub_dir / "manifest.json",
                   _manifest(sub, sub_out, None, sub_art.summary))
    write_json(cfg.out / "manifest.json",
               _manifest(cfg, outputs, time.perf_counter() - start, art.summary))
    return 0


def _parse_tol(items) -> dict:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ValidationError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError as exc:
            raise ValidationError(f"--tol {name}: {value!r} is not a number") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unifact", description="Unitary factorization and entanglement-change scenarios.")
    parser.add_argument("--version", action="version", version=f"unifact {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON parameter block")
    common.add_argument("--out", type=Path, default=Path("results"))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", action="append", metavar="NAME=VALUE",
                        help=f"tolerance override; one of {', '.join(sorted(TOLERANCES))}")
    sub = parser.add_subparsers(dest="kind", required=True)

    sub.add_parser("closure", parents=[common], help="close a set of operators under commutation")
    sub.add_parser("wei-norman", parents=[common], help="factorize a time-dependent propagator")
    p = sub.add_parser("trotter", parents=[common], help="split-operator error versus n")
    p.add_argument("--n", help="scaling exponents, e.g. 2..8")
    p.add_argument("--plain-trotter", action="store_true", help="drop the commutator factor")
    p = sub.add_parser("perturb", parents=[common], help="first-order state in the coupling")
    p.add_argument("--case", choices=["a", "b"])
    for name, hlp in (("measure", "entanglement-change report for a state pair"),
                      ("axioms", "numerical checks of the measure conditions")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("rho", nargs="?", help="matrix JSON of the state")
        p.add_argument("reference_state", nargs="?", help="matrix JSON of the reference")
        p.add_argument("--reference", choices=["free", "traced"])
        p.add_argument("--dims", help="subsystem dimensions, e.g. 2,2")
    p = sub.add_parser("example1", parents=[common], help="two qubits in a cavity")
    p.add_argument("--modulus-squared", action="store_true",
                   help="snapshot closed form with |f|^2 and p(n)")
    sub.add_parser("example2", parents=[common], help="two qubits under pure dephasing")
    sub.add_parser("sweep", parents=[common], help="one-axis parameter sweep")
    return parser


def config_from_args(args) -> ScenarioConfig:
    params = {}
    if args.config is not None:
        try:
            params = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(params, dict):
            raise ValidationError("config must be a JSON object")
        params.setdefault("_base", str(args.config.parent))
    kind = args.kind
    if kind == "trotter":
        if args.n is not None:
            params["n"] = args.n
        if args.plain_trotter:
            params["plain_trotter"] = True
    elif kind == "perturb" and args.case:
        params["case"] = args.case
    elif kind in ("measure", "axioms"):
        if args.rho:
            params["rho"] = str(Path(args.rho).resolve())
        if args.reference_state:
            params["reference_state"] = str(Path(args.reference_state).resolve())
        if args.reference:
            params["reference"] = args.reference
        if args.dims:
            params["dims"] = [int(x) for x in args.dims.split(",")]
    elif kind == "example1" and args.modulus_squared:
        params["modulus_squared"] = True
    if kind not in ("measure", "axioms"):
        params.pop("_base", None)
    return ScenarioConfig(kind, params, args.out, args.seed, _parse_tol(args.tol))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ValidationError, ValueError) as exc:
        return _fail(2, {"error": "validation", "type": type(exc).__name__, "message": str(exc)})
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
