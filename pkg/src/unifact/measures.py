"""Entanglement-change measures between an evolved state and a product reference."""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import unitary_group

from .errors import DimensionError
from .linalg import (
    ZERO_EIGENVALUE,
    as_density,
    as_operator,
    dagger,
    hermitian_fn,
    hs_norm_sq,
    partial_trace,
    propagator,
    tensor,
)

log = logging.getLogger(__name__)

__all__ = [
    "EntanglementReport",
    "AxiomReport",
    "free_product_state",
    "marginal_product",
    "delta_d",
    "relative_entropy",
    "fidelity",
    "bures",
    "entanglement_report",
    "operator_schmidt_rank",
    "operation_delta_d",
    "check_measure_axioms",
]

# rho weight on the kernel of sigma above which relative entropy is infinite
SUPPORT_WEIGHT = 1e-12


@dataclass
class EntanglementReport:
    t: float
    delta_d: float
    relative_entropy: float
    bures: float
    reference: str = "free product rho_A^0(t) x rho_B^0(t)"

    def to_dict(self) -> dict:
        return asdict(self)


def free_product_state(sys, rho_a0, rho_b0, t: float) -> np.ndarray:
    """Product of the locally evolved states, i.e. the uncoupled evolution."""
    rho_a0 = as_operator(rho_a0)
    rho_b0 = as_operator(rho_b0)
    d_a, d_b = sys.dims
    if rho_a0.shape[0] != d_a or rho_b0.shape[0] != d_b:
        raise DimensionError("local states do not match the system dimensions")
    ua = propagator(sys.h_a, t)
    ub = propagator(sys.h_b, t)
    return tensor(ua @ rho_a0 @ dagger(ua), ub @ rho_b0 @ dagger(ub))


def marginal_product(rho, dims) -> np.ndarray:
    """``Tr_B(rho) x Tr_A(rho)``, the alternative ``traced`` reference."""
    return tensor(partial_trace(rho, dims, "A"), partial_trace(rho, dims, "B"))


def delta_d(rho, reference) -> float:
    """Squared Hilbert-Schmidt distance ``Tr[(rho - reference)^2]``."""
    rho = as_operator(rho)
    reference = as_operator(reference)
    if rho.shape != reference.shape:
        raise DimensionError(f"dimension mismatch: {rho.shape} vs {reference.shape}")
    return hs_norm_sq(rho - reference)


def relative_entropy(rho, sigma, tol: float = 1e-10) -> float:
    """Quantum relative entropy ``Tr[rho (ln rho - ln sigma)]`` in nats.

    Returns ``math.inf`` when ``rho`` has weight above 1e-12 on the kernel
    of ``sigma``.
    """
    rho = as_density(rho, tol)
    sigma = as_density(sigma, tol)
    if rho.shape != sigma.shape:
        raise DimensionError("dimension mismatch")
    p, u = np.linalg.eigh(0.5 * (rho + dagger(rho)))
    q, v = np.linalg.eigh(0.5 * (sigma + dagger(sigma)))
    kernel = q < ZERO_EIGENVALUE
    overlap = np.abs(dagger(v) @ u) ** 2  # overlap[j, i] = |<v_j|u_i>|^2
    weights = overlap @ np.clip(p, 0.0, None)  # <v_j|rho|v_j>
    if np.sum(weights[kernel]) > SUPPORT_WEIGHT:
        return math.inf
    pos = p > ZERO_EIGENVALUE
    s_rho = float(np.sum(p[pos] * np.log(p[pos])))
    logq = np.where(kernel, 0.0, np.log(np.where(kernel, 1.0, q)))
    cross = float(np.sum(weights * logq))
    return max(s_rho - cross, 0.0)  # nonnegative up to rounding


def fidelity(rho, sigma, tol: float = 1e-10) -> float:
    """``[Tr sqrt(sqrt(sigma) rho sqrt(sigma))]^2``."""
    rho = as_density(rho, tol)
    sigma = as_density(sigma, tol)
    if rho.shape != sigma.shape:
        raise DimensionError("dimension mismatch")
    ssq = hermitian_fn(sigma, lambda w: np.sqrt(np.clip(w, 0.0, None)), tol)
    inner = ssq @ rho @ ssq
    inner = 0.5 * (inner + dagger(inner))
    w = np.linalg.eigvalsh(inner)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)


def bures(rho, sigma, tol: float = 1e-10) -> float:
    """Bures distance ``2 - 2 sqrt(F)``, clamped to ``[0, 2]``."""
    f = fidelity(rho, sigma, tol)
    b = 2.0 - 2.0 * math.sqrt(max(f, 0.0))
    if b < 0.0 or b > 2.0:
        excess = -b if b < 0.0 else b - 2.0
        (log.debug if excess <= 1e-7 else log.warning)("bures value %.3e clamped to [0, 2]", b)
        b = min(max(b, 0.0), 2.0)
    return b


def entanglement_report(rho, reference, t: float = 0.0,
                        label: str = "free product rho_A^0(t) x rho_B^0(t)") -> EntanglementReport:
    return EntanglementReport(
        t=float(t),
        delta_d=delta_d(rho, reference),
        relative_entropy=relative_entropy(rho, reference),
        bures=bures(rho, reference),
        reference=label,
    )


def _realign(o, d_a, d_b):
    o = as_operator(o)
    if o.shape[0] != d_a * d_b:
        raise DimensionError(f"dims ({d_a}, {d_b}) do not factor dimension {o.shape[0]}")
    # rows (i1 j1), columns (i2 j2)
    return o.reshape(d_a, d_b, d_a, d_b).transpose(0, 2, 1, 3).reshape(d_a * d_a, d_b * d_b)


def operator_schmidt_rank(o, d_a: int, d_b: int, tol: float = 1e-10) -> int:
    """Number of terms in the minimal decomposition ``o = sum_i A_i x B_i``."""
    s = np.linalg.svd(_realign(o, d_a, d_b), compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def operation_delta_d(op, rho_a, rho_b) -> float:
    """``delta_d`` between ``op (rho_a x rho_b) op^dag`` and ``rho_a x rho_b``."""
    ref = tensor(rho_a, rho_b)
    op = as_operator(op)
    return delta_d(op @ ref @ dagger(op), ref)


@dataclass
class AxiomReport:
    seed: int
    trials: int
    identity_zero: bool  # delta_d(ref, ref) == 0
    identity_positive: bool  # delta_d > 0 whenever rho != ref
    perturbation_residual: float  # |delta_d(ref + eps P, ref) - eps^2 |P|^2|
    local_unitary_max_dev: float
    monotonicity_violations: int
    monotonicity_max_excess: float

    def to_dict(self) -> dict:
        return asdict(self)


def _random_local_kraus(rng, d: int, k: int):
    # columns of a Haar isometry d -> k*d, split into k blocks: sum K^dag K = I
    w = unitary_group.rvs(k * d, random_state=rng)[:, :d]
    return [w[i * d:(i + 1) * d] for i in range(k)]


def check_measure_axioms(rho, reference, dims, trials: int = 100, seed: int = 0,
                         n_kraus: int = 2, slack: float = 1e-12) -> AxiomReport:
    """Executable forms of the three measure conditions.

    1. ``delta_d`` vanishes exactly when the state equals the reference.
    2. Conjugating both arguments by ``U_A x U_B`` leaves ``delta_d`` fixed.
    3. Sampled local measurements ``V_i = K_i x I`` with ``sum V_i^dag V_i = 1``:
       the averaged post-measurement ``delta_d`` should not exceed the
       original. Violations are counted, not raised.
    """
    rho = as_operator(rho)
    reference = as_operator(reference)
    d_a, d_b = (int(d) for d in dims)
    rng = np.random.default_rng(seed)
    base = delta_d(rho, reference)

    identity_zero = delta_d(reference, reference) == 0.0
    distinct = np.linalg.norm(rho - reference) > 1e-12
    identity_positive = (base > 0.0) == distinct

    p = rng.standard_normal(rho.shape) + 1j * rng.standard_normal(rho.shape)
    p = p + dagger(p)
    p -= np.trace(p) / p.shape[0] * np.eye(p.shape[0])
    eps = 1e-3
    pert_res = abs(delta_d(reference + eps * p, reference) - eps**2 * hs_norm_sq(p))

    max_dev = 0.0
    for _ in range(trials):
        u = np.kron(unitary_group.rvs(d_a, random_state=rng) if d_a > 1 else np.eye(1),
                    unitary_group.rvs(d_b, random_state=rng) if d_b > 1 else np.eye(1))
        dev = abs(delta_d(u @ rho @ dagger(u), u @ reference @ dagger(u)) - base)
        max_dev = max(max_dev, dev)

    violations = 0
    max_excess = -math.inf
    for _ in range(trials):
        total = 0.0
        for k in _random_local_kraus(rng, d_a, n_kraus):
            v = np.kron(k, np.eye(d_b))
            ri = v @ rho @ dagger(v)
            si = v @ reference @ dagger(v)
            pr, ps = np.trace(ri).real, np.trace(si).real
            if pr <= 1e-15 or ps <= 1e-15:
                continue
            total += pr * delta_d(ri / pr, si / ps)
        excess = total - base
        max_excess = max(max_excess, excess)
        if excess > slack:
            violations += 1

    return AxiomReport(
        seed=seed,
        trials=trials,
        identity_zero=bool(identity_zero),
        identity_positive=bool(identity_positive),
        perturbation_residual=float(pert_res),
        local_unitary_max_dev=float(max_dev),
        monotonicity_violations=violations,
        monotonicity_max_excess=float(max_excess),
    )
