"""First-order expansions of the coupled density operator in the coupling ``lam``.

Both routes return the uncoupled product state plus a correction linear in
``lam``:

* :func:`perturb_case_b` sums the first-order terms of the split-operator
  product over its ``2**n`` slices;
* :func:`perturb_case_a` differentiates the Wei-Norman coordinates with
  respect to ``lam`` by central differences.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .lie import LieBasis, adjoint_matrix
from .linalg import anticommutator, as_operator, commutator, dagger
from .measures import free_product_state
from .trotter import BipartiteSystem, SplitSchedule
from .wei_norman import (
    TimeDependentHamiltonian,
    conjugation_matrix,
    evaluate_propagator,
    integrate_wn,
)

__all__ = ["PerturbationResult", "perturb_case_b", "perturb_case_a", "default_dlam"]


@dataclass
class PerturbationResult:
    """Perturbed state; Hermitian but not necessarily positive.

    ``hermiticity_defect`` is the largest entry of ``rho - rho^dag`` before
    the Hermitian part was taken (zero for the default expansions).
    """

    rho: np.ndarray
    reference: np.ndarray
    order_used: int = 1
    remainder_estimate: float = 0.0
    hermiticity_defect: float = 0.0

    @property
    def trace_defect(self) -> float:
        return float(abs(np.trace(self.rho) - 1.0))


def _hermitian_part(rho):
    defect = float(np.max(np.abs(rho - dagger(rho)), initial=0.0))
    return 0.5 * (rho + dagger(rho)), defect


def perturb_case_b(sys: BipartiteSystem, rho_a0, rho_b0, sched: SplitSchedule,
                   bracket: str = "commutator") -> PerturbationResult:
    """First-order expansion of the split-operator evolution.

    With ``tau = t / 2**n``, ``t_i = i tau`` and ``H0`` the free Hamiltonian,

        rho = rho0 - (lam/2) tau^2 sum_i [[H0, V_i], rho0]
                   - i lam tau sum_i [V_i, rho0],

    where ``rho0`` is the freely evolved product state at ``t`` and
    ``V_i = U0(t_i) H_int U0(t_i)^dag``. This is exactly the part of
    ``evolve_scaled(sys, sched) rho(0) (...)^dag`` linear in ``lam``.

    ``bracket="anticommutator"`` puts ``{[H0, V_i], rho0}`` in the first sum
    instead. That term is anti-Hermitian; the Hermitian part of the result
    is returned and the discarded part reported as ``hermiticity_defect``.
    """
    if bracket not in ("commutator", "anticommutator"):
        raise ValueError("bracket must be 'commutator' or 'anticommutator'")
    t, tau, lam = sched.t_end, sched.tau, sys.lam
    rho0 = free_product_state(sys, rho_a0, rho_b0, t)
    h0 = sys.h_free
    w, v = np.linalg.eigh(h0)
    vi = dagger(v) @ sys.h_int @ v  # H_int in the H0 eigenbasis
    corr = np.zeros_like(rho0)
    drift = np.zeros_like(rho0)
    if tau > 0:
        pair = commutator if bracket == "commutator" else anticommutator
        for i in range(sched.steps):
            ph = np.exp(-1j * w * (i * tau))
            hi = v @ (ph[:, None] * vi * ph.conj()[None, :]) @ dagger(v)
            corr += pair(commutator(h0, hi), rho0)
            drift += commutator(hi, rho0)
    rho = rho0 - 0.5 * lam * tau**2 * corr - 1j * lam * tau * drift
    rho, defect = _hermitian_part(rho)
    bound = (abs(lam) * t * np.linalg.norm(sys.h_int, 2)) ** 2
    return PerturbationResult(rho=rho, reference=rho0, order_used=1,
                              remainder_estimate=float(bound), hermiticity_defect=defect)


def default_dlam(lam: float) -> float:
    return max(1e-4, abs(lam) / 100.0)


def perturb_case_a(
    family: Callable[[float], TimeDependentHamiltonian],
    basis: LieBasis,
    rho0,
    lam: float,
    t: float,
    dlam: float | None = None,
    step: float = 1e-3,
    expansion_point: float = 0.0,
    second_order: bool = False,
) -> PerturbationResult:
    """Linear-in-``lam`` state from the Wei-Norman factorization.

    ``family(lam)`` returns the Hamiltonian at coupling ``lam``. The
    coordinates ``g(lam, t)`` are differentiated by central differences
    about ``expansion_point`` and combined into the generator

        X = (dU/dlam) U^dag = sum_i g_i'  Ad[prod_{j<i} exp(g_j B_j)] B_i,

    so that ``rho = rho0 + (lam - lam0) (X rho0 + rho0 X^dag)``.

    ``second_order`` adds ``(lam - lam0)^2 / 2 (X X rho0 + rho0 X X + X rho0 X^dag)``;
    the Hermitian part is kept and the defect reported.
    """
    rho_init = as_operator(rho0)
    if dlam is None:
        dlam = default_dlam(lam)
    lam0 = expansion_point
    runs = {}
    for key, value in (("minus", lam0 - dlam), ("mid", lam0), ("plus", lam0 + dlam)):
        runs[key] = integrate_wn(family(value), basis, t, step, shadow=False)
    g_minus = runs["minus"].coordinates(t)
    g_plus = runs["plus"].coordinates(t)
    g_mid = runs["mid"].coordinates(t)
    dg = (g_plus - g_minus) / (2.0 * dlam)
    ads = [adjoint_matrix(basis, i) for i in range(basis.dim)]
    x = basis.combine(conjugation_matrix(g_mid, ads) @ dg)

    u0 = evaluate_propagator(runs["mid"], t)
    ref = u0 @ rho_init @ dagger(u0)
    dl = lam - lam0
    rho = ref + dl * (x @ ref + ref @ dagger(x))
    order = 1
    if second_order:
        rho = rho + 0.5 * dl**2 * (x @ x @ ref + ref @ x @ x + x @ ref @ dagger(x))
        order = 2
    rho, defect = _hermitian_part(rho)
    return PerturbationResult(rho=rho, reference=ref, order_used=order,
                              remainder_estimate=float((abs(dl) * np.linalg.norm(x, 2)) ** 2),
                              hermiticity_defect=defect)
