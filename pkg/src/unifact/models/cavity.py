"""Two coupled qubits exchanging excitations with one field mode.

    H = w/2 (sz_A + sz_B) + g (sp_A sm_B + sm_A sp_B)
        + lam sum_i (sp_i a + sm_i a^dag) + w_f a^dag a

State ordering is qubit A x qubit B x Fock, with ``|e>`` before ``|g>``
and Fock levels ascending. The two-qubit dynamics from ``|e, e>`` stays in
the symmetric triplet ``{|gg>, |EG>, |ee>}``, ``|EG> = (|ge> + |eg>)/sqrt 2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import poisson

from ..errors import CutoffLeakage
from ..linalg import partial_trace, tensor
from ..operators import I2, SIGMA_MINUS, SIGMA_PLUS, SZ, destroy, number

__all__ = [
    "Example1Params",
    "Example1Trajectory",
    "AnalyticFBlock",
    "poisson_distribution",
    "build_example1",
    "excitation_number",
    "simulate_example1",
    "analytic_f_block",
    "analytic_rho_ab",
    "delta_d_example1",
    "deviation_table",
    "TRIPLET",
    "SINGLET",
]

_s = 1 / np.sqrt(2)
# rows: |gg>, |EG>, |ee> in the (ee, eg, ge, gg) two-qubit ordering
TRIPLET = np.array([[0, 0, 0, 1],
                    [0, _s, _s, 0],
                    [1, 0, 0, 0]], dtype=complex)
SINGLET = np.array([0, _s, -_s, 0], dtype=complex)
REFERENCE = np.diag([0.0, 0.0, 1.0]).astype(complex)


def poisson_distribution(mean: float, n_max: int) -> list[tuple[int, float]]:
    """Poisson photon statistics truncated at ``n_max`` and renormalized."""
    n = np.arange(n_max + 1)
    p = poisson.pmf(n, mean)
    p /= p.sum()
    return [(int(k), float(v)) for k, v in zip(n, p)]


@dataclass
class Example1Params:
    omega: float = 1.0
    omega_f: float = 1.0
    g: float = 0.2
    lam: float = 0.2
    fock_cutoff: int = 16
    photon_dist: list = field(default_factory=lambda: poisson_distribution(2.0, 12))

    def __post_init__(self):
        self.photon_dist = [(int(n), float(p)) for n, p in self.photon_dist]
        ps = np.array([p for _, p in self.photon_dist])
        if np.any(ps < 0):
            raise ValueError("photon probabilities must be non-negative")
        if abs(ps.sum() - 1.0) > 1e-12:
            raise ValueError(f"photon probabilities sum to {ps.sum():.15g}, not 1")
        n_max = max(n for n, _ in self.photon_dist)
        if self.fock_cutoff < n_max + 3:
            raise ValueError(f"fock_cutoff {self.fock_cutoff} < max photon number + 3 = {n_max + 3}")

    @property
    def p(self) -> dict[int, float]:
        return dict(self.photon_dist)


def build_example1(params: Example1Params):
    """Dense Hamiltonian and basis labels ``"a,b,n"``."""
    nf = params.fock_cutoff
    a = destroy(nf)
    i_f = np.eye(nf, dtype=complex)
    h = 0.5 * params.omega * (tensor(SZ, I2, i_f) + tensor(I2, SZ, i_f))
    h += params.g * (tensor(SIGMA_PLUS, SIGMA_MINUS, i_f) + tensor(SIGMA_MINUS, SIGMA_PLUS, i_f))
    h += params.lam * (tensor(SIGMA_PLUS, I2, a) + tensor(SIGMA_MINUS, I2, a.conj().T)
                       + tensor(I2, SIGMA_PLUS, a) + tensor(I2, SIGMA_MINUS, a.conj().T))
    h += params.omega_f * tensor(I2, I2, number(nf))
    labels = [f"{qa},{qb},{n}" for qa in "eg" for qb in "eg" for n in range(nf)]
    return h, labels


def excitation_number(params: Example1Params) -> np.ndarray:
    """``(sz_A + sz_B)/2 + a^dag a + 1``, conserved by the Hamiltonian."""
    nf = params.fock_cutoff
    i_f = np.eye(nf, dtype=complex)
    return (0.5 * (tensor(SZ, I2, i_f) + tensor(I2, SZ, i_f))
            + tensor(I2, I2, number(nf)) + np.eye(4 * nf))


def initial_state(params: Example1Params) -> np.ndarray:
    nf = params.fock_cutoff
    ee = np.zeros((4, 4), dtype=complex)
    ee[0, 0] = 1.0
    field_state = np.zeros((nf, nf), dtype=complex)
    for n, p in params.photon_dist:
        field_state[n, n] = p
    return tensor(ee, field_state)


@dataclass
class Example1Trajectory:
    times: np.ndarray
    rho_qubits: np.ndarray  # (K, 4, 4) in (ee, eg, ge, gg)
    rho_ab: np.ndarray  # (K, 3, 3) in (gg, EG, ee)
    singlet_population: np.ndarray
    trace: np.ndarray
    min_eigenvalue: np.ndarray
    top_fock_population: np.ndarray


def simulate_example1(params: Example1Params, times, leakage_tol: float = 1e-8) -> Example1Trajectory:
    """Exact dense evolution of the initial state ``|ee><ee| x sum_n p(n)|n><n|``.

    One eigendecomposition of the Hamiltonian serves every time point.
    Raises :class:`CutoffLeakage` if the top Fock level ever carries more
    than ``leakage_tol`` population.
    """
    times = np.asarray(times, dtype=float)
    h, _ = build_example1(params)
    w, v = np.linalg.eigh(h)
    rho0 = v.conj().T @ initial_state(params) @ v
    nf = params.fock_cutoff
    top = np.zeros(nf)
    top[-1] = 1.0
    top_proj = np.kron(np.ones(4), top)
    k = len(times)
    rho_q = np.empty((k, 4, 4), dtype=complex)
    rho3 = np.empty((k, 3, 3), dtype=complex)
    singlet = np.empty(k)
    trace = np.empty(k)
    min_eig = np.empty(k)
    top_pop = np.empty(k)
    gap = w[:, None] - w[None, :]
    for idx, t in enumerate(times):
        rho = v @ (rho0 * np.exp(-1j * gap * t)) @ v.conj().T
        top_pop[idx] = float(np.real(np.diag(rho)) @ top_proj)
        if top_pop[idx] > leakage_tol:
            raise CutoffLeakage(
                f"top Fock level population {top_pop[idx]:.3e} at t={t}; increase fock_cutoff",
                population=top_pop[idx], suggested_cutoff=nf + 4,
            )
        rq = partial_trace(rho, [2, 2, nf], [0, 1])
        rho_q[idx] = rq
        rho3[idx] = TRIPLET @ rq @ TRIPLET.conj().T
        singlet[idx] = float(np.real(SINGLET.conj() @ rq @ SINGLET))
        trace[idx] = float(np.real(np.trace(rq)))
        min_eig[idx] = float(np.linalg.eigvalsh(0.5 * (rq + rq.conj().T))[0])
    return Example1Trajectory(times, rho_q, rho3, singlet, trace, min_eig, top_pop)


@dataclass
class AnalyticFBlock:
    n: int
    f_gg: complex
    f_ee: complex
    f_eg: complex
    e_plus: float
    e_minus: float
    e_0: float
    omega_rabi: float
    phi: float
    theta: float = np.pi / 2


def analytic_f_block(params: Example1Params, n: int, t: float) -> AnalyticFBlock:
    """Closed-form amplitudes transcribed literally (``theta = pi/2``)."""
    theta = np.pi / 2
    phi = np.arctan(np.sqrt((n + 2) / (n + 1)))
    omega_r = np.sqrt(16 * n + 24) * abs(params.g)
    e_plus = omega_r * (np.cos(theta) + 1) / 2 + params.omega_f * (n + 1)
    e_minus = omega_r * (np.cos(theta) - 1) / 2 + params.omega_f * (n + 1)
    e_0 = (n + 1) * params.omega_f
    s2p = np.sin(2 * phi)
    f_gg = (0.25 * s2p * np.sin(theta) * np.exp(-1j * e_plus * t)
            + 0.5 * s2p * np.cos(theta / 2) ** 2 * np.exp(-1j * e_minus * t)
            - 0.5 * s2p * np.exp(-1j * e_0 * t))
    f_ee = (np.sin(phi) ** 2 * np.sin(theta / 2) ** 2 * np.exp(-1j * e_plus * t)
            + np.cos(phi) ** 2 * np.exp(-1j * e_0 * t)
            + np.sin(phi) ** 2 * np.cos(theta / 2) ** 2 * np.exp(-1j * e_minus * t))
    f_eg = np.sin(theta) * np.sin(phi) * np.sin(omega_r * t / 2)
    return AnalyticFBlock(n, complex(f_gg), complex(f_ee), complex(f_eg),
                          float(e_plus), float(e_minus), float(e_0), float(omega_r), float(phi))


def analytic_rho_ab(params: Example1Params, t: float, mode: str = "printed") -> np.ndarray:
    """Closed-form 3x3 state in ``(|gg>, |EG>, |ee>)``.

    ``mode="printed"`` keeps ``p(n)^2`` and plain squares ``f^2`` exactly as
    published. ``mode="modulus"`` uses ``p(n) |f|^2`` on the diagonal and
    ``f_x conj(f_y)`` above it, filling the lower triangle Hermitian.
    """
    if mode not in ("printed", "modulus"):
        raise ValueError("mode must be 'printed' or 'modulus'")
    p = params.p
    ns = sorted(p)
    blocks = {n: analytic_f_block(params, n, t) for n in range(ns[0], ns[-1] + 3)}

    def pp(n):
        return p.get(n, 0.0)

    if mode == "printed":
        def sq(n, z):
            return pp(n) ** 2 * z**2

        def cross(x, y):
            return x * y
    else:
        def sq(n, z):
            return pp(n) * abs(z) ** 2

        def cross(x, y):
            return x * np.conj(y)

    r = np.zeros((3, 3), dtype=complex)
    for n in ns:
        b0, b1, b2 = blocks[n], blocks[n + 1], blocks[n + 2]
        r[0, 0] += sq(n, b0.f_gg)
        r[1, 1] += sq(n, b0.f_eg)
        r[2, 2] += sq(n, b0.f_ee)
        r[0, 1] += pp(n + 1) * pp(n) * cross(b1.f_gg, b0.f_eg)
        r[0, 2] += pp(n + 2) * pp(n) * cross(b2.f_ee, b0.f_gg)
        r[1, 2] += pp(n) * pp(n + 1) * cross(b1.f_eg, b0.f_ee)
    if mode == "printed":
        r[1, 0], r[2, 0], r[2, 1] = r[0, 1], r[0, 2], r[1, 2]
    else:
        r[1, 0], r[2, 0], r[2, 1] = np.conj(r[0, 1]), np.conj(r[0, 2]), np.conj(r[1, 2])
    return r


def delta_d_example1(rho_ab) -> float:
    """``sum_ij |rho_ij|^2 - 2 rho_33 + 1``: distance to ``|ee><ee|``."""
    rho_ab = np.asarray(rho_ab, dtype=complex)
    return float(np.sum(np.abs(rho_ab) ** 2) - 2.0 * rho_ab[2, 2].real + 1.0)


_ENTRY_LABELS = ("gg", "EG", "ee")


def deviation_table(params: Example1Params, times, trajectory: Example1Trajectory | None = None):
    """Per-entry comparison of the closed forms against the dense simulation.

    Returns ``(header, rows)``; one row per ``(t, i, j)``.
    """
    times = np.asarray(times, dtype=float)
    if trajectory is None:
        trajectory = simulate_example1(params, times)
    header = ["t", "entry", "sim_re", "sim_im", "printed_re", "printed_im",
              "modulus_re", "modulus_im", "dev_printed", "dev_modulus"]
    rows = []
    for k, t in enumerate(times):
        sim = trajectory.rho_ab[k]
        pr = analytic_rho_ab(params, t, "printed")
        mo = analytic_rho_ab(params, t, "modulus")
        for i in range(3):
            for j in range(3):
                rows.append([float(t), f"{_ENTRY_LABELS[i]}-{_ENTRY_LABELS[j]}",
                             sim[i, j].real, sim[i, j].imag, pr[i, j].real, pr[i, j].imag,
                             mo[i, j].real, mo[i, j].imag,
                             abs(pr[i, j] - sim[i, j]), abs(mo[i, j] - sim[i, j])])
    return header, rows
