"""Two qubits under pure dephasing by bosonic baths at zero temperature.

    H = w0 (sz_a + sz_b) + sum_l sum_w g_wl sz_l (a_wl + a_wl^dag) + sum w a^dag a

Two-qubit basis labels follow ``|11> = |e_a e_b>, |12> = |e_a g_b>,
|21> = |g_a e_b>, |22> = |g_a g_b>``: label 1 is ``|e>`` (coupling ``+g``) and
label 2 is ``|g>`` (coupling ``-g``). Each density-matrix element is
multiplied by a decoherence factor ``F_ijkl`` whose exponent sums one
contribution per qubit, which is exact when every bath mode couples to a
single qubit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate

from ..errors import CutoffLeakage, InvalidStateError, QuadratureError
from ..linalg import as_density, dagger, partial_trace, propagator, tensor
from ..operators import SZ, destroy, number

__all__ = [
    "Example2Params",
    "DisplacementFactors",
    "ohmic",
    "delta_factor",
    "decoherence_exponent",
    "decoherence_factor",
    "decoherence_matrix",
    "trapezoid_exponent",
    "free_two_qubit_state",
    "rho_ab_dephasing",
    "simulate_example2",
    "brute_force_example2",
    "wn_displacement_factors",
    "displacement_product",
    "single_mode_exponent",
    "delta_d_example2",
]

LABEL_SIGN = {1: 1.0, 2: -1.0}


def ohmic(omega_c: float = 5.0, scale: float = 1.0) -> Callable[[float], float]:
    """``scale * (w / w_c) exp(-w / w_c)``."""
    return lambda w: scale * (w / omega_c) * np.exp(-w / omega_c)


def _as_fn(c):
    if callable(c):
        return c
    value = float(c)
    return lambda w: value


@dataclass
class Example2Params:
    """Bath description: discrete ``modes`` or a continuum.

    ``modes`` is a list of ``(w_k, g_ka, g_kb)``. For a continuum give
    ``spectral_density`` on ``[0, omega_max]`` and coupling functions
    (or constants) ``g_a``, ``g_b``.
    """

    omega0: float = 1.0
    modes: list | None = None
    spectral_density: Callable | None = None
    omega_max: float = math.inf
    g_a: Callable | float = 0.0
    g_b: Callable | float = 0.0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.modes is None and self.spectral_density is None:
            raise ValueError("give either discrete modes or a spectral density")
        if self.modes is not None:
            self.modes = [(float(w), float(ga), float(gb)) for w, ga, gb in self.modes]
            if any(w <= 0 for w, _, _ in self.modes):
                raise ValueError("mode frequencies must be positive")
        self.g_a = _as_fn(self.g_a)
        self.g_b = _as_fn(self.g_b)

    @property
    def discrete(self) -> bool:
        return self.modes is not None

    def coupling(self, qubit: str, omega):
        if qubit == "a":
            return self.g_a(omega)
        if qubit == "b":
            return self.g_b(omega)
        raise ValueError("qubit must be 'a' or 'b'")


def delta_factor(g_i: float, g_j: float, omega, t: float):
    """``2 (g_i - g_j)^2 sin^2(w t / 2) / w^2`` with its ``w -> 0`` limit."""
    omega = np.asarray(omega, dtype=float)
    x = 0.5 * omega * t
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, omega)
    regular = np.sin(x) ** 2 / safe**2
    series = 0.25 * t**2 * (1.0 - x**2 / 3.0)
    out = 2.0 * (g_i - g_j) ** 2 * np.where(small, series, regular)
    return out if out.ndim else float(out)


def _pair_coupling(params, qubit, i, k, omega):
    g = params.coupling(qubit, omega)
    return LABEL_SIGN[i] * g, LABEL_SIGN[k] * g


def _qubit_exponent(params: Example2Params, qubit: str, i: int, k: int, t: float,
                    epsabs: float, limit: int) -> float:
    if i == k:
        return 0.0
    if params.discrete:
        total = 0.0
        for w, ga, gb in params.modes:
            g = ga if qubit == "a" else gb
            total += delta_factor(LABEL_SIGN[i] * g, LABEL_SIGN[k] * g, w, t)
        return float(total)

    def integrand(w):
        gi, gk = _pair_coupling(params, qubit, i, k, w)
        return delta_factor(gi, gk, w, t) * params.spectral_density(w)

    # a breakpoint per oscillation keeps the adaptive rule stable at long times
    upper = params.omega_max
    if math.isfinite(upper) and t > 0:
        pts = np.arange(1, int(upper * t / (2 * np.pi)) + 1) * 2 * np.pi / t
        pts = pts[pts < upper][:limit // 2]
    else:
        pts = None
    val, err = integrate.quad(integrand, 0.0, upper, epsabs=epsabs, epsrel=0.0,
                              limit=limit, points=pts if pts is not None and len(pts) else None)
    if not np.isfinite(val) or err > 10 * epsabs:
        raise QuadratureError(f"decoherence integral did not converge (error {err:.2e})")
    return float(val)


def decoherence_exponent(params: Example2Params, indices, t: float,
                         epsabs: float = 1e-10, limit: int = 2000) -> complex:
    """``int [Delta_ik + conj(Delta_jl)] rho(w) dw`` (a sum for discrete modes)."""
    i, j, k, l = indices
    ea = _qubit_exponent(params, "a", i, k, t, epsabs, limit)
    eb = _qubit_exponent(params, "b", j, l, t, epsabs, limit)
    return complex(ea + np.conj(eb))


def decoherence_factor(params: Example2Params, indices, t: float, **kw) -> complex:
    """``F_ijkl(t) = exp(-exponent)``; equals 1 when ``i == k`` and ``j == l``."""
    return complex(np.exp(-decoherence_exponent(params, indices, t, **kw)))


_LABELS = [(1, 1), (1, 2), (2, 1), (2, 2)]


def decoherence_matrix(params: Example2Params, t: float, **kw) -> np.ndarray:
    """4x4 array of ``F_ijkl`` with rows ``(i, j)`` and columns ``(k, l)``."""
    epsabs, limit = kw.get("epsabs", 1e-10), kw.get("limit", 2000)
    # each qubit contributes through its own label pair only, symmetric in the pair
    e = {q: _qubit_exponent(params, q, 1, 2, t, epsabs, limit) for q in ("a", "b")}

    def part(q, x, y):
        return 0.0 if x == y else e[q]

    f = np.ones((4, 4), dtype=complex)
    for r, (i, j) in enumerate(_LABELS):
        for c, (k, l) in enumerate(_LABELS):
            if (i, j) != (k, l):
                f[r, c] = np.exp(-(part("a", i, k) + np.conj(part("b", j, l))))
    return f


def trapezoid_exponent(params: Example2Params, indices, t: float, omega_max: float,
                       points: int = 100_001, end_correction: bool = True) -> float:
    """Independent check of :func:`decoherence_exponent` on a uniform grid.

    The integrand's slope at ``w = 0`` does not vanish, so the plain
    trapezoid rule carries an ``h^2/12 [f'(b) - f'(a)]`` error;
    ``end_correction`` subtracts it using one-sided second-order slopes.
    """
    i, j, k, l = indices
    w = np.linspace(0.0, omega_max, points)
    h = w[1] - w[0]
    rho = params.spectral_density(w)
    total = 0.0
    for qubit, (x, y) in (("a", (i, k)), ("b", (j, l))):
        if x == y:
            continue
        g = np.broadcast_to(params.coupling(qubit, w), w.shape)
        f = delta_factor(LABEL_SIGN[x] * g, LABEL_SIGN[y] * g, w, t) * rho
        total += integrate.trapezoid(f, w)
        if end_correction:
            da = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
            db = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
            total -= h**2 / 12 * (db - da)
    return float(total)


def free_two_qubit_state(omega0: float, rho_a0, rho_b0, t: float) -> np.ndarray:
    """Two-qubit state evolved by ``w0 (sz_a + sz_b)`` alone."""
    u = propagator(omega0 * SZ, t)
    return tensor(u @ rho_a0 @ dagger(u), u @ rho_b0 @ dagger(u))


def rho_ab_dephasing(rho0, f, tol: float = 1e-10) -> np.ndarray:
    """Element-wise ``rho0 * F``; raises if the result is not a valid state."""
    rho = np.asarray(rho0, dtype=complex) * np.asarray(f, dtype=complex)
    try:
        return as_density(rho, tol)
    except InvalidStateError as exc:
        raise InvalidStateError(f"decoherence factors give an invalid state: {exc}") from exc


def simulate_example2(params: Example2Params, rho_a0, rho_b0, times, **kw):
    """``(rho_ab(t), rho0(t))`` pairs over ``times`` from the decoherence factors."""
    out = []
    for t in np.asarray(times, dtype=float):
        rho0 = free_two_qubit_state(params.omega0, rho_a0, rho_b0, t)
        out.append((rho_ab_dephasing(rho0, decoherence_matrix(params, t, **kw)), rho0))
    return out


def brute_force_example2(params: Example2Params, rho_a0, rho_b0, times, cutoff: int = 6,
                         leakage_tol: float = 1e-8) -> np.ndarray:
    """Dense system-plus-bath evolution for discrete modes, bath traced out.

    The bath starts in the vacuum. Returns a ``(len(times), 4, 4)`` stack.
    """
    if not params.discrete:
        raise ValueError("brute force needs discrete modes")
    m = len(params.modes)
    dims = [2, 2] + [cutoff] * m
    eye = [np.eye(d, dtype=complex) for d in dims]

    def lift(op, pos):
        f = list(eye)
        f[pos] = op
        return tensor(*f)

    a = destroy(cutoff)
    h = params.omega0 * (lift(SZ, 0) + lift(SZ, 1))
    for k, (w, ga, gb) in enumerate(params.modes):
        x = lift(a + dagger(a), 2 + k)
        h = h + w * lift(number(cutoff), 2 + k) + (ga * lift(SZ, 0) + gb * lift(SZ, 1)) @ x
    vac = np.zeros((cutoff**m, cutoff**m), dtype=complex)
    vac[0, 0] = 1.0
    rho0 = tensor(rho_a0, rho_b0, vac)
    w, v = np.linalg.eigh(h)
    rt = dagger(v) @ rho0 @ v
    gap = w[:, None] - w[None, :]
    top_levels = [np.diag(lift(np.diag((np.arange(cutoff) == cutoff - 1).astype(float)), 2 + k)).real
                  for k in range(m)]
    out = np.empty((len(times), 4, 4), dtype=complex)
    for idx, t in enumerate(np.asarray(times, dtype=float)):
        rho = v @ (rt * np.exp(-1j * gap * t)) @ dagger(v)
        diag = np.diag(rho).real
        leak = max(float(diag @ tl) for tl in top_levels)
        if leak > leakage_tol:
            raise CutoffLeakage(f"top Fock level population {leak:.3e} at t={t}",
                                population=leak, suggested_cutoff=cutoff + 2)
        out[idx] = partial_trace(rho, [4, cutoff**m], [0])
    return out


class DisplacementFactors(NamedTuple):
    """``u = exp(f) exp(A a^dag) exp(B a)`` for ``|e>``; ``C, D, h`` for ``|g>``."""

    A: complex
    B: complex
    f: complex

    @property
    def C(self) -> complex:
        return -self.A

    @property
    def D(self) -> complex:
        return -self.B

    @property
    def h(self) -> complex:
        return self.f


def wn_displacement_factors(g: float, omega: float, t: float,
                            convention: str = "printed") -> DisplacementFactors:
    """Closed-form factor coefficients for a single driven mode.

    ``A = -(g/w)(e^{iwt} - 1)``, ``B = -conj(A)`` and
    ``f = -i (g^2/w) t + (g^2/w^2)(1 - e^{-iwt})`` as published.
    ``convention="derived"`` returns ``-f`` instead, which is what solving
    ``i du/dt = g (a^dag e^{iwt} + a e^{-iwt}) u`` in this factor order gives.
    """
    if omega == 0:
        raise ValueError("closed forms are singular at omega = 0")
    if convention not in ("printed", "derived"):
        raise ValueError("convention must be 'printed' or 'derived'")
    a_coef = -(g / omega) * (np.exp(1j * omega * t) - 1.0)
    b_coef = -np.conj(a_coef)
    f = -1j * g**2 / omega * t + g**2 / omega**2 * (1.0 - np.exp(-1j * omega * t))
    if convention == "derived":
        f = -f
    return DisplacementFactors(complex(a_coef), complex(b_coef), complex(f))


def displacement_product(g: float, omega: float, t: float, cutoff: int,
                         convention: str = "printed", ground: bool = False) -> np.ndarray:
    """``exp(f) expm(A a^dag) expm(B a)`` on a truncated Fock space.

    Both exponentials are of nilpotent matrices and are summed exactly.
    """
    fac = wn_displacement_factors(g, omega, t, convention)
    a_c, b_c, f = (fac.C, fac.D, fac.h) if ground else (fac.A, fac.B, fac.f)
    a = destroy(cutoff)
    return np.exp(f) * _nilpotent_exp(a_c * dagger(a)) @ _nilpotent_exp(b_c * a)


def _nilpotent_exp(x):
    out = np.eye(x.shape[0], dtype=complex)
    term = out
    for k in range(1, x.shape[0]):
        term = term @ x / k
        out = out + term
    return out


def single_mode_exponent(g: float, omega: float, t: float) -> float:
    """Exponent of ``F`` for one mode coupled to one qubit, ``|e>`` vs ``|g>``."""
    return float(delta_factor(g, -g, omega, t))


def delta_d_example2(rho_ab, rho0) -> float:
    """``sum_{ijkl} (rho - rho0)_{ij,kl} (rho - rho0)_{kl,ij}``."""
    d = np.asarray(rho_ab, dtype=complex) - np.asarray(rho0, dtype=complex)
    total = 0.0 + 0.0j
    for r in range(4):
        for c in range(4):
            total += d[r, c] * d[c, r]
    return float(total.real)
