"""Wei-Norman factorization of time-dependent propagators.

For ``H(t) = sum_k a_k(t) H_k`` whose generators close to a finite Lie
algebra with basis ``B_1..B_n``, the propagator is written as

    U(t) = exp(g_1(t) B_1) exp(g_2(t) B_2) ... exp(g_n(t) B_n)

with ``g_i(0) = 0``. Differentiating gives the linear system
``M(g) gdot = a`` where column ``i`` of ``M(g)`` holds the coordinates of
``B_i`` conjugated by the factors to its left. The conjugations are
computed as exponentials of adjoint matrices, so no closed form for the
inverse of ``M`` is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError, FactorizationBreakdown, StepTooLarge
from .lie import LieBasis, adjoint_matrix, expand_in_basis
from .linalg import expm

__all__ = [
    "TimeDependentHamiltonian",
    "FactoredPropagator",
    "conjugation_matrix",
    "wn_rhs",
    "integrate_wn",
    "evaluate_propagator",
    "propagator_residual",
]

COND_MAX = 1e12


def _as_coefficient(c) -> Callable[[float], complex]:
    if callable(c):
        return c
    value = complex(c)
    return lambda t: value


@dataclass(eq=False)
class TimeDependentHamiltonian:
    """``H(t) = sum_k coefficient_k(t) * generator_k``.

    A generator is either an integer index into the :class:`LieBasis` the
    Hamiltonian is used with, or an operator that is expanded in it.
    Coefficients are callables of time or constants.
    """

    terms: Sequence[tuple]

    def __post_init__(self):
        self.terms = [(_as_coefficient(c), g) for c, g in self.terms]

    def coefficient_values(self, t: float) -> np.ndarray:
        return np.array([c(t) for c, _ in self.terms], dtype=complex)

    def generator_coords(self, basis: LieBasis) -> np.ndarray:
        """``(n_terms, n)`` array of basis coordinates of each generator."""
        rows = []
        for _, gen in self.terms:
            if isinstance(gen, (int, np.integer)):
                if not 0 <= gen < basis.dim:
                    raise IndexError(f"generator index {gen} outside basis of size {basis.dim}")
                e = np.zeros(basis.dim, dtype=complex)
                e[gen] = 1.0
                rows.append(e)
            else:
                coords, res = expand_in_basis(gen, basis)
                scale = max(1.0, float(np.linalg.norm(gen)))
                if res > 1e3 * basis.closure_tol * scale:
                    raise ValueError(f"generator is not in the span of the basis (residual {res:.3e})")
                rows.append(coords)
        return np.array(rows)

    def coords(self, t: float, basis: LieBasis) -> np.ndarray:
        """Basis coordinates of ``H(t)``."""
        return self.coefficient_values(t) @ self.generator_coords(basis)

    def matrix(self, t: float, basis: LieBasis | None = None) -> np.ndarray:
        ops = []
        for _, gen in self.terms:
            if isinstance(gen, (int, np.integer)):
                if basis is None:
                    raise ValueError("index generators need a basis")
                ops.append(basis.elements[gen])
            else:
                ops.append(np.asarray(gen, dtype=complex))
        vals = self.coefficient_values(t)
        return sum(v * op for v, op in zip(vals, ops))


def conjugation_matrix(g, ads) -> np.ndarray:
    """``M(g)``: column ``i`` is ``prod_{j<i} exp(g_j ad_j)`` applied to ``e_i``."""
    n = len(ads)
    m = np.empty((n, n), dtype=complex)
    p = np.eye(n, dtype=complex)
    for i in range(n):
        m[:, i] = p[:, i]
        if i < n - 1 and g[i] != 0:
            p = p @ expm(g[i] * ads[i])
    return m


def _solve(m, a, cond_max, t):
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > cond_max:
        raise FactorizationBreakdown(
            f"Wei-Norman factorization breaks down at t={t} (cond {cond:.3e})",
            time=t, condition=float(cond),
        )
    return np.linalg.solve(m, a)


def wn_rhs(g, a, basis: LieBasis, cond_max: float = COND_MAX, t=None) -> np.ndarray:
    """Solve ``M(g) gdot = a`` for ``gdot``.

    ``a`` is the coordinate vector of ``(dU/dt) U^{-1}`` in the basis, so for
    a Schroedinger propagator it is ``-i`` times the coordinates of ``H(t)``.
    """
    g = np.asarray(g, dtype=complex)
    a = np.asarray(a, dtype=complex)
    if g.shape != (basis.dim,) or a.shape != (basis.dim,):
        raise DimensionError("g and a must have one entry per basis element")
    ads = [adjoint_matrix(basis, i) for i in range(basis.dim)]
    return _solve(conjugation_matrix(g, ads), a, cond_max, t)


@dataclass(frozen=True, eq=False)
class FactoredPropagator:
    """Wei-Norman coordinates ``g`` (and ``gdot``) on a time grid."""

    basis: LieBasis
    grid: np.ndarray  # (K+1,)
    g: np.ndarray  # (K+1, n)
    gdot: np.ndarray  # (K+1, n)
    error_estimate: float = float("nan")

    def coordinates(self, t: float) -> np.ndarray:
        """Cubic Hermite interpolation of ``g`` at ``t``."""
        grid = self.grid
        if t < grid[0] - 1e-12 or t > grid[-1] + 1e-12:
            raise ValueError(f"t={t} outside [{grid[0]}, {grid[-1]}]")
        t = min(max(t, grid[0]), grid[-1])
        k = int(np.searchsorted(grid, t, side="right")) - 1
        k = min(k, len(grid) - 2)
        h = grid[k + 1] - grid[k]
        s = (t - grid[k]) / h
        if s == 0.0:
            return self.g[k].copy()
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        return (h00 * self.g[k] + h10 * h * self.gdot[k]
                + h01 * self.g[k + 1] + h11 * h * self.gdot[k + 1])

    def csv_rows(self):
        for t, row in zip(self.grid, self.g):
            out = [float(t)]
            for z in row:
                out += [float(z.real), float(z.imag)]
            yield out

    def csv_header(self):
        head = ["t"]
        for i in range(self.basis.dim):
            head += [f"re_g{i + 1}", f"im_g{i + 1}"]
        return head

    def to_dict(self) -> dict:
        return {
            "basis": self.basis.to_dict(),
            "grid": self.grid.tolist(),
            "g_re": self.g.real.tolist(),
            "g_im": self.g.imag.tolist(),
            "gdot_re": self.gdot.real.tolist(),
            "gdot_im": self.gdot.imag.tolist(),
            "error_estimate": self.error_estimate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FactoredPropagator":
        return cls(
            basis=LieBasis.from_dict(d["basis"]),
            grid=np.array(d["grid"], dtype=float),
            g=np.array(d["g_re"]) + 1j * np.array(d["g_im"]),
            gdot=np.array(d["gdot_re"]) + 1j * np.array(d["gdot_im"]),
            error_estimate=d.get("error_estimate", float("nan")),
        )


def _rk4(rhs, n, t_end, steps):
    h = t_end / steps
    grid = np.linspace(0.0, t_end, steps + 1)
    g = np.zeros((steps + 1, n), dtype=complex)
    gd = np.zeros((steps + 1, n), dtype=complex)
    y = np.zeros(n, dtype=complex)
    k1 = rhs(0.0, y)
    gd[0] = k1
    for k in range(steps):
        t = grid[k]
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        g[k + 1] = y
        k1 = rhs(grid[k + 1], y)
        gd[k + 1] = k1
    return grid, g, gd


def integrate_wn(
    h: TimeDependentHamiltonian,
    basis: LieBasis,
    t_end: float,
    step: float,
    ode_tol: float = 1e-6,
    shadow: bool = True,
    cond_max: float = COND_MAX,
) -> FactoredPropagator:
    """Integrate the Wei-Norman equations with fixed-step RK4.

    The propagator solves ``dU/dt = -i H(t) U``, i.e. the factor exponents
    ``g_i B_i`` absorb the ``-i``. With ``shadow`` a second run at half the
    step estimates the error; a discrepancy above ``ode_tol`` raises
    :class:`StepTooLarge`.
    """
    if t_end <= 0 or step <= 0:
        raise ValueError("t_end and step must be positive")
    coeff_coords = h.generator_coords(basis)
    ads = [adjoint_matrix(basis, i) for i in range(basis.dim)]

    def rhs(t, g):
        a = -1j * (h.coefficient_values(t) @ coeff_coords)
        return _solve(conjugation_matrix(g, ads), a, cond_max, t)

    steps = max(1, int(np.ceil(t_end / step - 1e-9)))
    grid, g, gd = _rk4(rhs, basis.dim, t_end, steps)
    err = float("nan")
    if shadow:
        _, g2, _ = _rk4(rhs, basis.dim, t_end, 2 * steps)
        err = float(np.max(np.abs(g2[::2] - g)))
        if err > ode_tol:
            raise StepTooLarge(
                f"step-halving discrepancy {err:.3e} exceeds ode_tol={ode_tol:.1e}; "
                f"try step <= {step / 2:g}",
                discrepancy=err,
            )
    return FactoredPropagator(basis=basis, grid=grid, g=g, gdot=gd, error_estimate=err)


def evaluate_propagator(fp: FactoredPropagator, t: float) -> np.ndarray:
    """``prod_i exp(g_i(t) B_i)`` in basis order."""
    g = fp.coordinates(t)
    u = np.eye(fp.basis.op_dim, dtype=complex)
    for gi, b in zip(g, fp.basis.elements):
        if gi != 0:
            u = u @ expm(gi * b)
    return u


def propagator_residual(fp: FactoredPropagator, h: TimeDependentHamiltonian, times,
                        eps: float = 1e-5) -> float:
    """Largest ``||(dU/dt) U^{-1} + i H(t)||_F`` over ``times``.

    ``dU/dt`` comes from central differences of the interpolated
    factorization (one-sided at the grid ends).
    """
    lo, hi = fp.grid[0], fp.grid[-1]
    worst = 0.0
    for t in times:
        ta, tb = max(lo, t - eps), min(hi, t + eps)
        du = (evaluate_propagator(fp, tb) - evaluate_propagator(fp, ta)) / (tb - ta)
        u = evaluate_propagator(fp, t)
        r = du @ np.linalg.inv(u) + 1j * h.matrix(t, fp.basis)
        worst = max(worst, float(np.linalg.norm(r)))
    return worst
