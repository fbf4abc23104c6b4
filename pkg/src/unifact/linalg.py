"""Dense complex matrix kernel.

Operators are plain ``numpy`` complex arrays of shape ``(d, d)``. Density
operators are the same arrays, validated by :func:`as_density`.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError, InvalidStateError, NotHermitianError

__all__ = [
    "as_operator",
    "as_density",
    "is_hermitian",
    "tensor",
    "commutator",
    "anticommutator",
    "dagger",
    "expm",
    "propagator",
    "partial_trace",
    "hs_inner",
    "hs_norm_sq",
    "hermitian_fn",
    "spectral_norm",
    "ZERO_EIGENVALUE",
]

# eigenvalues below this are treated as exact zeros by hermitian_fn
ZERO_EIGENVALUE = 1e-14


def as_operator(a) -> np.ndarray:
    """Coerce ``a`` to a finite square complex matrix."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"operator must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("operator has non-finite entries")
    return a


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(a - dagger(a)), initial=0.0) <= tol)


def as_density(rho, tol: float = 1e-10) -> np.ndarray:
    """Validate ``rho`` as a density operator and return it as an array.

    Checks Hermiticity (entrywise), unit trace and positivity, each to
    within ``tol``.
    """
    rho = as_operator(rho)
    herm = np.max(np.abs(rho - dagger(rho)), initial=0.0)
    if herm > tol:
        raise InvalidStateError(f"density operator not Hermitian (defect {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"density operator trace {tr.real:.12g} != 1")
    lo = np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))[0]
    if lo < -tol:
        raise InvalidStateError(f"density operator has negative eigenvalue {lo:.3e}")
    return rho


def tensor(*ops) -> np.ndarray:
    """Kronecker product; the first factor is the most significant index."""
    if not ops:
        raise ValueError("tensor needs at least one operand")
    out = as_operator(ops[0])
    for b in ops[1:]:
        out = np.kron(out, as_operator(b))
    return out


def _check_same(a, b):
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_same(a, b)
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_same(a, b)
    return a @ b + b @ a


# --- matrix exponential ----------------------------------------------------

_PADE_COEFFS = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0, 960960.0,
         16380.0, 182.0, 1.0),
}

# 1-norm bounds for each Pade degree (Higham 2005, double precision)
_THETA = ((3, 1.495585217958292e-2), (5, 2.539398330063230e-1),
          (7, 9.504178996162932e-1), (9, 2.097847961257068e0))
_THETA13 = 5.371920351148152


def _pade_low(a: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    b = _PADE_COEFFS[m]
    ident = np.eye(a.shape[0], dtype=a.dtype)
    a2 = a @ a
    powers = [ident, a2]
    for _ in range(2, m // 2 + 1):
        powers.append(powers[-1] @ a2)
    u = sum(b[2 * k + 1] * powers[k] for k in range(m // 2 + 1))
    v = sum(b[2 * k] * powers[k] for k in range(m // 2 + 1))
    return a @ u, v


def _pade13(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    b = _PADE_COEFFS[13]
    ident = np.eye(a.shape[0], dtype=a.dtype)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    return u, v


def _expm_pade(a: np.ndarray) -> np.ndarray:
    norm1 = np.linalg.norm(a, 1)
    for m, theta in _THETA:
        if norm1 <= theta:
            u, v = _pade_low(a, m)
            return np.linalg.solve(v - u, v + u)
    s = 0
    if norm1 > _THETA13:
        s = max(0, int(np.ceil(np.log2(norm1 / _THETA13))))
    u, v = _pade13(a / 2.0**s)
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


def expm(a, tol: float = 1e-13) -> np.ndarray:
    """Matrix exponential.

    Hermitian and anti-Hermitian inputs go through an eigendecomposition;
    everything else uses scaling and squaring with a diagonal Pade
    approximant of adaptive degree (3 through 13).
    """
    a = as_operator(a)
    if a.shape[0] == 0:
        return a.copy()
    scale = max(1.0, np.max(np.abs(a)))
    ah = dagger(a)
    if np.max(np.abs(a - ah)) <= tol * scale:
        w, v = np.linalg.eigh(0.5 * (a + ah))
        return (v * np.exp(w)) @ dagger(v)
    if np.max(np.abs(a + ah)) <= tol * scale:
        k = -0.5j * (a - ah)  # a = i k, k Hermitian
        w, v = np.linalg.eigh(k)
        return (v * np.exp(1j * w)) @ dagger(v)
    return _expm_pade(a)


def propagator(h, t: float) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h``."""
    h = as_operator(h)
    if not is_hermitian(h, 1e-12 * max(1.0, np.max(np.abs(h)))):
        return expm(-1j * t * h)
    w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    return (v * np.exp(-1j * t * w)) @ dagger(v)


# --- partial trace and norms ------------------------------------------------

def partial_trace(rho, dims, keep) -> np.ndarray:
    """Reduced operator of a bipartite (or multipartite) operator.

    Parameters
    ----------
    rho : array_like
        Operator on the composite space.
    dims : sequence of int
        Local dimensions, most significant first.
    keep : int, str or sequence
        Subsystems to keep. For two subsystems ``"A"``/``"B"`` are accepted.
    """
    rho = as_operator(rho)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != rho.shape[0]:
        raise DimensionError(f"dims {dims} do not factor dimension {rho.shape[0]}")
    if isinstance(keep, str):
        keep = ["AB".index(c) for c in keep.upper()]
    elif np.isscalar(keep):
        keep = [int(keep)]
    keep = sorted(int(k) for k in keep)
    n = len(dims)
    traced = [k for k in range(n) if k not in keep]
    t = rho.reshape(dims + dims)
    # contract traced axes pairwise, highest first so indices stay valid
    for k in sorted(traced, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + m)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dk, dk)


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product ``Tr(a^dag b)``."""
    return complex(np.vdot(a, b))


def hs_norm_sq(a) -> float:
    a = np.asarray(a)
    return float(np.sum(a.real**2 + a.imag**2))


def hermitian_fn(rho, f, tol: float = 1e-10, return_zero_mask: bool = False):
    """Apply a scalar function to a Hermitian matrix, ``V f(w) V^dag``.

    Eigenvalues with magnitude below :data:`ZERO_EIGENVALUE` are set to
    exactly zero before ``f`` is applied; with ``return_zero_mask`` the mask
    of such eigenvalues is returned too so callers can detect support
    deficiency (``log`` of them is ``-inf``).
    """
    rho = as_operator(rho)
    if not is_hermitian(rho, tol * max(1.0, np.max(np.abs(rho)))):
        raise NotHermitianError("hermitian_fn needs a Hermitian input")
    w, v = np.linalg.eigh(0.5 * (rho + dagger(rho)))
    zero = np.abs(w) < ZERO_EIGENVALUE
    w = np.where(zero, 0.0, w)
    with np.errstate(divide="ignore", invalid="ignore"):
        fw = np.asarray(f(w), dtype=complex)
    out = (v * fw) @ dagger(v)
    if return_zero_mask:
        return out, zero
    return out


def spectral_norm(a, iterations: int = 50, seed: int = 0) -> float:
    """Largest singular value estimated by power iteration on ``a^dag a``.

    Deterministic for a fixed seed; relative accuracy is about 1e-3 after
    50 iterations unless the top two singular values are nearly degenerate
    (in which case the estimate is still a lower bound within that margin).
    """
    a = np.asarray(a, dtype=complex)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(a.shape[1]) + 1j * rng.standard_normal(a.shape[1])
    x /= np.linalg.norm(x)
    sigma = 0.0
    for _ in range(iterations):
        y = a @ x
        z = dagger(a) @ y
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return float(np.linalg.norm(y))
        x = z / nz
        sigma = np.linalg.norm(a @ x)
    return float(sigma)
