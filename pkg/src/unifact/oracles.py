"""Brute-force reference propagators used to check the factorizations."""
from __future__ import annotations

import numpy as np


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """``mats[-1] @ ... @ mats[0]`` by pairwise batched reduction."""
    m = mats
    while m.shape[0] > 1:
        if m.shape[0] % 2:
            last = m[-1:]
            m = np.concatenate([m[1:-1:2] @ m[0:-1:2], last])
        else:
            m = m[1::2] @ m[0::2]
    return m[0]


def midpoint_exponentials(hamiltonian, t0: float, t1: float, steps: int) -> np.ndarray:
    """Stack of ``exp(-i H(t_k + d/2) d)`` for the ``steps`` sub-intervals of ``[t0, t1]``.

    ``hamiltonian`` maps an array of times to a ``(K, d, d)`` stack of
    Hermitian matrices.
    """
    d = (t1 - t0) / steps
    mids = t0 + (np.arange(steps) + 0.5) * d
    h = hamiltonian(mids)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * d * w)[:, None, :]) @ np.conj(np.swapaxes(v, 1, 2))


def time_ordered_propagator(hamiltonian, times, delta: float = 1e-5, chunk: int = 4096):
    """Time-ordered propagators ``U(t)`` for each entry of ``times``.

    Each step of length ``<= delta`` is the exact exponential of the
    Hamiltonian frozen at the step midpoint, so the global error is
    second order in ``delta``.

    Parameters
    ----------
    hamiltonian : callable
        ``hamiltonian(ts) -> (len(ts), d, d)`` Hermitian stack.
    times : array_like
        Non-decreasing, non-negative output times.
    delta : float
        Maximum step.

    Returns
    -------
    ndarray of shape ``(len(times), d, d)``
    """
    times = np.asarray(times, dtype=float)
    d = hamiltonian(np.zeros(1)).shape[-1]
    u = np.eye(d, dtype=complex)
    out = np.empty((len(times), d, d), dtype=complex)
    t_prev = 0.0
    for k, t in enumerate(times):
        if t < t_prev - 1e-15:
            raise ValueError("times must be non-decreasing and start at >= 0")
        span = t - t_prev
        steps = int(np.ceil(span / delta - 1e-9)) if span > 0 else 0
        done = 0
        while done < steps:
            n = min(chunk, steps - done)
            ta = t_prev + span * done / steps
            tb = t_prev + span * (done + n) / steps
            u = _ordered_product(midpoint_exponentials(hamiltonian, ta, tb, n)) @ u
            done += n
        out[k] = u
        t_prev = max(t_prev, t)
    return out
