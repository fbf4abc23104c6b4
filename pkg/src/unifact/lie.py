"""Closure of operator sets under commutation.

A :class:`LieBasis` holds a Hilbert-Schmidt orthonormal basis of the Lie
algebra generated by some seed operators, together with the structure
constants ``c[i, j, k]`` defined by ``[B_i, B_j] = sum_k c[i, j, k] B_k``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ClosureOverflow, DimensionError
from .linalg import as_operator, commutator

__all__ = [
    "LieBasis",
    "ClosureWarning",
    "close_algebra",
    "expand_in_basis",
    "adjoint_matrix",
    "jacobi_residual",
]


class ClosureWarning(UserWarning):
    """Commutator residual lives only on the excluded (edge) levels."""


def _masked_inner(mask):
    if mask is None:
        return lambda a, b: complex(np.vdot(a, b))
    mm = np.outer(mask, mask)
    return lambda a, b: complex(np.vdot(a[mm], b[mm]))


@dataclass(frozen=True, eq=False)
class LieBasis:
    elements: np.ndarray  # (n, d, d)
    gram: np.ndarray  # (n, n)
    structure: np.ndarray  # (n, n, n)
    seed_count: int
    seed_coords: np.ndarray  # (n, m): seed_j = sum_k seed_coords[k, j] B_k
    interior: np.ndarray | None = None
    independence_tol: float = 1e-10
    closure_tol: float = 1e-9
    closure_residual: float = 0.0
    edge_residual: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    @property
    def op_dim(self) -> int:
        return self.elements.shape[1]

    def inner(self, a, b) -> complex:
        return _masked_inner(self.interior)(a, b)

    def combine(self, coords) -> np.ndarray:
        """``sum_k coords[k] B_k``."""
        return np.tensordot(np.asarray(coords, dtype=complex), self.elements, axes=1)

    def to_dict(self) -> dict:
        from .io import matrix_to_json

        return {
            "elements": [matrix_to_json(b) for b in self.elements],
            "structure_re": self.structure.real.tolist(),
            "structure_im": self.structure.imag.tolist(),
            "seed_count": self.seed_count,
            "seed_coords_re": self.seed_coords.real.tolist(),
            "seed_coords_im": self.seed_coords.imag.tolist(),
            "interior": None if self.interior is None else self.interior.tolist(),
            "independence_tol": self.independence_tol,
            "closure_tol": self.closure_tol,
            "closure_residual": self.closure_residual,
            "edge_residual": self.edge_residual,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LieBasis":
        from .io import matrix_from_json

        elements = np.array([matrix_from_json(m) for m in d["elements"]])
        interior = None if d.get("interior") is None else np.array(d["interior"], dtype=bool)
        ip = _masked_inner(interior)
        n = len(elements)
        gram = np.array([[ip(elements[i], elements[j]) for j in range(n)] for i in range(n)])
        return cls(
            elements=elements,
            gram=gram,
            structure=np.array(d["structure_re"]) + 1j * np.array(d["structure_im"]),
            seed_count=int(d["seed_count"]),
            seed_coords=np.array(d["seed_coords_re"]) + 1j * np.array(d["seed_coords_im"]),
            interior=interior,
            independence_tol=d.get("independence_tol", 1e-10),
            closure_tol=d.get("closure_tol", 1e-9),
            closure_residual=d.get("closure_residual", 0.0),
            edge_residual=d.get("edge_residual", 0.0),
        )


def _project_out(x, elements, ip):
    # modified Gram-Schmidt, two passes for orthogonality to round-off
    r = x.copy()
    for _ in range(2):
        for b in elements:
            r = r - ip(b, r) * b
    return r


def close_algebra(
    seeds,
    max_dim: int = 64,
    independence_tol: float = 1e-10,
    closure_tol: float = 1e-9,
    interior=None,
) -> LieBasis:
    """Enlarge ``seeds`` by repeated commutation to a finite Lie algebra.

    Seeds are orthonormalized in order (dependent seeds are dropped), then
    commutators ``[B_i, B_j]`` with ``i < j`` are scanned lexicographically
    over the growing basis; every commutator with a component outside the
    current span is orthonormalized and appended. The scan repeats until a
    full sweep adds nothing.

    Parameters
    ----------
    seeds : sequence of array_like
        Generators, all of the same dimension.
    max_dim : int
        Largest algebra dimension accepted before :class:`ClosureOverflow`.
    independence_tol : float
        A candidate is new when its residual after projection exceeds
        ``independence_tol`` times its own norm (and ``closure_tol``).
    closure_tol : float
        Absolute residual (normalized elements) below which a commutator
        counts as lying in the span.
    interior : array_like of bool, optional
        Index mask restricting the inner product. Use it for truncated
        bosonic modes (see :func:`unifact.operators.fock_interior_mask`):
        residuals supported only off the interior raise a
        :class:`ClosureWarning` instead of growing the basis.
    """
    seeds = [as_operator(s) for s in seeds]
    if not seeds:
        raise ValueError("close_algebra needs at least one seed")
    d = seeds[0].shape[0]
    if any(s.shape != (d, d) for s in seeds):
        raise DimensionError("seeds have different dimensions")
    if max_dim < len(seeds):
        raise ValueError("max_dim is smaller than the number of seeds")
    if interior is not None:
        interior = np.asarray(interior, dtype=bool)
        if interior.shape != (d,):
            raise DimensionError("interior mask length must equal operator dimension")
    ip = _masked_inner(interior)

    def norm(a):
        return np.sqrt(max(ip(a, a).real, 0.0))

    elements: list[np.ndarray] = []

    def try_add(x) -> bool:
        nx = norm(x)
        if nx <= closure_tol:
            return False
        r = _project_out(x, elements, ip)
        nr = norm(r)
        if nr <= closure_tol or nr <= independence_tol * nx:
            return False
        if len(elements) >= max_dim:
            raise ClosureOverflow(
                f"Lie closure exceeds max_dim={max_dim}; use the split-operator route",
                partial=_finish(elements, len(seed_idx), seeds, interior,
                                independence_tol, closure_tol, check=False),
            )
        elements.append(r / nr)
        return True

    seed_idx = []
    for s in seeds:
        if try_add(s):
            seed_idx.append(len(elements) - 1)

    added = True
    while added:
        added = False
        i = 0
        while i < len(elements):
            j = i + 1
            while j < len(elements):
                if try_add(commutator(elements[i], elements[j])):
                    added = True
                j += 1
            i += 1

    return _finish(elements, len(seed_idx), seeds, interior, independence_tol, closure_tol)


def _finish(elements, seed_count, seeds, interior, independence_tol, closure_tol, check=True):
    ip = _masked_inner(interior)
    els = np.array(elements, dtype=complex)
    n = len(els)
    gram = np.array([[ip(els[i], els[j]) for j in range(n)] for i in range(n)])
    structure = np.zeros((n, n, n), dtype=complex)
    closure_res = 0.0
    edge_res = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            c = commutator(els[i], els[j])
            coeffs = np.linalg.solve(gram, np.array([ip(b, c) for b in els]))
            structure[i, j] = coeffs
            structure[j, i] = -coeffs
            r = c - np.tensordot(coeffs, els, axes=1)
            closure_res = max(closure_res, np.sqrt(max(ip(r, r).real, 0.0)))
            edge_res = max(edge_res, float(np.linalg.norm(r)))
    seed_coords = np.zeros((n, len(seeds)), dtype=complex)
    if n:
        for m, s in enumerate(seeds):
            seed_coords[:, m] = np.linalg.solve(gram, np.array([ip(b, s) for b in els]))
    notes = []
    if check and interior is not None and edge_res > closure_tol:
        msg = (f"commutator residual {edge_res:.3e} confined to truncation edge "
               f"(interior residual {closure_res:.3e})")
        notes.append(msg)
        warnings.warn(msg, ClosureWarning, stacklevel=3)
    return LieBasis(
        elements=els,
        gram=gram,
        structure=structure,
        seed_count=seed_count,
        seed_coords=seed_coords,
        interior=interior,
        independence_tol=independence_tol,
        closure_tol=closure_tol,
        closure_residual=closure_res,
        edge_residual=edge_res,
        notes=notes,
    )


def expand_in_basis(x, basis: LieBasis) -> tuple[np.ndarray, float]:
    """Least-squares coordinates of ``x`` in ``basis`` and the residual norm."""
    x = as_operator(x)
    if x.shape[0] != basis.op_dim:
        raise DimensionError("operator dimension does not match basis")
    b = np.array([basis.inner(e, x) for e in basis.elements])
    coords = np.linalg.solve(basis.gram, b)
    r = x - basis.combine(coords)
    return coords, float(np.sqrt(max(basis.inner(r, r).real, 0.0)))


def adjoint_matrix(basis: LieBasis, i: int) -> np.ndarray:
    """Matrix of ``ad_{B_i}`` in basis coordinates.

    Column ``j`` holds the coordinates of ``[B_i, B_j]``.
    """
    if not 0 <= i < basis.dim:
        raise IndexError(f"basis index {i} out of range")
    return basis.structure[i].T.copy()


def jacobi_residual(structure: np.ndarray) -> float:
    """Largest violation of the Jacobi identity by a structure tensor."""
    c = np.asarray(structure)
    t1 = np.einsum("ijm,mkl->ijkl", c, c)
    t2 = np.einsum("jkm,mil->ijkl", c, c)
    t3 = np.einsum("kim,mjl->ijkl", c, c)
    return float(np.max(np.abs(t1 + t2 + t3), initial=0.0))
