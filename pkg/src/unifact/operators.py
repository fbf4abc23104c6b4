"""Standard operators: Pauli matrices, qubit ladder operators, truncated bosons."""
import numpy as np

from .linalg import tensor

# qubit basis order is (|e>, |g>), so sigma_z = diag(+1, -1)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |e><g|
SIGMA_MINUS = SIGMA_PLUS.T.copy()

CNOT = np.array([[1, 0, 0, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1],
                 [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0],
                 [0, 0, 1, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1]], dtype=complex)

NAMED = {
    "I": I2, "X": SX, "Y": SY, "Z": SZ,
    "sx": SX, "sy": SY, "sz": SZ, "id": I2,
    "sp": SIGMA_PLUS, "sm": SIGMA_MINUS,
    "cnot": CNOT, "swap": SWAP,
}


def destroy(n: int) -> np.ndarray:
    """Annihilation operator truncated to ``n`` Fock levels."""
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex)


def number(n: int) -> np.ndarray:
    return np.diag(np.arange(n, dtype=float)).astype(complex)


def pauli_string(s: str) -> np.ndarray:
    """``pauli_string("XZ") == tensor(SX, SZ)``."""
    return tensor(*[NAMED[c] for c in s])


def ket(n: int, k: int) -> np.ndarray:
    v = np.zeros(n, dtype=complex)
    v[k] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def embed(op, position: int, dims) -> np.ndarray:
    """Lift a local operator onto the composite space with local ``dims``."""
    factors = [np.eye(d, dtype=complex) for d in dims]
    factors[position] = op
    return tensor(*factors)


def fock_interior_mask(dims, fock_axes, margin: int = 2) -> np.ndarray:
    """Boolean mask of composite indices whose Fock levels avoid the top ``margin``."""
    dims = list(dims)
    grids = np.indices(dims).reshape(len(dims), -1)
    mask = np.ones(grids.shape[1], dtype=bool)
    for ax in np.atleast_1d(fock_axes):
        mask &= grids[ax] < dims[ax] - margin
    return mask
