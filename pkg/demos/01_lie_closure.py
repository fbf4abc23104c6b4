# # Closing a set of operators under commutation
#
# Start from a few Hermitian generators and keep adding commutators until
# nothing new appears. The result is an orthonormal basis plus the
# structure constants c[i, j, k] with [B_i, B_j] = sum_k c[i, j, k] B_k.

import numpy as np

from unifact.lie import close_algebra, jacobi_residual
from unifact.operators import SX, SZ, destroy, fock_interior_mask, number, pauli_string

# ## Two Pauli matrices give all of su(2)

su2 = close_algebra([SX, SZ])
print("dimension:", su2.dim)
print("seeds kept:", su2.seed_count)
print("Jacobi residual: %.1e" % jacobi_residual(su2.structure))

# the third element is sigma_y up to normalization and phase
print(np.round(su2.elements[2] * np.sqrt(2), 12))

# ## Two qubits with a flip-flop coupling

ising = close_algebra([pauli_string("ZI"), pauli_string("IZ"), pauli_string("XX")])
print("ZI, IZ, XX close to dimension", ising.dim)

# ## A truncated oscillator
#
# On a finite Fock space [a, a^dag] is not the identity at the top level,
# so a naive closure never stops. Restricting the inner product to the
# interior levels recovers the four dimensional oscillator algebra and
# reports the edge residual as a warning.

n = 20
a = destroy(n)
mask = fock_interior_mask([n], 0, margin=2)
osc = close_algebra([number(n), a + a.conj().T], interior=mask)
print("oscillator dimension:", osc.dim)
print("interior residual %.1e, edge residual %.1e" % (osc.closure_residual, osc.edge_residual))
