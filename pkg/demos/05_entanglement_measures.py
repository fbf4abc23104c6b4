# # Measuring entanglement change
#
# delta_d is the squared Hilbert-Schmidt distance between the evolved state
# and the product of the freely evolved local states. Relative entropy and
# the Bures distance are reported next to it.

import numpy as np

from unifact.measures import (
    check_measure_axioms,
    entanglement_report,
    operation_delta_d,
    operator_schmidt_rank,
)
from unifact.operators import CNOT, SWAP, SX, SZ

bell = np.zeros((4, 4))
bell[np.ix_([0, 3], [0, 3])] = 0.5
print(entanglement_report(bell, np.eye(4) / 4))

# ## Which two-qubit gates factor into local pieces?

for name, op in [("X x Z", np.kron(SX, SZ)), ("CNOT", CNOT), ("SWAP", SWAP)]:
    print(f"{name:6s} operator Schmidt rank {operator_schmidt_rank(op, 2, 2)}")

# CNOT has rank 2, and on |+>|0> it produces a Bell state
plus = np.full((2, 2), 0.5)
zero = np.diag([1.0, 0.0])
print("delta_d after CNOT on |+>|0>: %.3f" % operation_delta_d(CNOT, plus, zero))

# ## Numerical checks of the measure conditions

rng = np.random.default_rng(0)
g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
rho = g @ g.conj().T
rho /= np.trace(rho).real
rep = check_measure_axioms(rho, np.eye(4) / 4, [2, 2], trials=100, seed=1)
print(rep)
