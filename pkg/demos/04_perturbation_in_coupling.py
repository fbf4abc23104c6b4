# # The coupled state to first order in lam
#
# Two routes give rho(t) = rho0(t) + lam * (...): one from the split-operator
# product, one from differentiating the Wei-Norman coordinates in lam.
# Both should sit within O(lam^2) of the exact state.

import numpy as np

from unifact.lie import close_algebra
from unifact.linalg import propagator, tensor
from unifact.operators import SZ, pauli_string
from unifact.perturbation import perturb_case_a, perturb_case_b
from unifact.trotter import BipartiteSystem, SplitSchedule
from unifact.wei_norman import TimeDependentHamiltonian


def ket(theta, phi):
    v = np.array([np.cos(theta), np.exp(1j * phi) * np.sin(theta)])
    return np.outer(v, v.conj())


rho_a, rho_b = ket(0.4, 0.3), ket(1.1, -0.7)
rho0 = tensor(rho_a, rho_b)
xx, zi, iz = pauli_string("XX"), pauli_string("ZI"), pauli_string("IZ")
t = 1.0

basis = close_algebra([zi, iz, xx])


def family(lam):
    return TimeDependentHamiltonian([(1.0, zi), (1.0, iz), (lam, xx)])


print("  lam     split route   Wei-Norman route")
for lam in (0.04, 0.02, 0.01):
    u = propagator(zi + iz + lam * xx, t)
    exact = u @ rho0 @ u.conj().T
    b = perturb_case_b(BipartiteSystem(SZ, SZ, xx, lam), rho_a, rho_b, SplitSchedule(t, 8))
    a = perturb_case_a(family, basis, rho0, lam, t)
    print(f"  {lam:.2f}   {np.linalg.norm(b.rho - exact):.3e}     {np.linalg.norm(a.rho - exact):.3e}")

# halving lam divides both columns by four
