# # Pure dephasing of two qubits
#
# Each qubit couples through sigma_z to its own bosonic bath, so populations
# stay put and every coherence is multiplied by a decoherence factor F.

import numpy as np

from unifact.models.dephasing import (
    Example2Params,
    brute_force_example2,
    decoherence_exponent,
    displacement_product,
    ohmic,
    simulate_example2,
    single_mode_exponent,
)
from unifact.operators import destroy
from unifact.oracles import time_ordered_propagator

plus = np.full((2, 2), 0.5)

# ## A few discrete modes, checked against the full qubit-plus-bath evolution

modes = Example2Params(modes=[(1.0, 0.25, 0.0), (1.7, 0.0, 0.25), (2.3, 0.2, 0.0)])
(rho, rho0), = simulate_example2(modes, plus, plus, [1.0])
bf = brute_force_example2(modes, plus, plus, [1.0], cutoff=6)[0]
print("factor formula vs brute force: %.1e" % np.abs(rho - bf).max())

# ## An ohmic continuum
#
# With rho(w) = (w / w_c) exp(-w / w_c) the exponent has the closed form
# (dg^2 / 2 w_c) ln(1 + w_c^2 t^2), where dg is the coupling difference.

bath = Example2Params(spectral_density=ohmic(5.0), g_a=0.15, g_b=0.15)
for t in (1.0, 5.0, 20.0):
    q = decoherence_exponent(bath, (1, 1, 2, 1), t).real
    closed = 0.3**2 / 10 * np.log(1 + 25 * t * t)
    print(f"t = {t:4.1f}   quadrature {q:.10f}   closed form {closed:.10f}")

# ## One mode: the displacement factors and the revival

g, w, n = 0.3, 1.0, 30
a = destroy(n)


def h(ts):
    ph = np.exp(1j * w * ts)[:, None, None]
    return g * (a.conj().T[None] * ph + a[None] * ph.conj())


u = time_ordered_propagator(h, [1.5], delta=1e-4)[0]
for conv in ("printed", "derived"):
    dev = np.abs(displacement_product(g, w, 1.5, n, conv) - u)[:20, :20].max()
    print(f"{conv:8s} scalar phase: max |dev| {dev:.1e}")

print("exponent after one period: %.1e" % single_mode_exponent(g, w, 2 * np.pi / w))
