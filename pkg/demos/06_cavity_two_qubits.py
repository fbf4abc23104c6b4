# # Two qubits exchanging photons with a cavity mode
#
# Both qubits start excited, the field in a Poisson state with mean 2.
# The dense simulation keeps the qubit pair in the symmetric triplet, and
# delta_d measures how far the pair drifts from |ee><ee|.

import numpy as np

from unifact.models.cavity import (
    Example1Params,
    analytic_rho_ab,
    delta_d_example1,
    simulate_example1,
)

params = Example1Params(fock_cutoff=16)
times = np.linspace(0, 50, 501)
traj = simulate_example1(params, times)

print("max trace drift      %.1e" % np.abs(traj.trace - 1).max())
print("min eigenvalue       %.1e" % traj.min_eigenvalue.min())
print("max singlet weight   %.1e" % np.abs(traj.singlet_population).max())

dd = np.array([delta_d_example1(r) for r in traj.rho_ab])
k = int(np.argmax(dd))
print(f"largest delta_d {dd[k]:.4f} at t = {times[k]:.1f}")

# ## Closed forms next to the simulation
#
# The closed-form matrix is available as printed and with squared moduli.
# Neither is assumed correct; the deviation table records the comparison.

t = 10.0
sim = traj.rho_ab[np.searchsorted(times, t)]
for mode in ("printed", "modulus"):
    print(mode, "max |dev| %.3f" % np.abs(analytic_rho_ab(params, t, mode) - sim).max())

#   unifact example1 --config demos/configs/example1.json --out results/e1
