# # Factorizing the propagator of a driven qubit
#
# H(t) = cos(5 t) sigma_x + sigma_z. Its generators close to su(2), so
# U(t) = exp(g_1 B_1) exp(g_2 B_2) exp(g_3 B_3) with three scalar functions
# g_i(t) obtained from a small ODE.

import numpy as np

from unifact.lie import close_algebra
from unifact.operators import SX, SY, SZ
from unifact.oracles import time_ordered_propagator
from unifact.wei_norman import TimeDependentHamiltonian, evaluate_propagator, integrate_wn

basis = close_algebra([SX, SY, SZ])
h = TimeDependentHamiltonian([(lambda t: np.cos(5.0 * t), SX), (1.0, SZ)])

fp = integrate_wn(h, basis, t_end=1.0, step=1e-3)
print("step-halving error estimate: %.1e" % fp.error_estimate)
print("g(1) =", np.round(fp.coordinates(1.0), 6))

# ## Check against a brute-force time-ordered product

ts = np.linspace(0, 1, 6)
u_ref = time_ordered_propagator(lambda s: np.cos(5.0 * s)[:, None, None] * SX + SZ, ts, delta=1e-5)
for k, t in enumerate(ts):
    err = np.linalg.norm(evaluate_propagator(fp, t) - u_ref[k])
    print(f"t = {t:.1f}   |U_wn - U_ref|_F = {err:.2e}")

# the same run from the command line:
#   unifact wei-norman --config demos/configs/driven_qubit.json --out results/wn
