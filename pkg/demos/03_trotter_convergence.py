# # Commutator-corrected splitting
#
# For H = H_A + H_B + lam H_int the step
#   exp(-1/2 [H0, V] tau^2) exp(-i V tau) exp(-i H0 tau)
# is raised to the power 2**n by repeated squaring. Halving tau should cut
# the error by four; without the commutator factor only by two.

from unifact.operators import SZ, pauli_string
from unifact.trotter import BipartiteSystem, SplitSchedule, trotter_error

sys = BipartiteSystem(SZ, SZ, pauli_string("XX"), lam=1.0)

print(" n   corrected    ratio    plain        ratio")
prev_c = prev_p = None
for n in range(2, 9):
    sched = SplitSchedule(1.0, n)
    ec = trotter_error(sys, sched)
    ep = trotter_error(sys, sched, corrected=False)
    rc = "" if prev_c is None else f"{prev_c / ec:.3f}"
    rp = "" if prev_p is None else f"{prev_p / ep:.3f}"
    print(f"{n:2d}   {ec:.3e}   {rc:>6}   {ep:.3e}   {rp:>6}")
    prev_c, prev_p = ec, ep

# if the coupling commutes with the free part the split is exact
zz = BipartiteSystem(SZ, SZ, pauli_string("ZZ"), lam=1.0)
print("commuting case error: %.1e" % trotter_error(zz, SplitSchedule(1.0, 3)))
