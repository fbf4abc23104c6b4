import numpy as np
import pytest

from conftest import pure_qubit
from unifact.lie import close_algebra
from unifact.linalg import propagator, tensor
from unifact.oracles import time_ordered_propagator
from unifact.operators import SZ, pauli_string
from unifact.perturbation import default_dlam, perturb_case_a, perturb_case_b
from unifact.trotter import BipartiteSystem, SplitSchedule, evolve_scaled
from unifact.wei_norman import TimeDependentHamiltonian

XX = pauli_string("XX")
ZI, IZ = pauli_string("ZI"), pauli_string("IZ")
RHO_A, RHO_B = pure_qubit(0.4, 0.3), pure_qubit(1.1, -0.7)
RHO0 = tensor(RHO_A, RHO_B)
T = 0.5
LAMS = (0.04, 0.02, 0.01)


def exact(lam, t=T):
    u = propagator(ZI + IZ + lam * XX, t)
    return u @ RHO0 @ u.conj().T


def family(lam):
    return TimeDependentHamiltonian([(1.0, ZI), (1.0, IZ), (lam, XX)])


@pytest.fixture(scope="module")
def basis():
    return close_algebra([ZI, IZ, XX])


def case_b(lam, n=6, **kw):
    return perturb_case_b(BipartiteSystem(SZ, SZ, XX, lam), RHO_A, RHO_B, SplitSchedule(T, n), **kw)


def test_case_b_second_order_in_lambda():
    d = [np.linalg.norm(case_b(lam).rho - exact(lam)) for lam in LAMS]
    assert 3 <= d[0] / d[1] <= 5 and 3 <= d[1] / d[2] <= 5


def test_case_b_at_zero_coupling_is_free_product():
    res = case_b(0.0)
    assert np.abs(res.rho - exact(0.0)).max() <= 1e-14
    np.testing.assert_allclose(res.rho, res.reference, rtol=0, atol=1e-15)


def test_case_b_is_hermitian_and_trace_one():
    res = case_b(0.3)
    assert res.hermiticity_defect <= 1e-10
    assert res.trace_defect <= 1e-12


def test_case_b_is_linear_part_of_split_product():
    # central difference in lam removes the even orders of the split product
    lam, n = 1e-3, 4
    sched = SplitSchedule(T, n)

    def split_state(x):
        u = evolve_scaled(BipartiteSystem(SZ, SZ, XX, x), sched)
        return u @ RHO0 @ u.conj().T

    linear = (split_state(lam) - split_state(-lam)) / 2
    res = case_b(lam, n)
    np.testing.assert_allclose(res.rho - res.reference, linear, atol=1e-9)


def test_case_b_at_time_zero():
    res = perturb_case_b(BipartiteSystem(SZ, SZ, XX, 0.5), RHO_A, RHO_B, SplitSchedule(0.0, 3))
    np.testing.assert_allclose(res.rho, RHO0, atol=1e-15)


def test_anticommutator_bracket_reports_defect():
    res = case_b(0.3, bracket="anticommutator")
    assert res.hermiticity_defect > 1e-6
    np.testing.assert_allclose(res.rho, res.rho.conj().T)
    with pytest.raises(ValueError):
        case_b(0.3, bracket="jordan")


def test_case_a_second_order_in_lambda(basis):
    d = [np.linalg.norm(perturb_case_a(family, basis, RHO0, lam, T).rho - exact(lam)) for lam in LAMS]
    assert 3 <= d[0] / d[1] <= 5 and 3 <= d[1] / d[2] <= 5


def test_cases_agree_to_second_order(basis):
    # both are first-order expansions, so each sits within K lam^2 of the exact state
    for lam in LAMS:
        a = perturb_case_a(family, basis, RHO0, lam, T).rho
        b = case_b(lam).rho
        bound = 0.5 * lam**2
        assert np.linalg.norm(a - exact(lam)) <= bound
        assert np.linalg.norm(b - exact(lam)) <= bound
        assert np.linalg.norm(a - b) <= 2 * bound


def test_case_a_zero_coupling(basis):
    res = perturb_case_a(family, basis, RHO0, 0.0, T)
    np.testing.assert_allclose(res.rho, res.reference, rtol=0, atol=1e-15)
    assert np.abs(res.reference - exact(0.0)).max() <= 1e-9


def test_case_a_second_order_flag(basis):
    res = perturb_case_a(family, basis, RHO0, 0.05, T, second_order=True)
    assert res.order_used == 2
    assert np.linalg.norm(res.rho - exact(0.05)) < 1e-3


def test_default_dlam():
    assert default_dlam(0.0) == 1e-4
    assert default_dlam(0.5) == pytest.approx(5e-3)


def test_case_a_driven_coupling(basis):
    # time-dependent coupling strength against the time-ordered product
    def fam(lam):
        return TimeDependentHamiltonian([(1.0, ZI), (1.0, IZ), (lambda t: lam * np.cos(t), XX)])

    lam = 0.01
    u = time_ordered_propagator(lambda ts: ZI + IZ + lam * np.cos(ts)[:, None, None] * XX, [T], 1e-4)[0]
    ref = u @ RHO0 @ u.conj().T
    res = perturb_case_a(fam, basis, RHO0, lam, T)
    assert np.linalg.norm(res.rho - ref) <= 0.5 * lam**2
