import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pure_qubit, random_density, random_hermitian
from unifact.errors import DimensionError
from unifact.linalg import tensor
from unifact.measures import (
    bures,
    check_measure_axioms,
    delta_d,
    entanglement_report,
    fidelity,
    free_product_state,
    marginal_product,
    operation_delta_d,
    operator_schmidt_rank,
    relative_entropy,
)
from unifact.operators import CNOT, SWAP, SX, SZ, pauli_string
from unifact.trotter import BipartiteSystem

BELL = np.zeros((4, 4), dtype=complex)
BELL[np.ix_([0, 3], [0, 3])] = 0.5
PLUS = np.full((2, 2), 0.5, dtype=complex)
ZERO = np.diag([1.0, 0.0]).astype(complex)


def test_bell_against_maximally_mixed():
    assert abs(delta_d(BELL, np.eye(4) / 4) - 0.75) <= 1e-12


def test_delta_d_identity_and_perturbation(rng):
    sigma = random_density(rng, 4)
    assert delta_d(sigma, sigma) == 0.0
    p = random_hermitian(rng, 4)
    p -= np.trace(p) / 4 * np.eye(4)
    eps = 1e-4
    assert delta_d(sigma + eps * p, sigma) == pytest.approx(eps**2 * np.linalg.norm(p) ** 2, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=2**31 - 1))
def test_delta_d_nonnegative_and_symmetric(d, seed):
    r = np.random.default_rng(seed)
    a, b = random_density(r, d), random_density(r, d, rank=1)
    assert delta_d(a, b) >= 0.0
    assert delta_d(a, b) == pytest.approx(delta_d(b, a), abs=1e-15)
    assert delta_d(a, b) <= 2.0 + 1e-12


def test_delta_d_dimension_mismatch():
    with pytest.raises(DimensionError):
        delta_d(np.eye(2) / 2, np.eye(3) / 3)


def test_relative_entropy_cases(rng):
    rho = random_density(rng, 3)
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-12)
    assert relative_entropy(BELL, np.eye(4) / 4) == pytest.approx(math.log(4), abs=1e-12)
    assert relative_entropy(np.eye(2) / 2, ZERO) == math.inf
    # support inclusion gives a finite value
    assert math.isfinite(relative_entropy(ZERO, np.eye(2) / 2))


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_klein_inequality(seed):
    r = np.random.default_rng(seed)
    assert relative_entropy(random_density(r, 3), random_density(r, 3)) >= 0.0


def test_fidelity_and_bures(rng):
    a, b = pure_qubit(0.3, 0.1), pure_qubit(1.0, -0.4)
    va = np.array([np.cos(0.3), np.exp(0.1j) * np.sin(0.3)])
    vb = np.array([np.cos(1.0), np.exp(-0.4j) * np.sin(1.0)])
    assert fidelity(a, b) == pytest.approx(abs(np.vdot(va, vb)) ** 2, abs=1e-10)
    rho = random_density(rng, 4)
    assert bures(rho, rho) == pytest.approx(0.0, abs=1e-7)
    assert bures(ZERO, np.diag([0.0, 1.0])) == pytest.approx(2.0)
    assert 0.0 <= bures(BELL, np.eye(4) / 4) <= 2.0


def test_entanglement_report_fields():
    rep = entanglement_report(BELL, np.eye(4) / 4, t=1.5)
    d = rep.to_dict()
    assert d["t"] == 1.5 and d["delta_d"] == pytest.approx(0.75)
    assert set(d) == {"t", "delta_d", "relative_entropy", "bures", "reference"}


def test_free_product_state_is_local_evolution():
    sys = BipartiteSystem(SZ, SX, pauli_string("XX"), 0.7)
    rho = free_product_state(sys, PLUS, ZERO, 0.9)
    assert delta_d(rho, marginal_product(rho, [2, 2])) <= 1e-28
    with pytest.raises(DimensionError):
        free_product_state(sys, np.eye(3) / 3, ZERO, 0.1)


def test_marginal_product_of_product_state(rng):
    ra, rb = random_density(rng, 2), random_density(rng, 3)
    np.testing.assert_allclose(marginal_product(tensor(ra, rb), [2, 3]), tensor(ra, rb), atol=1e-15)


def test_operator_schmidt_rank():
    assert operator_schmidt_rank(np.kron(SX, SZ), 2, 2) == 1
    assert operator_schmidt_rank(CNOT, 2, 2) == 2
    assert operator_schmidt_rank(SWAP, 2, 2) == 4
    assert operator_schmidt_rank(np.zeros((4, 4)), 2, 2) == 0
    with pytest.raises(DimensionError):
        operator_schmidt_rank(np.eye(6), 2, 2)


def test_cnot_changes_delta_d_of_a_product_state():
    # CNOT maps |+>|0> to a Bell state with overlap 1/4: 2 - 2/4
    assert operation_delta_d(CNOT, PLUS, ZERO) == pytest.approx(1.5, abs=1e-12)
    assert operation_delta_d(np.kron(SX, SZ), PLUS, ZERO) == pytest.approx(0.0, abs=1e-15)


def test_axiom_checks(rng):
    rho = random_density(rng, 4)
    ref = marginal_product(rho, [2, 2])
    rep = check_measure_axioms(rho, ref, [2, 2], trials=100, seed=7)
    assert rep.identity_zero and rep.identity_positive
    assert rep.local_unitary_max_dev <= 1e-10
    assert rep.perturbation_residual <= 1e-15
    assert rep.trials == 100 and rep.seed == 7
    again = check_measure_axioms(rho, ref, [2, 2], trials=100, seed=7)
    assert again == rep


def test_axiom_monotonicity_is_reported_not_asserted():
    # the Hilbert-Schmidt distance is not contractive in general; counts are data
    rep = check_measure_axioms(BELL, np.eye(4) / 4, [2, 2], trials=50, seed=0, n_kraus=3)
    assert 0 <= rep.monotonicity_violations <= 50
    assert math.isfinite(rep.monotonicity_max_excess)
