import warnings

import numpy as np
import pytest

from unifact.errors import ClosureOverflow, DimensionError
from unifact.lie import (
    ClosureWarning,
    LieBasis,
    adjoint_matrix,
    close_algebra,
    expand_in_basis,
    jacobi_residual,
)
from unifact.linalg import commutator
from unifact.operators import SX, SY, SZ, destroy, fock_interior_mask, number, pauli_string


def _span_contains(basis, x, tol=1e-10):
    _, res = expand_in_basis(x, basis)
    return res <= tol * max(1.0, np.linalg.norm(x))


def test_su2_from_two_seeds():
    b = close_algebra([SX, SZ])
    assert b.dim == 3
    assert b.seed_count == 2
    assert _span_contains(b, SY)
    assert jacobi_residual(b.structure) <= 1e-8


def test_basis_is_orthonormal_and_structure_antisymmetric():
    b = close_algebra([SX, SZ])
    np.testing.assert_allclose(b.gram, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(b.structure, -np.swapaxes(b.structure, 0, 1), atol=1e-15)


def test_structure_constants_reproduce_commutators():
    b = close_algebra([pauli_string("ZI"), pauli_string("IZ"), pauli_string("XX")])
    for i in range(b.dim):
        for j in range(b.dim):
            c = commutator(b.elements[i], b.elements[j])
            np.testing.assert_allclose(c, b.combine(b.structure[i, j]), atol=1e-12)


def test_seed_coords_recover_seeds():
    seeds = [2.0 * SX, SX + SZ]
    b = close_algebra(seeds)
    for m, s in enumerate(seeds):
        np.testing.assert_allclose(b.combine(b.seed_coords[:, m]), s, atol=1e-13)


def test_two_qubit_ising_plus_flip_dimension():
    b = close_algebra([pauli_string("ZI"), pauli_string("IZ"), pauli_string("XX")])
    assert b.dim == 6
    assert jacobi_residual(b.structure) <= 1e-8


def test_commuting_seeds_do_not_grow():
    b = close_algebra([pauli_string("ZI"), pauli_string("IZ"), pauli_string("ZZ")])
    assert b.dim == 3


def test_dependent_seed_is_dropped():
    b = close_algebra([SX, 3.0 * SX, SX + 1e-14 * SZ])
    assert b.dim == 1


def test_closure_is_idempotent():
    b = close_algebra([SX, SZ])
    again = close_algebra(list(b.elements))
    assert again.dim == b.dim
    for e in again.elements:
        assert _span_contains(b, e)


def test_full_su4_overflow_carries_partial_basis():
    seeds = [pauli_string(s) for s in ("XI", "ZI", "IX", "IZ", "XX")]
    with pytest.raises(ClosureOverflow) as exc:
        close_algebra(seeds, max_dim=8)
    assert exc.value.partial is not None
    assert exc.value.partial.dim == 8
    assert close_algebra(seeds, max_dim=15).dim == 15


def test_truncated_oscillator_needs_interior_mask():
    n = 20
    a = destroy(n)
    seeds = [number(n), a + a.conj().T]
    with pytest.raises(ClosureOverflow):
        close_algebra(seeds, max_dim=4)
    mask = fock_interior_mask([n], 0)
    with pytest.warns(ClosureWarning):
        b = close_algebra(seeds, max_dim=4, interior=mask)
    # number, position, momentum and the identity
    assert b.dim == 4
    assert b.closure_residual <= 1e-9
    assert b.edge_residual > 1.0
    assert jacobi_residual(b.structure) <= 1e-8


def test_interior_mask_shape_checked():
    with pytest.raises(DimensionError):
        close_algebra([SX], interior=np.ones(3, dtype=bool))


def test_mismatched_seed_dimensions():
    with pytest.raises(DimensionError):
        close_algebra([SX, np.eye(3)])


def test_adjoint_matrix_columns():
    b = close_algebra([SX, SY])
    for i in range(b.dim):
        ad = adjoint_matrix(b, i)
        for j in range(b.dim):
            np.testing.assert_allclose(b.combine(ad[:, j]),
                                       commutator(b.elements[i], b.elements[j]), atol=1e-13)


def test_jacobi_residual_flags_bad_tensor():
    c = np.zeros((3, 3, 3))
    # [e0, e1] = e1, [e1, e2] = e0: the cyclic sum is -e0
    c[0, 1, 1], c[1, 0, 1] = 1.0, -1.0
    c[1, 2, 0], c[2, 1, 0] = 1.0, -1.0
    assert jacobi_residual(c) > 0.1


def test_basis_round_trip():
    b = close_algebra([SX, SZ])
    back = LieBasis.from_dict(b.to_dict())
    np.testing.assert_array_equal(back.elements, b.elements)
    np.testing.assert_array_equal(back.structure, b.structure)
    assert back.seed_count == b.seed_count


def test_no_warning_without_mask():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        close_algebra([SX, SZ])
