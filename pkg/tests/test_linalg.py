import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density, random_hermitian
from unifact.errors import DimensionError, InvalidStateError
from unifact.linalg import (
    anticommutator,
    as_density,
    commutator,
    expm,
    hermitian_fn,
    hs_inner,
    hs_norm_sq,
    is_hermitian,
    partial_trace,
    propagator,
    spectral_norm,
    tensor,
)
from unifact.operators import SX, SY, SZ, destroy


@pytest.mark.parametrize("scale", [1e-6, 0.3, 2.0, 40.0])
def test_expm_general_matches_scipy(rng, scale):
    a = scale * (rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
    ref = scipy.linalg.expm(a)
    assert np.linalg.norm(expm(a) - ref) <= 1e-12 * max(1.0, np.linalg.norm(ref))


def test_expm_hermitian_and_antihermitian_paths(rng):
    h = random_hermitian(rng, 5, 3.0)
    np.testing.assert_allclose(expm(h), scipy.linalg.expm(h), rtol=1e-12, atol=1e-12)
    u = expm(-1j * h)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-13)


def test_expm_nilpotent_is_exact():
    a = destroy(6)
    e = expm(0.7 * a)
    # exp(c a) has entries c^k sqrt(n!/(n-k)!)/k! above the diagonal
    assert abs(e[0, 1] - 0.7) < 1e-14
    assert abs(e[0, 2] - 0.7**2 * np.sqrt(2) / 2) < 1e-14
    assert np.allclose(np.tril(e, -1), 0)


def test_expm_rejects_non_square():
    with pytest.raises(DimensionError):
        expm(np.zeros((2, 3)))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.floats(min_value=0.01, max_value=5.0),
       st.integers(min_value=0, max_value=2**31 - 1))
def test_expm_inverse_property(d, scale, seed):
    r = np.random.default_rng(seed)
    a = scale * (r.standard_normal((d, d)) + 1j * r.standard_normal((d, d)))
    np.testing.assert_allclose(expm(a) @ expm(-a), np.eye(d), atol=1e-9 * np.exp(2 * scale * d))


def test_propagator_matches_expm(rng):
    h = random_hermitian(rng, 4)
    np.testing.assert_allclose(propagator(h, 0.8), scipy.linalg.expm(-0.8j * h), atol=1e-13)


def test_commutator_identities():
    np.testing.assert_allclose(commutator(SX, SY), 2j * SZ)
    np.testing.assert_allclose(anticommutator(SX, SX), 2 * np.eye(2))
    with pytest.raises(DimensionError):
        commutator(SX, np.eye(3))


def test_partial_trace_of_product(rng):
    ra, rb = random_density(rng, 2), random_density(rng, 3)
    rho = tensor(ra, rb)
    np.testing.assert_allclose(partial_trace(rho, [2, 3], 0), ra, atol=1e-14)
    np.testing.assert_allclose(partial_trace(rho, [2, 3], "B"), rb, atol=1e-14)
    rc = random_density(rng, 2)
    three = tensor(ra, rb, rc)
    np.testing.assert_allclose(partial_trace(three, [2, 3, 2], [0, 2]), tensor(ra, rc), atol=1e-14)


def test_partial_trace_bell_is_mixed():
    bell = np.zeros((4, 4))
    bell[np.ix_([0, 3], [0, 3])] = 0.5
    np.testing.assert_allclose(partial_trace(bell, [2, 2], 0), np.eye(2) / 2)


def test_hs_inner_and_norm(rng):
    a, b = random_hermitian(rng, 3), random_hermitian(rng, 3)
    assert np.isclose(hs_inner(a, b), np.trace(a.conj().T @ b))
    assert np.isclose(hs_norm_sq(a), np.linalg.norm(a) ** 2)


def test_as_density_validation():
    with pytest.raises(InvalidStateError):
        as_density(np.diag([1.2, -0.2]))
    with pytest.raises(InvalidStateError):
        as_density(np.diag([0.5, 0.6]))
    with pytest.raises(InvalidStateError):
        as_density(np.array([[0.5, 0.1], [0.3, 0.5]]))
    as_density(np.diag([1.0, 0.0]))


def test_hermitian_fn_sqrt(rng):
    rho = random_density(rng, 4)
    s = hermitian_fn(rho, np.sqrt)
    np.testing.assert_allclose(s @ s, rho, atol=1e-13)
    assert is_hermitian(s)


def test_spectral_norm_matches_svd(rng):
    a = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    assert spectral_norm(a, iterations=200) == pytest.approx(np.linalg.norm(a, 2), rel=1e-8)
    assert spectral_norm(np.zeros((3, 3))) == 0.0
