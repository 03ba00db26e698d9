import numpy as np
import pytest

from concbound.errors import NonHermitian, ValidationError
from concbound.linalg import (
    BipartiteDims,
    hermitian_eigensystem,
    is_psd,
    matrix_sqrt_psd,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
    require_hermitian,
    tensor_product,
)

RNG = np.random.default_rng(7)


def random_hermitian(d):
    a = RNG.normal(size=(d, d)) + 1j * RNG.normal(size=(d, d))
    return a + a.conj().T


def random_density(d):
    a = RNG.normal(size=(d, d)) + 1j * RNG.normal(size=(d, d))
    m = a @ a.conj().T
    return m / np.trace(m).real


def test_dims_validation():
    assert BipartiteDims(2, 3).total == 6
    with pytest.raises(ValidationError):
        BipartiteDims(1, 3)
    with pytest.raises(ValidationError):
        BipartiteDims(2, 0)


def test_partial_trace_of_product_recovers_factors():
    a = random_density(2)
    b = random_density(3)
    rho = tensor_product(a, b)
    dims = BipartiteDims(2, 3)
    assert np.allclose(partial_trace(rho, dims, keep=0), a, atol=1e-12)
    assert np.allclose(partial_trace(rho, dims, keep=1), b, atol=1e-12)


def test_partial_trace_preserves_trace():
    rho = random_density(6)
    dims = BipartiteDims(2, 3)
    for keep in (0, 1):
        red = partial_trace(rho, dims, keep)
        assert abs(np.trace(red) - 1.0) < 1e-12


def test_partial_transpose_involution_and_trace():
    rho = random_density(6)
    dims = BipartiteDims(2, 3)
    pt = partial_transpose(rho, dims)
    assert np.allclose(partial_transpose(pt, dims), rho, atol=1e-14)
    assert abs(np.trace(pt) - np.trace(rho)) < 1e-12


def test_partial_transpose_of_product_stays_psd():
    rho = tensor_product(random_density(2), random_density(3))
    pt = partial_transpose(rho, BipartiteDims(2, 3))
    assert min_eigenvalue(pt) > -1e-12


def test_partial_transpose_bell_min_eigenvalue():
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    pt = partial_transpose(rho, BipartiteDims(2, 2))
    assert abs(min_eigenvalue(pt) - (-0.5)) < 1e-12


def test_matrix_sqrt_psd():
    rho = random_density(5)
    # pad to a generic PSD matrix (not trace one) to exercise scaling
    m = 3.7 * rho
    s = matrix_sqrt_psd(m)
    assert np.allclose(s @ s, m, atol=1e-10)
    assert is_psd(s)


def test_hermitian_eigensystem_descending():
    m = random_hermitian(6)
    w, v = hermitian_eigensystem(m)
    assert np.all(np.diff(w) <= 1e-12)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-10)


def test_require_hermitian_rejects():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NonHermitian):
        require_hermitian(m)
    sym = require_hermitian(random_hermitian(4) + 1e-13 * np.eye(4) * 1j)
    assert np.allclose(sym, sym.conj().T)
