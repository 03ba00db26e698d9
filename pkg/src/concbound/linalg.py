"""Dense complex linear algebra kernel for bipartite operators.

All matrices are plain ``numpy.ndarray`` of dtype complex128.  Composite
indices follow the fixed convention |i> x |j> -> i*k + j (first factor
major, second factor minor); every module in the package shares it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonHermitian, NotPSD

# Tolerances used across the package.
TAU_HERM = 1e-10
TAU_PSD = 1e-10


@dataclass(frozen=True)
class BipartiteDims:
    """Dimensions (n, k) of a bipartite n x k Hilbert space.

    ``n`` is the first (qubit-like) factor, ``k`` the second.  The bound
    machinery fixes n = 2; the kernel itself is generic.
    """

    n: int
    k: int

    def __post_init__(self):
        if self.n < 2 or self.k < 2:
            raise DimensionMismatch(
                f"bipartite dims must satisfy n >= 2, k >= 2, got ({self.n}, {self.k})"
            )

    @property
    def total(self) -> int:
        return self.n * self.k


def _as_dims(dims) -> tuple[int, int]:
    """Accept a BipartiteDims or a raw (d1, d2) tuple (d2 may be 1)."""
    if isinstance(dims, BipartiteDims):
        return dims.n, dims.k
    d1, d2 = dims
    if d1 < 1 or d2 < 1:
        raise DimensionMismatch(f"invalid factor dimensions ({d1}, {d2})")
    return int(d1), int(d2)


def _check_square(m: np.ndarray, dim: int | None = None) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise DimensionMismatch(f"expected a {dim}x{dim} matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise DimensionMismatch("matrix has non-finite entries")
    return m


def herm_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation |m - m^dagger|."""
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def require_hermitian(m: np.ndarray, tol: float = TAU_HERM) -> np.ndarray:
    """Validate Hermiticity within ``tol`` and return the symmetrized matrix."""
    m = _check_square(m)
    defect = herm_defect(m)
    if defect > tol:
        raise NonHermitian(f"matrix is not Hermitian: max |m - m^dag| = {defect:.3e}")
    return 0.5 * (m + m.conj().T)


def hermitian_eigensystem(m: np.ndarray, tol: float = TAU_HERM):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues real and sorted in
    descending order, eigenvectors as the corresponding orthonormal columns.
    """
    h = require_hermitian(m, tol)
    w, v = np.linalg.eigh(h)
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def partial_trace(rho: np.ndarray, dims, keep: int) -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    ``keep`` = 0 keeps the first factor (traces the second), ``keep`` = 1
    keeps the second.  ``dims`` may be a BipartiteDims or a raw tuple.
    """
    d1, d2 = _as_dims(dims)
    rho = _check_square(rho, d1 * d2)
    r = rho.reshape(d1, d2, d1, d2)
    if keep == 0:
        return np.trace(r, axis1=1, axis2=3)
    if keep == 1:
        return np.trace(r, axis1=0, axis2=2)
    raise DimensionMismatch(f"keep must be 0 or 1, got {keep}")


def partial_transpose(rho: np.ndarray, dims) -> np.ndarray:
    """Transpose the second factor's indices of a bipartite operator."""
    d1, d2 = _as_dims(dims)
    rho = _check_square(rho, d1 * d2)
    r = rho.reshape(d1, d2, d1, d2)
    return r.transpose(0, 3, 2, 1).reshape(d1 * d2, d1 * d2)


def matrix_sqrt_psd(rho: np.ndarray, tol: float = TAU_PSD) -> np.ndarray:
    """Hermitian square root of a PSD matrix.

    Eigenvalues in [-tol, 0) are clamped to zero; anything below -tol
    raises NotPSD.
    """
    w, v = hermitian_eigensystem(rho)
    if w[-1] < -tol:
        raise NotPSD(f"matrix has eigenvalue {w[-1]:.3e} < -{tol:.0e}")
    s = np.sqrt(np.clip(w, 0.0, None))
    return (v * s) @ v.conj().T


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product in the package-wide index convention (a major)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def min_eigenvalue(m: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix (no descending sort)."""
    h = require_hermitian(m)
    return float(np.linalg.eigvalsh(h)[0])


def is_psd(m: np.ndarray, tol: float = TAU_PSD) -> bool:
    return min_eigenvalue(m) >= -tol
