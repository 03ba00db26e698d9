"""Concurrence formulas: flip operator, pure states, Wootters 2x2, substates.

The 4x4 substate blocks use the fixed row/column ordering
(0,i), (0,j), (1,i), (1,j) relative to the rotated basis of the second
factor; sigma_y (x) sigma_y is applied in that ordering.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import DimensionMismatch, NotPSD, NotUnitary
from .linalg import BipartiteDims
from .states import DensityMatrix, PureState

UNITARY_TOL = 1e-10
CONCURRENCE_CLAMP = 1e-12

_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SYSY = np.kron(_SY, _SY)


def flip_operator(a: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Flip superoperator on a Hermitian bipartite operator.

    F(A) = A + (tr A) I - (reduced A on factor 1) (x) I_k
             - I_n (x) (reduced A on factor 2).
    """
    a = linalg.require_hermitian(a)
    if a.shape[0] != dims.total:
        raise DimensionMismatch(f"operator shape {a.shape} != dims {dims}")
    red_n = linalg.partial_trace(a, dims, keep=0)
    red_k = linalg.partial_trace(a, dims, keep=1)
    return (
        a
        + np.trace(a) * np.eye(dims.total)
        - np.kron(red_n, np.eye(dims.k))
        - np.kron(np.eye(dims.n), red_k)
    )


def _concurrence_sq_from_matrix(m: np.ndarray) -> float:
    """C^2 of a (possibly subnormalized) pure state given as an n x k matrix."""
    g = m @ m.conj().T
    n2 = float(np.real(np.trace(g)))
    t2 = float(np.real(np.sum(g * g.conj())))
    return 2.0 * (n2 * n2 - t2)


def pure_concurrence(psi: PureState) -> float:
    """Concurrence of a pure bipartite state, any norm.

    sqrt(2 [ <psi|psi>^2 - tr rho_n^2 ]) with rho_n the reduced operator
    on the first factor.  Scales as the squared norm of the input.
    """
    m = psi.vector.reshape(psi.dims.n, psi.dims.k)
    c2 = _concurrence_sq_from_matrix(m)
    if c2 < CONCURRENCE_CLAMP**2:
        return 0.0
    return float(np.sqrt(max(c2, 0.0)))


def pure_concurrence_via_flip(psi: PureState) -> float:
    """Concurrence from the flip-operator expectation value (cross-check form)."""
    rho = psi.projector()
    f = flip_operator(rho, psi.dims)
    val = float(np.real(np.vdot(psi.vector, f @ psi.vector)))
    return float(np.sqrt(max(val, 0.0)))


def concurrence_sq_batch(columns: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """C^2 of each column of a (n*k, L) matrix of subnormalized vectors."""
    l = columns.shape[1]
    t = columns.T.reshape(l, dims.n, dims.k)
    g = t @ t.conj().transpose(0, 2, 1)
    n2 = np.trace(g, axis1=1, axis2=2).real
    t2 = np.sum((g * g.conj()).real, axis=(1, 2))
    return 2.0 * (n2 * n2 - t2)


def _wootters_batch_raw(blocks: np.ndarray) -> np.ndarray:
    """Unclamped lambda_1 - lambda_2 - lambda_3 - lambda_4 per 4x4 block.

    Unchecked fast path: assumes Hermitian PSD inputs.  Uses the Hermitian
    product sqrt(rho) rho_tilde sqrt(rho) so the spectrum stays real.  The
    raw difference may be negative (the concurrence clamps it at zero).
    """
    blocks = 0.5 * (blocks + blocks.conj().transpose(0, 2, 1))
    w, v = np.linalg.eigh(blocks)
    s = np.sqrt(np.clip(w, 0.0, None))
    sqrts = (v * s[:, None, :]) @ v.conj().transpose(0, 2, 1)
    tilde = SYSY @ blocks.conj() @ SYSY
    prod = sqrts @ tilde @ sqrts
    lam2 = np.linalg.eigvalsh(0.5 * (prod + prod.conj().transpose(0, 2, 1)))
    lam = np.sqrt(np.clip(lam2, 0.0, None))  # ascending
    return lam[:, 3] - lam[:, 2] - lam[:, 1] - lam[:, 0]


def _wootters_batch(blocks: np.ndarray) -> np.ndarray:
    """Wootters concurrences of a stack of (possibly unnormalized) 4x4 states."""
    c = _wootters_batch_raw(blocks)
    return np.where(c < CONCURRENCE_CLAMP, 0.0, c)


def wootters_concurrence(rho4: np.ndarray, psd_tol: float = linalg.TAU_PSD) -> float:
    """Closed-form concurrence of a 2x2 mixed state.

    Accepts unnormalized input (trace <= 1); the result is linear in the
    trace, matching the unnormalized-substate usage of the lower bound.
    """
    rho4 = linalg.require_hermitian(rho4)
    if rho4.shape != (4, 4):
        raise DimensionMismatch(f"expected a 4x4 matrix, got {rho4.shape}")
    wmin = float(np.linalg.eigvalsh(rho4)[0])
    if wmin < -psd_tol:
        raise NotPSD(f"matrix has eigenvalue {wmin:.3e} < -{psd_tol:.0e}")
    return float(_wootters_batch(rho4[None, :, :])[0])


@dataclass(frozen=True)
class SubstateSet:
    """The K(K-1)/2 projected 2x2 substates of a 2xK state in a chosen basis.

    blocks[m] is the 4x4 compression for pairs[m] = (i, j), unnormalized;
    concurrences[m] is its Wootters concurrence.
    """

    basis_unitary: np.ndarray
    pairs: tuple
    blocks: np.ndarray  # (P, 4, 4)
    concurrences: np.ndarray  # (P,)

    def total_sq(self) -> float:
        return float(np.sum(self.concurrences**2))

    def entangled_pairs(self, threshold: float) -> list:
        return [p for p, c in zip(self.pairs, self.concurrences) if c > threshold]


def require_unitary(u: np.ndarray, dim: int | None = None, tol: float = UNITARY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or (dim is not None and u.shape[0] != dim):
        raise DimensionMismatch(f"expected a square{'' if dim is None else f' {dim}x{dim}'} matrix")
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
    if defect > tol:
        raise NotUnitary(f"U^dag U deviates from identity by {defect:.3e}")
    return u


@lru_cache(maxsize=None)
def _pair_indices(k: int):
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


@lru_cache(maxsize=None)
def _pair_index_array(k: int) -> np.ndarray:
    """(P, 4) composite indices [(0,i), (0,j), (1,i), (1,j)] per pair i<j."""
    return np.array([[i, j, k + i, k + j] for i, j in _pair_indices(k)])


def _substate_blocks(rho_mat: np.ndarray, k: int, u: np.ndarray) -> tuple:
    """Unchecked fast path: 4x4 blocks of rho in the basis rotated by u."""
    b = np.zeros((2 * k, 2 * k), dtype=complex)  # I_2 (x) u
    b[:k, :k] = u
    b[k:, k:] = u
    rotated = b.conj().T @ rho_mat @ b
    idx = _pair_index_array(k)
    blocks = rotated[idx[:, :, None], idx[:, None, :]]
    return _pair_indices(k), blocks


def project_substates(rho: DensityMatrix, u: np.ndarray) -> SubstateSet:
    """Project a 2xK state onto all 2x2 subspaces of the rotated basis {U|k>}."""
    if rho.dims.n != 2:
        raise DimensionMismatch("substate projection requires a 2xK state")
    u = require_unitary(u, rho.dims.k)
    pairs, blocks = _substate_blocks(rho.matrix, rho.dims.k, u)
    conc = _wootters_batch(blocks)
    return SubstateSet(u, tuple(pairs), blocks, conc)


def pure_projection_identity_residual(psi: PureState, u: np.ndarray) -> float:
    """| C^2(psi) - sum over pairs of C^2 of the projected substate vectors |."""
    if psi.dims.n != 2:
        raise DimensionMismatch("projection identity requires a 2xK state")
    k = psi.dims.k
    u = require_unitary(u, k)
    rotated = np.kron(np.eye(2), u).conj().T @ psi.vector
    pairs = _pair_indices(k)
    cols = np.empty((4, len(pairs)), dtype=complex)
    for m, (i, j) in enumerate(pairs):
        cols[:, m] = rotated[np.array([i, j, k + i, k + j])]
    parts = concurrence_sq_batch(cols, BipartiteDims(2, 2))
    total = _concurrence_sq_from_matrix(psi.vector.reshape(2, k))
    return float(abs(total - np.sum(parts)))
