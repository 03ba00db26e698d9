"""Gradient-free optimization utilities.

A restart-based Nelder-Mead driver plus smooth parametrizations of K x K
unitaries (matrix exponential of a Hermitian generator) and of L x r
isometries (deterministic column orthonormalization).  Both bound searches
run through :func:`maximize` / :func:`minimize`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidParams
from scipy.optimize import minimize as _scipy_minimize


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 20
    max_iters: int = 2000
    tol: float = 1e-9
    step_scale: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1 or self.tol <= 0 or self.step_scale <= 0:
            raise InvalidParams("optimizer configuration values must be positive")

    def with_(self, **kw) -> "OptimizerConfig":
        d = self.__dict__ | kw
        return OptimizerConfig(**d)


@dataclass
class OptResult:
    value: float
    params: np.ndarray
    diagnostics: dict = field(default_factory=dict)


# --- parametrizations --------------------------------------------------------


@lru_cache(maxsize=None)
def _triu_indices(dim: int):
    return np.triu_indices(dim, k=1)


def hermitian_from_params(params: np.ndarray, dim: int) -> np.ndarray:
    """Pack dim^2 reals into a Hermitian generator.

    First ``dim`` entries are the diagonal; each subsequent pair (a, b)
    fills H[i, j] = a + ib for i < j in row-major pair order.
    """
    params = np.asarray(params, dtype=float).reshape(-1)
    if params.size != dim * dim:
        raise InvalidParams(f"expected {dim * dim} parameters, got {params.size}")
    h = np.zeros((dim, dim), dtype=complex)
    h[np.diag_indices(dim)] = params[:dim]
    iu, ju = _triu_indices(dim)
    off = params[dim::2] + 1j * params[dim + 1 :: 2]
    h[iu, ju] = off
    h[ju, iu] = off.conj()
    return h


def unitary_from_params(params: np.ndarray, dim: int) -> np.ndarray:
    """U = exp(iH) via eigendecomposition of the Hermitian generator H.

    Zero parameters give the identity; the map is continuous and exactly
    unitary up to floating error.  dim = 2 uses the closed form
    e^{i t} (cos|v| I + i sin|v| v.sigma) for H = t I + v.sigma.
    """
    if dim == 2:
        d0, d1, a, b = (float(x) for x in np.asarray(params, dtype=float).reshape(4))
        t = 0.5 * (d0 + d1)
        vz = 0.5 * (d0 - d1)
        r = np.sqrt(a * a + b * b + vz * vz)
        cr = np.cos(r)
        sinc = np.sin(r) / r if r > 1e-300 else 1.0
        ph = np.exp(1j * t)
        return ph * np.array(
            [
                [cr + 1j * sinc * vz, sinc * (-b + 1j * a)],
                [sinc * (b + 1j * a), cr - 1j * sinc * vz],
            ]
        )
    h = hermitian_from_params(params, dim)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def orthonormal_columns(a: np.ndarray) -> np.ndarray:
    """Deterministic column orthonormalization via Householder QR.

    Total on all inputs (rank-deficient blocks, including all-zeros, still
    yield orthonormal columns) and deterministic for a given input.
    """
    a = np.asarray(a, dtype=complex)
    rows, cols = a.shape
    if rows < cols:
        raise InvalidParams(f"need rows >= cols, got {a.shape}")
    q, _ = np.linalg.qr(a)
    return q


def isometry_from_params(params: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """L x r matrix with orthonormal columns from 2*L*r real parameters."""
    params = np.asarray(params, dtype=float).reshape(-1)
    if params.size != 2 * rows * cols:
        raise InvalidParams(f"expected {2 * rows * cols} parameters, got {params.size}")
    a = params[: rows * cols].reshape(rows, cols) + 1j * params[rows * cols :].reshape(rows, cols)
    return orthonormal_columns(a)


# --- restart-based direct search ---------------------------------------------


def _start_points(dim: int, cfg: OptimizerConfig):
    """First start is the origin; the rest are seeded standard normals."""
    yield np.zeros(dim)
    for r in range(1, cfg.restarts):
        rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, r)))
        yield rng.normal(size=dim)


def _simplex(x0: np.ndarray, scale: float) -> np.ndarray:
    dim = x0.size
    s = np.tile(x0, (dim + 1, 1))
    for i in range(dim):
        s[i + 1, i] += scale
    return s


def _nelder_mead(fun, x0: np.ndarray, cfg: OptimizerConfig, polish_rounds: int = 1):
    """One local search: Nelder-Mead plus simplex-restart polish rounds."""
    evals = 0
    best_x, best_f = x0, fun(x0)
    evals += 1
    scale = cfg.step_scale
    for _ in range(1 + polish_rounds):
        res = _scipy_minimize(
            fun,
            best_x,
            method="Nelder-Mead",
            options={
                "maxiter": cfg.max_iters,
                "maxfev": 2 * cfg.max_iters,
                "xatol": 1e-8,
                "fatol": cfg.tol,
                "adaptive": True,
                "initial_simplex": _simplex(best_x, scale),
            },
        )
        evals += res.nfev
        if res.fun < best_f:
            improved = best_f - res.fun
            best_x, best_f = res.x, float(res.fun)
        else:
            improved = 0.0
        scale *= 0.1
        if improved < cfg.tol:
            break
    return best_x, best_f, evals


def minimize(objective, dim: int, cfg: OptimizerConfig, starts=None) -> OptResult:
    """Restart-based direct-search minimization.

    Deterministic given ``cfg.seed``; the best value over restarts is
    returned, ties broken by the lowest restart index.  ``starts`` may
    override the default start points (origin + seeded normals).
    """
    if dim < 1:
        raise InvalidParams("dimension must be >= 1")
    start_iter = starts if starts is not None else _start_points(dim, cfg)
    best = None
    total_evals = 0
    per_restart = []
    for idx, x0 in enumerate(start_iter):
        x0 = np.asarray(x0, dtype=float).reshape(-1)
        if x0.size != dim:
            raise InvalidParams(f"start point {idx} has dimension {x0.size}, expected {dim}")
        x, f, evals = _nelder_mead(objective, x0, cfg)
        total_evals += evals
        per_restart.append(f)
        if best is None or f < best[1]:
            best = (x, f, idx)
        if starts is None and idx + 1 >= cfg.restarts:
            break
    x, f, idx = best
    diagnostics = {
        "restarts_used": len(per_restart),
        "best_restart": idx,
        "total_evals": total_evals,
        "restart_values": per_restart,
    }
    return OptResult(float(f), x, diagnostics)


def maximize(objective, dim: int, cfg: OptimizerConfig, starts=None) -> OptResult:
    """Mirror of :func:`minimize` with the sign flipped."""
    res = minimize(lambda p: -objective(p), dim, cfg, starts=starts)
    res.value = -res.value
    res.diagnostics["restart_values"] = [-v for v in res.diagnostics["restart_values"]]
    return res
