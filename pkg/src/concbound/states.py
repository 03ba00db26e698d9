"""Domain state types, random-state generators, and the analytic rho_{x,y} family."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    InvalidParams,
    NotPSD,
    TraceNotOne,
)
from .linalg import TAU_HERM, TAU_PSD, BipartiteDims

TRACE_TOL = 1e-10
RANK_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix on a bipartite n x k space.

    Construct via :func:`make_density_matrix`; the raw constructor does not
    validate.
    """

    dims: BipartiteDims
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.dims.total

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        w, _ = linalg.hermitian_eigensystem(self.matrix)
        return w

    def rank(self, tol: float = RANK_TOL) -> int:
        return int(np.sum(self.eigenvalues() > tol))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class PureState:
    """Complex vector on a bipartite space; the norm may differ from 1."""

    dims: BipartiteDims
    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex).reshape(-1)
        if v.size != self.dims.total:
            raise DimensionMismatch(
                f"vector length {v.size} != n*k = {self.dims.total}"
            )
        if not (np.all(np.isfinite(v.real)) and np.all(np.isfinite(v.imag))):
            raise InvalidParams("state vector has non-finite amplitudes")
        object.__setattr__(self, "vector", v)

    def norm_sq(self) -> float:
        return float(np.real(np.vdot(self.vector, self.vector)))

    def projector(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())

    def normalized(self) -> "PureState":
        n2 = self.norm_sq()
        if n2 <= 0.0:
            raise InvalidParams("cannot normalize a zero vector")
        return PureState(self.dims, self.vector / np.sqrt(n2))


@dataclass(frozen=True)
class Decomposition:
    """Weighted pure-state ensemble {p_l, |psi_l>} realizing a density matrix."""

    elements: tuple  # of (weight, PureState with unit norm)

    def __post_init__(self):
        elems = tuple(self.elements)
        if not elems:
            raise InvalidParams("decomposition must contain at least one element")
        total = 0.0
        dims = elems[0][1].dims
        for p, psi in elems:
            if not (0.0 < p <= 1.0 + TRACE_TOL):
                raise InvalidParams(f"weight {p} outside (0, 1]")
            if psi.dims != dims:
                raise DimensionMismatch("decomposition elements on mixed dimensions")
            if abs(psi.norm_sq() - 1.0) > 1e-8:
                raise InvalidParams("decomposition states must have unit norm")
            total += p
        if abs(total - 1.0) > TRACE_TOL:
            raise InvalidParams(f"weights sum to {total}, expected 1")
        if len(elems) > dims.total**2:
            raise InvalidParams(
                f"decomposition length {len(elems)} exceeds (n*k)^2 = {dims.total ** 2}"
            )
        object.__setattr__(self, "elements", elems)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def dims(self) -> BipartiteDims:
        return self.elements[0][1].dims

    def average_state(self) -> np.ndarray:
        d = self.dims.total
        rho = np.zeros((d, d), dtype=complex)
        for p, psi in self.elements:
            rho += p * psi.projector()
        return rho

    def reconstruction_defect(self, rho: np.ndarray) -> float:
        return float(np.max(np.abs(self.average_state() - rho)))


@dataclass(frozen=True)
class FamilyParams:
    """Parameters (x, y) of the analytic 2x3 family rho_{x,y}."""

    x: float
    y: float

    def __post_init__(self):
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise InvalidParams("family parameters must be finite")
        if self.y < 0 or self.x < self.y or self.x + self.y > 1 + 1e-12:
            raise InvalidParams(
                f"family parameters must satisfy x >= y >= 0, x + y <= 1; "
                f"got x={self.x}, y={self.y}"
            )


def make_density_matrix(m: np.ndarray, dims: BipartiteDims) -> DensityMatrix:
    """Validate a matrix as a density matrix, normalizing tolerable drift.

    Hermiticity within 1e-10 is symmetrized away; trace within 1e-10 of one
    is rescaled; eigenvalues below -1e-10 raise NotPSD.
    """
    m = np.asarray(m, dtype=complex)
    d = dims.total
    if m.shape != (d, d):
        raise DimensionMismatch(f"expected {d}x{d} matrix for dims {dims}, got {m.shape}")
    h = linalg.require_hermitian(m, TAU_HERM)
    tr = float(np.real(np.trace(h)))
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"trace is {tr}, expected 1 within {TRACE_TOL:.0e}")
    h = h / tr
    w = np.linalg.eigvalsh(h)
    if w[0] < -TAU_PSD:
        raise NotPSD(f"matrix has eigenvalue {w[0]:.3e} < -{TAU_PSD:.0e}")
    h.flags.writeable = False
    return DensityMatrix(dims, h)


def state_seed(master_seed: int, *path: int) -> int:
    """Derive a child seed from a master seed and an index path.

    Mixing function: ``numpy.random.SeedSequence((master, *path))``; the
    first generated 32-bit word is the child seed.  Documented so sweeps
    are reproducible across processes and schedules.
    """
    ss = np.random.SeedSequence((int(master_seed), *map(int, path)))
    return int(ss.generate_state(1)[0])


def random_induced_state(m_env: int, dims: BipartiteDims, seed: int) -> DensityMatrix:
    """Random mixed state from the induced (Fubini-Study) measure.

    Draws n*k*m_env i.i.d. standard complex Gaussian amplitudes (two real
    normals of variance 1/2 per amplitude), normalizes, and traces out the
    m_env-dimensional environment.  rank(rho) <= min(n*k, m_env).
    """
    if m_env < 1:
        raise InvalidParams(f"environment dimension must be >= 1, got {m_env}")
    rng = np.random.default_rng(seed)
    d = dims.total
    amp = rng.normal(scale=np.sqrt(0.5), size=(2, d * m_env))
    chi = amp[0] + 1j * amp[1]
    chi /= np.linalg.norm(chi)
    proj = np.outer(chi, chi.conj())
    rho = linalg.partial_trace(proj, (d, m_env), keep=0)
    return make_density_matrix(rho, dims)


def random_pure_state(dims: BipartiteDims, seed: int, unit_norm: bool = True) -> PureState:
    """Fubini-Study random pure state on the given bipartite space."""
    rng = np.random.default_rng(seed)
    amp = rng.normal(scale=np.sqrt(0.5), size=(2, dims.total))
    v = amp[0] + 1j * amp[1]
    if unit_norm:
        v /= np.linalg.norm(v)
    return PureState(dims, v)


# --- analytic 2x3 family ---------------------------------------------------

FAMILY_DIMS = BipartiteDims(2, 3)


def family_basis_states() -> tuple[np.ndarray, np.ndarray]:
    """The two entangled basis vectors of the family, unit norm.

    psi1 = (|0,0> + |1,1>)/sqrt2, psi2 = (|0,2> + |1,0>)/sqrt2 in 0-based
    product-basis labels (composite index i*3 + j).
    """
    psi1 = np.zeros(6, dtype=complex)
    psi1[0 * 3 + 0] = psi1[1 * 3 + 1] = 1 / np.sqrt(2)
    psi2 = np.zeros(6, dtype=complex)
    psi2[0 * 3 + 2] = psi2[1 * 3 + 0] = 1 / np.sqrt(2)
    return psi1, psi2


def family_state(params: FamilyParams) -> DensityMatrix:
    """rho_{x,y} = x |psi1><psi1| + y |psi2><psi2| + (1-x-y)/6 * identity."""
    psi1, psi2 = family_basis_states()
    rho = (
        params.x * np.outer(psi1, psi1.conj())
        + params.y * np.outer(psi2, psi2.conj())
        + (1.0 - params.x - params.y) / 6.0 * np.eye(6)
    )
    return make_density_matrix(rho, FAMILY_DIMS)


def family_c_tilde(params: FamilyParams) -> float:
    """Analytic single-substate concurrence value of the family."""
    x, y = params.x, params.y
    return x - np.sqrt(max((1 - x + 2 * y) * (1 - x - y), 0.0)) / 3.0


def family_separable(params: FamilyParams) -> bool:
    """Separability condition of the family (equivalent to c_tilde <= 0)."""
    x, y = params.x, params.y
    return 16 * x <= -2 - y + 3 * np.sqrt(4 + 4 * y - 7 * y * y)


def family_exactness_condition(params: FamilyParams) -> bool:
    """Parameter regime in which the analytic value is provably exact."""
    return params.x <= 1 - (3 * np.sqrt(5) - 1) / 2 * params.y


@dataclass(frozen=True)
class FamilyClassification:
    """Analytic classification of a family state.

    kind is one of 'separable' (concurrence 0), 'exact' (concurrence equals
    c_tilde), or 'unknown' (c_tilde is only a lower value).
    """

    kind: str
    c_tilde: float
    value: float | None = None  # exact concurrence when kind != 'unknown'
    lower: float = 0.0


def family_exact_concurrence(params: FamilyParams) -> FamilyClassification:
    """Classify a family state per the analytic results.

    The three regions are mutually exclusive and cover the whole valid
    parameter triangle: the separability condition is equivalent to
    c_tilde <= 0, and 'exact' additionally requires the exactness regime.
    """
    ct = family_c_tilde(params)
    if family_separable(params):
        return FamilyClassification("separable", ct, value=0.0, lower=0.0)
    if family_exactness_condition(params) and ct > 0:
        return FamilyClassification("exact", ct, value=ct, lower=ct)
    return FamilyClassification("unknown", ct, value=None, lower=max(ct, 0.0))


# --- JSON interchange format ------------------------------------------------


def density_matrix_to_json(rho: DensityMatrix) -> dict:
    """Schema: {"dims": [n, k], "re": [[...]], "im": [[...]]}, row-major."""
    return {
        "dims": [rho.dims.n, rho.dims.k],
        "re": np.real(rho.matrix).tolist(),
        "im": np.imag(rho.matrix).tolist(),
    }


def density_matrix_from_json(obj: dict) -> DensityMatrix:
    try:
        n, k = (int(d) for d in obj["dims"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParams(f"malformed density-matrix JSON: {exc}") from exc
    if re.shape != im.shape:
        raise InvalidParams("re and im blocks have different shapes")
    return make_density_matrix(re + 1j * im, BipartiteDims(n, k))


def load_density_matrix(path) -> DensityMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidParams(f"malformed JSON in {path}: {exc}") from exc
    return density_matrix_from_json(obj)


def save_density_matrix(rho: DensityMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(density_matrix_to_json(rho), fh)
