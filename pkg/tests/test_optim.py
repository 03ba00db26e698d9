import numpy as np
import pytest

from concbound.errors import InvalidParams
from concbound.optim import (
    OptimizerConfig,
    hermitian_from_params,
    isometry_from_params,
    maximize,
    minimize,
    orthonormal_columns,
    unitary_from_params,
)

RNG = np.random.default_rng(17)


def test_hermitian_from_params():
    for dim in (2, 3, 5):
        h = hermitian_from_params(RNG.normal(size=dim * dim), dim)
        assert np.allclose(h, h.conj().T)
    with pytest.raises(InvalidParams):
        hermitian_from_params(np.zeros(3), 2)


def test_unitary_from_params_is_unitary():
    for dim in (2, 3, 4):
        u = unitary_from_params(RNG.normal(size=dim * dim), dim)
        assert np.allclose(u.conj().T @ u, np.eye(dim), atol=1e-12)
    assert np.allclose(unitary_from_params(np.zeros(9), 3), np.eye(3), atol=1e-14)


def test_unitary_dim2_closed_form_matches_eigh_route():
    # the 2x2 path is special-cased; it must equal exp(iH) computed generally
    from scipy.linalg import expm

    for i in range(50):
        p = RNG.normal(size=4) * (10.0 ** RNG.integers(-3, 2))
        u = unitary_from_params(p, 2)
        ref = expm(1j * hermitian_from_params(p, 2))
        assert np.max(np.abs(u - ref)) < 1e-12, i


def test_isometry_from_params():
    w = isometry_from_params(RNG.normal(size=2 * 5 * 3), 5, 3)
    assert w.shape == (5, 3)
    assert np.allclose(w.conj().T @ w, np.eye(3), atol=1e-12)
    with pytest.raises(InvalidParams):
        isometry_from_params(np.zeros(7), 5, 3)


def test_orthonormal_columns_on_degenerate_input():
    q = orthonormal_columns(np.zeros((4, 2), dtype=complex))
    assert np.allclose(q.conj().T @ q, np.eye(2), atol=1e-12)


def test_minimize_quadratic():
    cfg = OptimizerConfig(restarts=4, max_iters=500, seed=1)
    res = minimize(lambda x: float(np.sum((x - 1.5) ** 2)), 3, cfg)
    assert res.value < 1e-10
    assert np.allclose(res.params, 1.5, atol=1e-4)
    assert res.diagnostics["restarts_used"] == 4


def test_minimize_deterministic():
    cfg = OptimizerConfig(restarts=3, max_iters=300, seed=42)

    def fun(x):
        return float(np.cos(x[0]) + (x[1] - 0.2) ** 2)

    a = minimize(fun, 2, cfg)
    b = minimize(fun, 2, cfg)
    assert a.value == b.value
    assert np.array_equal(a.params, b.params)


def test_maximize_mirrors_minimize():
    cfg = OptimizerConfig(restarts=3, max_iters=300, seed=5)
    res = maximize(lambda x: float(-np.sum(x * x)), 2, cfg)
    assert abs(res.value) < 1e-10


def test_unitary_sigma_x_closed_form():
    # H = (pi/2) sigma_x packs as [0, 0, pi/2, 0]; exp(iH) = i sigma_x
    p = np.array([0.0, 0.0, np.pi / 2, 0.0])
    h = hermitian_from_params(p, 2)
    assert np.allclose(h, (np.pi / 2) * np.array([[0, 1], [1, 0]]), atol=1e-14)
    u = unitary_from_params(p, 2)
    assert np.allclose(u, 1j * np.array([[0, 1], [1, 0]]), atol=1e-12)


def test_maximize_finds_global_of_bimodal():
    def fun(x):
        return float(
            2.0 * np.exp(-np.sum((x - 1.5) ** 2)) + np.exp(-np.sum((x + 1.5) ** 2))
        )

    hits = 0
    for seed in range(10):
        res = maximize(fun, 2, OptimizerConfig(restarts=20, max_iters=500, seed=seed))
        hits += res.value >= 2.0 - 1e-6
    assert hits >= 10 * 0.95


def test_maximize_constant_objective():
    res = maximize(lambda x: 1.0, 3, OptimizerConfig(restarts=2, max_iters=50, seed=0))
    assert res.value == 1.0
