import numpy as np
import pytest

from concbound.bounds import (
    binary_entropy,
    bound_report,
    eof_bound_from_sum,
    eof_lower_bound,
    exactness_certificate,
    lower_bound_fixed_basis,
    lower_bound_optimized,
    ppt_verdict,
    upper_bound,
)
from concbound.concurrence import pure_concurrence, wootters_concurrence
from concbound.errors import DomainError, RankTooHigh, UnsupportedDims
from concbound.linalg import BipartiteDims
from concbound.optim import OptimizerConfig
from concbound.states import (
    FamilyParams,
    family_state,
    make_density_matrix,
    random_induced_state,
    random_pure_state,
)

D22 = BipartiteDims(2, 2)
D23 = BipartiteDims(2, 3)
FAST = OptimizerConfig(restarts=4, max_iters=600, seed=0)


def maximally_mixed(dims):
    return make_density_matrix(np.eye(dims.total, dtype=complex) / dims.total, dims)


def test_lower_bound_fixed_basis_family():
    rho = family_state(FamilyParams(0.5, 0.0))
    value, ss = lower_bound_fixed_basis(rho, np.eye(3))
    assert abs(value - 1 / 3) < 1e-12
    assert ss.entangled_pairs(1e-7) == [(0, 1)]


def test_lower_bound_optimized_at_least_fixed():
    rho = random_induced_state(6, D23, seed=31)
    fixed, _ = lower_bound_fixed_basis(rho, np.eye(3))
    res = lower_bound_optimized(rho, FAST)
    assert res.value >= fixed - 1e-12
    u = res.basis_unitary
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-10)


def test_lower_bound_zero_on_maximally_mixed():
    res = lower_bound_optimized(maximally_mixed(D23), FAST)
    assert res.value < 1e-9


def test_upper_bound_pure_state_is_its_concurrence():
    psi = random_pure_state(D23, seed=8)
    rho = make_density_matrix(psi.projector(), D23)
    res = upper_bound(rho, cfg=FAST)
    assert abs(res.value - pure_concurrence(psi)) < 1e-8


def test_upper_bound_matches_wootters_on_2x2():
    rho = random_induced_state(4, D22, seed=77)
    res = upper_bound(rho, length=4, cfg=OptimizerConfig(restarts=10, seed=0))
    assert abs(res.value - wootters_concurrence(rho.matrix)) < 1e-6
    assert res.diagnostics["reconstruction_defect"] < 1e-10


def test_upper_bound_respects_ordering():
    rho = random_induced_state(6, D23, seed=13)
    lb = lower_bound_optimized(rho, FAST)
    ub = upper_bound(rho, cfg=FAST)
    assert ub.value >= lb.value - 1e-9


def test_upper_bound_length_validation():
    rho = random_induced_state(6, D23, seed=14)
    with pytest.raises(RankTooHigh):
        upper_bound(rho, length=rho.rank() - 1, cfg=FAST)
    with pytest.raises(RankTooHigh):
        upper_bound(rho, length=37, cfg=FAST)


def test_eof_bound_endpoints_and_domain():
    assert eof_bound_from_sum(0.0) == 0.0
    assert abs(eof_bound_from_sum(1.0) - 1.0) < 1e-14
    with pytest.raises(DomainError):
        eof_bound_from_sum(1.1)
    assert abs(binary_entropy(0.5) - 1.0) < 1e-14


def test_eof_lower_bound_separable_state():
    rho = family_state(FamilyParams(0.1, 0.0))
    assert eof_lower_bound(rho, FAST) < 1e-9


def test_ppt_verdicts():
    assert ppt_verdict(maximally_mixed(D23)).verdict == "separable-PPT"
    assert abs(ppt_verdict(maximally_mixed(D23)).min_eigenvalue - 1 / 6) < 1e-12

    v = np.zeros(6, dtype=complex)
    v[0] = v[4] = 1 / np.sqrt(2)  # Bell pair embedded in 2x3
    rho = make_density_matrix(np.outer(v, v.conj()), D23)
    res = ppt_verdict(rho)
    assert res.verdict == "entangled-NPT"
    assert abs(res.min_eigenvalue - (-0.5)) < 1e-12

    boundary = ppt_verdict(family_state(FamilyParams(0.25, 0.0)))
    assert boundary.verdict == "separable-PPT"
    assert boundary.min_eigenvalue > -1e-10


def test_ppt_note_for_large_k():
    rho = maximally_mixed(BipartiteDims(2, 4))
    res = ppt_verdict(rho)
    assert res.verdict == "separable-PPT"
    assert "bound entangled" in res.note


def test_exactness_certificate_family():
    rho = family_state(FamilyParams(0.5, 0.0))
    cert = exactness_certificate(rho, OptimizerConfig(restarts=8, seed=0))
    assert cert.status == "certified"
    assert abs(cert.value - 1 / 3) < 1e-6
    # witness concurrence equals the certified value; remainder is PSD + PPT
    assert pure_concurrence(cert.witness) == pytest.approx(cert.value, abs=1e-6)


def test_exactness_certificate_not_applicable():
    rho = family_state(FamilyParams(0.5, 0.5))
    cert = exactness_certificate(rho, FAST)
    assert cert.status == "not-applicable"


def test_exactness_certificate_dims_guard():
    rho = random_induced_state(4, D22, seed=2)
    with pytest.raises(UnsupportedDims):
        exactness_certificate(rho, FAST)


def test_bound_report_maximally_mixed():
    rep = bound_report(maximally_mixed(D23), FAST)
    assert rep.lb_optimized < 1e-9
    assert rep.ub < 1e-6
    assert rep.ppt.verdict == "separable-PPT"
    assert rep.gap >= -1e-9
    obj = rep.to_json()
    for key in ("lb_standard", "lb_optimized", "ub", "gap", "eof_lb", "ppt_verdict"):
        assert key in obj


def test_bound_report_family_worked_example():
    rep = bound_report(family_state(FamilyParams(0.5, 0.5)), OptimizerConfig(restarts=6, seed=0))
    assert rep.lb_optimized == pytest.approx(np.sqrt(2) / 2, abs=1e-6)
    assert rep.ub == pytest.approx(np.sqrt(3) / 2, abs=1e-4)
    assert rep.exactness.status == "not-applicable"


def test_lower_bound_local_unitary_invariance():
    from concbound.optim import unitary_from_params
    from concbound.linalg import tensor_product

    rng = np.random.default_rng(23)
    rho = random_induced_state(6, D23, seed=55)
    base = lower_bound_optimized(rho, FAST).value
    w = tensor_product(
        unitary_from_params(rng.normal(size=4), 2),
        unitary_from_params(rng.normal(size=9), 3),
    )
    rotated = make_density_matrix(w @ rho.matrix @ w.conj().T, D23)
    assert abs(lower_bound_optimized(rotated, FAST).value - base) < 1e-5


def test_eof_family_worked_value():
    rho = family_state(FamilyParams(0.5, 0.5))
    expected = binary_entropy((1 + np.sqrt(0.5)) / 2)
    assert eof_lower_bound(rho, FAST) == pytest.approx(expected, abs=1e-6)
