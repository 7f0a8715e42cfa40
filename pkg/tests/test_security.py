import pytest

from kcn.analysis.security import (
    AttackEstimate,
    post_reduction_costs,
    security_estimate,
    suite_security,
)
from kcn.suites import get_suite


def test_estimate_shape_and_invariants():
    primal, dual = security_estimate(680, 2**15, 1.70, 5.25)
    for est in (primal, dual):
        assert isinstance(est, AttackEstimate)
        assert est.b <= est.m + 680  # block size cannot exceed the lattice dim
        assert est.c_bits >= est.q_bits >= est.p_bits
    # harder instance -> larger block size
    harder, _ = security_estimate(832, 2**15, 1.70, 5.25)
    assert harder.b > primal.b


def test_lwr_recommended_rows():
    # published: primal (b=461, 143/131/104), dual (b=458, 142/130/103)
    primal, dual = security_estimate(680, 2**15, 1.70, 5.25, model="matrix")
    assert abs(primal.b - 461) <= 2
    assert abs(round(primal.c_bits) - 143) <= 2
    assert abs(dual.b - 458) <= 2
    assert abs(round(dual.q_bits) - 130) <= 2


def test_zarzar_core_model():
    primal, dual = security_estimate(512, 12289, 22.0, 22.0, model="core")
    assert abs(primal.b - 491) <= 2 and abs(round(primal.q_bits) - 130) <= 2
    assert abs(dual.b - 489) <= 2 and abs(round(dual.c_bits) - 143) <= 2
    # core model carries no overhead: C = 0.292 b exactly for the dual at R=1
    assert abs(dual.c_bits - 0.292 * dual.b) < 1e-9


def test_suite_security_dispatch():
    rows = suite_security(get_suite("hybrid-recommended"))
    assert [r[0] for r in rows] == ["lwe", "lwr"]
    rows = suite_security(get_suite("okcn-t2"))
    assert rows[0][0] == "lwe" and len(rows) == 1
    assert suite_security(get_suite("zarzar"))[0][0] == "rlwe"


def test_post_reduction_adjustment():
    # OKCN-T2 published: rounded-Gaussian Q=136/135 -> post-reduction 135/134
    adj = post_reduction_costs(136.0, 500.0, 1.0000337, 712, 8, 8)
    assert abs(adj - 135) <= 1
    # LWE-Recommended: C 155 -> 146 at order 30, divergence 1.0002034
    adj = post_reduction_costs(155.0, 30.0, 1.0002034, 718, 8, 8)
    assert abs(adj - 146) <= 1


def test_bad_model_rejected():
    with pytest.raises(ValueError):
        security_estimate(100, 2**10, 1.0, 1.0, model="bogus")
