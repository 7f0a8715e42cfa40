import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcn.kc import (
    KcParams,
    KcVariant,
    Violation,
    akc_con,
    akc_rec,
    bound_slack,
    con_grid,
    dist_mod,
    div_round,
    kc_con,
    kc_rec,
    rec_table,
    validate_params,
)

SIMPLE = KcParams(q=16, m=2, g=8, d=3)


def test_dist_mod_examples():
    assert dist_mod(-1, 7) == 1
    assert dist_mod(0, 5) == 0
    assert dist_mod(13, 16) == 3


def test_dist_mod_rejects_zero_modulus():
    with pytest.raises(ValueError):
        dist_mod(3, 0)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**4))
def test_dist_mod_range_and_symmetry(x, t):
    d = dist_mod(x, t)
    assert 0 <= d <= t // 2
    assert d == dist_mod(-x, t)


@given(st.integers(-10**9, 10**9), st.integers(1, 10**6))
def test_div_round_is_round_half_up(a, b):
    import math
    from fractions import Fraction

    assert div_round(a, b) == math.floor(Fraction(a, b) + Fraction(1, 2))


def test_validate_examples():
    assert validate_params(KcVariant.OKCN_SIMPLE, SIMPLE) is True
    bad = validate_params(KcVariant.OKCN_SIMPLE, KcParams(16, 2, 8, 4))
    assert isinstance(bad, Violation)
    assert bad.condition == "2md < q"
    assert not bad  # violations are falsy
    assert validate_params(KcVariant.FRODO, KcParams(2**15, 2**4, 2, 511)) is True
    assert isinstance(validate_params(KcVariant.FRODO, KcParams(2**15, 2**4, 2, 512)), Violation)


def test_bound_slack_sign():
    assert bound_slack(KcVariant.OKCN_SIMPLE, SIMPLE) >= 0
    assert bound_slack(KcVariant.AKCN_POWER2, KcParams(16, 2, 16, 3)) >= 0


def test_okcn_simple_example():
    out = kc_con(KcVariant.OKCN_SIMPLE, 13, SIMPLE)
    assert (out.k1, out.v) == (1, 5)
    assert kc_con(KcVariant.OKCN_SIMPLE, 0, SIMPLE).k1 == 0
    assert kc_rec(KcVariant.OKCN_SIMPLE, 0, 5, SIMPLE) == 1  # |13-0|_16 = 3 <= d


def test_okcn_generic_example():
    p = KcParams(q=14, m=2, g=2, d=1)  # alpha = 1 forces e = 0
    out = kc_con(KcVariant.OKCN_GENERIC, 3, p)
    assert (out.k1, out.v) == (0, 0)
    assert kc_rec(KcVariant.OKCN_GENERIC, 4, 0, p) == 0


def test_akcn_examples():
    pa = KcParams(q=16, m=2, g=8, d=2)
    assert akc_con(KcVariant.AKCN_GENERIC, 5, 1, pa) == 7
    assert akc_rec(KcVariant.AKCN_GENERIC, 6, 7, pa) == 1
    pp = KcParams(q=16, m=2, g=16, d=3)
    assert akc_con(KcVariant.AKCN_POWER2, 5, 1, pp) == 13
    assert akc_con(KcVariant.AKCN_POWER2, 0, 0, pp) == 0
    assert akc_rec(KcVariant.AKCN_POWER2, 7, 13, pp) == 1


def test_out_of_range_rejected():
    with pytest.raises(ValueError):
        kc_con(KcVariant.OKCN_SIMPLE, 16, SIMPLE)
    with pytest.raises(ValueError):
        kc_rec(KcVariant.OKCN_SIMPLE, 3, 8, SIMPLE)
    with pytest.raises(ValueError):
        akc_con(KcVariant.AKCN_POWER2, 3, 2, KcParams(16, 2, 16, 3))


def test_family_mixups_rejected():
    with pytest.raises(ValueError):
        kc_con(KcVariant.AKCN_GENERIC, 3, SIMPLE)
    with pytest.raises(ValueError):
        akc_rec(KcVariant.OKCN_SIMPLE, 3, 1, SIMPLE)


def _max_d(variant, q, m, g):
    """Largest d passing validate_params, or -1."""
    lo = -1
    for d in range(q // 2 + 1):
        if validate_params(variant, KcParams(q, m, g, d)) is True:
            lo = d
        else:
            break
    return lo


@settings(deadline=None, max_examples=60)
@given(st.integers(2, 48), st.data())
def test_kc_roundtrip_within_distance(q, data):
    m = data.draw(st.integers(2, q), label="m")
    g = data.draw(st.integers(2, q), label="g")
    d = _max_d(KcVariant.OKCN_GENERIC, q, m, g)
    if d < 0:
        return
    params = KcParams(q, m, g, d)
    sigma1, k1, v = con_grid(KcVariant.OKCN_GENERIC, params)
    delta = data.draw(st.integers(-d, d), label="delta")
    sigma2 = (sigma1 + delta) % q
    k2 = kc_rec(KcVariant.OKCN_GENERIC, sigma2, v, params)
    assert np.array_equal(k1, k2)


def test_zero_distance_identity(rng):
    # Rec(sigma1, v) always returns Con's key at distance zero
    for variant, params in [
        (KcVariant.OKCN_SIMPLE, SIMPLE),
        (KcVariant.OKCN_POWER2, KcParams(32, 2, 8, 6)),
        (KcVariant.OKCN_GENERIC, KcParams(19, 3, 4, 0)),
        (KcVariant.FRODO, KcParams(2**11, 2**2, 2, 127)),
    ]:
        sigma1, k1, v = con_grid(variant, params)
        assert np.array_equal(kc_rec(variant, sigma1, v, params), k1)


def test_frodo_parameter_example():
    # the Frodo-Recommended row satisfies 4md < q with d = 511
    assert validate_params(KcVariant.FRODO, KcParams(2**15, 2**4, 2, 511)) is True
    assert 4 * 16 * 511 == 32704 < 32768


def test_frodo_cross_check_q2048():
    # q = 2^11, m = 2^2: round-trips for every |sigma1 - sigma2|_q < 2^(Bbar-2)
    q, m = 2**11, 2**2
    radius = q // (4 * m)  # 2^(Bbar-2)
    params = KcParams(q, m, 2, radius - 1)
    sigma1, k1, v = con_grid(KcVariant.FRODO, params)
    for delta in range(-(radius - 1), radius):
        sigma2 = (sigma1 + delta) % q
        assert np.array_equal(kc_rec(KcVariant.FRODO, sigma2, v, params), k1), delta


def test_rec_table_shape():
    t = rec_table(KcVariant.OKCN_SIMPLE, SIMPLE)
    assert t.shape == (16, 8)
    assert t.min() >= 0 and t.max() < 2
