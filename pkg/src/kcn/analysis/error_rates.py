"""Failure-probability computations for the four protocol families.

Each function builds the exact distribution of the difference between the
two parties' pre-consensus values for one coordinate, applies the
consensus failure predicate, and lifts to the whole key with the union
bound.  The LWR computation follows the conditional decomposition over
the residue a = X1^T A^T X2 mod (q/p): conditioned on a, the two halves
of the difference are independent, so their joint law is assembled from
two per-residue convolutions instead of one intractable joint one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from kcn.noise import Pmf, uniform_pmf
from kcn.analysis import pmf as pm
from kcn.kc import KcVariant
from kcn.suites import Suite

__all__ = [
    "ErrorReport",
    "lwr_error_rate",
    "lwe_error_rate",
    "hybrid_error_rate",
    "rlwe_error_rate",
    "zarzar_error_rate",
    "error_rate",
    "lwr_diff_distribution",
]


@dataclass(frozen=True)
class ErrorReport:
    per_symbol: float  # one coordinate (matrix families) or one bit (ring)
    overall: float

    @property
    def log2_overall(self) -> float:
        return math.log2(self.overall) if self.overall > 0 else -math.inf

    @property
    def log2_per_symbol(self) -> float:
        return math.log2(self.per_symbol) if self.per_symbol > 0 else -math.inf


def _union(p: float, k: int) -> float:
    return min(1.0, p * k)


# ---------------------------------------------------------------------------
# LWE protocol, optional bit cutting

def _cut_noise_pmf(t: int) -> Pmf:
    # uncut(cut(y)) - y for uniform y: uniform over (-2^(t-1), 2^(t-1)]
    if t == 0:
        return Pmf(0, np.ones(1))
    half = 1 << (t - 1)
    return uniform_pmf(-half + 1, half)


def _frodo_fail_prob(folded: np.ndarray, q: int, m: int) -> float:
    """Exact per-coordinate failure of the Frodo reconciliation.

    Averaged over the uniform position of sigma1 inside its signal block of
    length L = q/(2m), the failure fraction at centered offset c is the
    trapezoid clip((|c| - L/2) / L, 0, 1): offsets up to L/2 always
    round back, offsets beyond 3L/2 never do.
    """
    big_l = q // (2 * m)
    r = np.arange(q)
    c = np.minimum(r, q - r)
    frac = np.clip((c - big_l / 2) / big_l, 0.0, 1.0)
    return float(np.dot(folded, frac))


def lwe_error_rate(suite: Suite) -> ErrorReport:
    """Failure probability of the LWE protocol from the coordinate difference
    X1^T (E2 + eps(Y2)) - E1^T X2 - E_sigma, with Y2 treated as uniform.

    The whole-key rate is the union bound over key bits, matching the
    accounting used for the published tables.
    """
    if suite.family != "lwe":
        raise ValueError("lwe suite required")
    chi = suite.noise.pmf()
    q, n, d = suite.q, suite.n, suite.kc.d
    term1 = pm.product_pmf(chi, pm.conv(chi, _cut_noise_pmf(suite.t)))
    term2 = pm.product_pmf(chi, chi)
    dist = pm.conv(pm.iid_sum(pm.trim(term1), n), pm.negate(pm.iid_sum(pm.trim(term2), n)))
    dist = pm.conv(dist, pm.negate(chi))  # E_sigma
    folded = pm.fold_mod(dist, q)
    if suite.variant is KcVariant.FRODO:
        p_coord = _frodo_fail_prob(folded, q, suite.kc.m)
    else:
        p_coord = pm.cyclic_fail_prob(folded, d)
    return ErrorReport(p_coord, _union(p_coord, suite.key_bits))


# ---------------------------------------------------------------------------
# LWR protocol

def _residue_value_joint(chi: Pmf, w: int) -> tuple[np.ndarray, int]:
    """Joint measure of (y x mod w, (y - e) x) per coordinate.

    y and e are independent uniform over [-w/2, w/2 - 1], x ~ chi.  Returns
    (array of shape (w, L), value offset).
    """
    kmax = max(abs(int(chi.support[0])), abs(int(chi.support[-1])))
    vmax = (w - 1) * kmax
    arr = np.zeros((w, 2 * vmax + 1))
    us = np.arange(-w // 2, w // 2)
    pu = 1.0 / w
    for x, px in zip(chi.support, chi.probs):
        if px == 0:
            continue
        for y in us:
            res = (y * x) % w
            vals = (y - us) * x + vmax
            np.add.at(arr[res], vals, px * pu * pu)
    return arr, -vmax


def _joint_conv(a, b, w: int):
    (pa, oa), (pb, ob) = a, b
    out = np.zeros((w, pa.shape[1] + pb.shape[1] - 1))
    for r1 in range(w):
        for r2 in range(w):
            out[(r1 + r2) % w] += np.convolve(pa[r1], pb[r2])
    return _joint_trim(out, oa + ob)


def _joint_trim(arr: np.ndarray, offset: int):
    col = arr.sum(axis=0)
    c = np.cumsum(col)
    lo = int(np.searchsorted(c, pm.PROB_FLOOR))
    hi = len(col) - int(np.searchsorted(np.cumsum(col[::-1]), pm.PROB_FLOOR))
    lo = max(0, min(lo, hi - 1))
    return arr[:, lo:hi].copy(), offset + lo


def _joint_power(coord, n: int, w: int):
    acc = None
    sq = coord
    while n:
        if n & 1:
            acc = sq if acc is None else _joint_conv(acc, sq, w)
        n >>= 1
        if n:
            sq = _joint_conv(sq, sq, w)
    return acc


def _zero_divisor_part(chi: Pmf, w: int) -> Pmf:
    """Sub-measure of chi on the zero divisors of Z_w (unnormalized)."""
    probs = np.where([math.gcd(int(x), w) != 1 for x in chi.support], chi.probs, 0.0)
    return Pmf(int(chi.support[0]), probs)


def lwr_diff_distribution(n: int, q: int, p: int, chi: Pmf,
                          condition_units: bool = False) -> np.ndarray:
    """Distribution of D = X1^T{A^T X2}_p - ({A X1}_p^T X2 - eps^T X2) mod q,
    as a length-q array; Sigma2 - Sigma1 = round((p/q) D) mod p.

    Conditioned on the residue a = X1^T A^T X2 mod (q/p), the two halves
    c1 = X1^T y2 (with c1 = a mod q/p) and c2 = y1^T X2 - eps^T X2 (whose
    y-part has residue a) are independent, so D's law is assembled from one
    convolution per residue class.  With condition_units=True the law is
    additionally conditioned on both secrets containing a unit of Z_{q/p}
    (the regime where the decomposition is exact, via inclusion-exclusion
    over all-zero-divisor secrets); without it that correction is ignored,
    which is negligible at production sizes.
    """
    w = q // p

    def one_sided(x_chi: Pmf):
        t1 = pm.trim(pm.product_pmf(x_chi, uniform_pmf(-w // 2, w // 2 - 1)))
        side1 = pm.iid_sum(t1, n)  # c1 = X^T y2; residue = c1 mod w
        side2 = _joint_power(_residue_value_joint(x_chi, w), n, w)
        return side1, side2

    f1, f2 = one_sided(chi)
    pairs = [(f1, f2, 1.0)]
    norm = 1.0
    if condition_units:
        zd = _zero_divisor_part(chi, w)
        p0 = zd.mass
        if p0 > 0:
            z1, z2 = one_sided(Pmf(zd.offset, zd.probs / p0))
            p0n = p0**n
            pairs = [(f1, f2, 1.0), (z1, f2, -p0n), (f1, z2, -p0n), (z1, z2, p0n**2)]
            norm = (1.0 - p0n) ** 2

    folded = np.zeros(q)
    for a in range(w):
        for s1, (j2, off2), wt in pairs:
            # mask side 1 to its residue class; side 2 carries all values
            mask = (s1.offset + np.arange(len(s1.probs))) % w == a
            arr1 = np.where(mask, s1.probs, 0.0)
            arr2 = j2[a]
            conv = np.convolve(arr1, arr2[::-1]) * (wt / norm)
            lo = s1.offset - (off2 + len(arr2) - 1)
            idx = (lo + np.arange(len(conv))) % q
            np.add.at(folded, idx, conv * w)  # divide by Pr[a] = 1/w
    return folded


def lwr_error_rate(suite: Suite, condition_units: bool = False) -> ErrorReport:
    """|Sigma1 - Sigma2|_p > d failure, union over the l_A l_B coordinates."""
    if suite.family != "lwr":
        raise ValueError("lwr suite required")
    q, p, d = suite.q, suite.p, suite.kc.d
    folded = lwr_diff_distribution(suite.n, q, p, suite.noise.pmf(), condition_units)
    r = np.arange(q)
    s = (2 * p * r + q) // (2 * q) % p
    bad = np.minimum(s, p - s) > d
    p_coord = float(np.sum(folded[bad]))
    return ErrorReport(p_coord, _union(p_coord, suite.l_a * suite.l_b))


# ---------------------------------------------------------------------------
# Hybrid public-key construction

def hybrid_error_rate(suite: Suite, exact_region: bool = False) -> ErrorReport:
    """Hybrid failure from Sigma2 - Sigma1 = round((p/q)(E1^T X2 + X1^T u)).

    The default threshold is |.|_p > q_kc/2m - 1, the distance the
    published table is computed at.  The reconciliation here has
    m | g | q_kc, so round(k1 q/m) is exact and the only rounding loss is
    the hint's; exact_region=True averages over the q_kc/g equally likely
    hint offsets, giving the protocol's true (slightly higher) failure
    rate instead of the table's accounting.
    """
    if suite.family != "hybrid":
        raise ValueError("hybrid suite required")
    chi = suite.noise.pmf()
    q, p = suite.q, suite.p
    qk, m, g = suite.kc.q, suite.kc.m, suite.kc.g
    w = q // p
    ex = pm.iid_sum(pm.trim(pm.product_pmf(chi, chi)), suite.n_b)
    xu = pm.iid_sum(pm.trim(pm.product_pmf(chi, uniform_pmf(-w // 2, w // 2 - 1))), suite.n)
    folded = pm.fold_mod(pm.conv(ex, xu), q)
    r = np.arange(q)
    s = (2 * p * r + q) // (2 * q) % p
    if exact_region:
        # hint offset (q_kc/g) eps2 ranges over [-(q_kc/2g - 1), q_kc/2g]
        s_c = np.where(s < p // 2, s, s - p)
        step = qk // g
        half = qk // (2 * m)
        frac = np.zeros(q)
        for u in range(-(step // 2 - 1), step // 2 + 1):
            frac += (s_c + u < -half) | (s_c + u >= half)
        p_coord = float(np.dot(folded, frac / step))
    else:
        p_coord = float(np.sum(folded[np.minimum(s, p - s) > qk // (2 * m) - 1]))
    return ErrorReport(p_coord, _union(p_coord, suite.l_a * suite.l_b))


# ---------------------------------------------------------------------------
# RLWE protocol, plain or SEC

def rlwe_error_rate(suite: Suite) -> ErrorReport:
    """Per-coefficient failure of e2 x1 - e1 x2 - e_sigma, plus the block
    union bound (plain: n-fold; SEC: one corrected bit per block)."""
    if suite.family != "rlwe" or suite.mode not in ("plain", "sec"):
        raise ValueError("rlwe suite in plain or sec mode required")
    chi = suite.noise.pmf()
    q, n, d = suite.q, suite.n, suite.kc.d
    term = pm.trim(pm.product_pmf(chi, chi))
    folded = pm.iid_sum_mod(term, 2 * n, q)
    folded = pm._cyclic_conv(folded, pm.fold_mod(pm.negate(chi), q), q)
    per_bit = pm.cyclic_fail_prob(folded, d)
    if suite.mode == "plain":
        overall = _union(per_bit, n)
    else:
        blocks = suite.sec_blocks
        block_bits = (1 << suite.n_h) + suite.n_h
        overall = _union(per_bit**2, blocks * math.comb(block_bits, 2))
    return ErrorReport(per_bit, overall)


# ---------------------------------------------------------------------------
# ZarZar (E8 mode) chi-square pipeline

@dataclass(frozen=True)
class ZarzarReport:
    norm_bound: int  # floor of (q-1)/2 - sqrt(2)(q/g+1) - 10 sigma
    threshold: int  # floor of norm_bound^2 / (4 sigma^4)
    tail: float  # P(distr > threshold - 64)
    overall: float

    @property
    def log2_tail(self) -> float:
        return math.log2(self.tail)

    @property
    def log2_overall(self) -> float:
        return math.log2(self.overall)


def zarzar_error_rate(sigma_sq: float, q: int, g: int, n: int) -> ZarzarReport:
    """Tail bound for the E8-coded ring protocol via the chi-square pipeline:
    discretize chi^2(2) at 0.02 and chi^2(n/2) at 0.1, multiply, merge at 4,
    add twice, then evaluate the norm-bound tail and the block union bound.
    """
    if n % 8:
        raise ValueError("n must be divisible by 8")
    d2 = pm.discretize_chisq(2, 0.02)
    dbig = pm.discretize_chisq(n // 2, 0.1)
    prod = pm.pmf_product_var(d2, dbig, merge_step=4.0)
    prod = pm.step_trim(prod, 2.0**-160)
    distr = pm.step_trim(pm.pmf_add(prod, prod), 2.0**-160)
    distr = pm.pmf_add(distr, distr)
    sigma = math.sqrt(sigma_sq)
    norm_bound = math.floor((q - 1) / 2 - math.sqrt(2) * (q / g + 1) - 10 * sigma)
    threshold = math.floor(norm_bound**2 / (4 * sigma_sq**2))
    tail = pm.tail_ge(distr, threshold - 64)
    overall = _union(tail, n // 8)
    return ZarzarReport(norm_bound, threshold, tail, overall)


def error_rate(suite: Suite):
    """Dispatch on the suite family; returns ErrorReport or ZarzarReport."""
    if suite.family == "lwr":
        return lwr_error_rate(suite)
    if suite.family == "lwe":
        return lwe_error_rate(suite)
    if suite.family == "hybrid":
        return hybrid_error_rate(suite)
    if suite.family == "rlwe":
        if suite.mode in ("plain", "sec"):
            return rlwe_error_rate(suite)
        if suite.mode == "e8":
            return zarzar_error_rate(suite.noise.variance(), suite.q, suite.code_g, suite.n)
        raise ValueError(f"no numerical error model for mode {suite.mode}")
    raise ValueError(suite.family)
