"""Discrete noise distributions and closeness measures.

The sampling tables below are cumulative-count tables: a draw consumes
exactly `bits` random bits and maps them through the inverse CDF, so the
sampled distribution equals the table counts exactly.  Alongside them live
the centered binomial Psi_16, the bit-counting sampler B^{a,b}, discrete
Gaussian reference PMFs, and the Renyi divergence used to justify the
table approximations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NoiseTable",
    "Pmf",
    "TABLES",
    "sample_table",
    "sample_centered_binomial",
    "sample_bab",
    "rounded_gaussian_pmf",
    "renyi_divergence",
    "psi16_pmf",
    "bab_pmf",
    "table_pmf",
    "uniform_pmf",
    "table_from_pmf",
]


@dataclass(frozen=True)
class Pmf:
    """Probability mass function over a contiguous integer support.

    `probs[i]` is the probability of `offset + i`.  Total mass is kept
    within 2^-40 of 1 by construction everywhere in this package.
    """

    offset: int
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", np.asarray(self.probs, dtype=np.float64))

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.probs))

    @property
    def mass(self) -> float:
        return float(np.sum(self.probs))

    def p(self, x: int) -> float:
        i = x - self.offset
        return float(self.probs[i]) if 0 <= i < len(self.probs) else 0.0

    def mean(self) -> float:
        return float(np.dot(self.support, self.probs))

    def variance(self) -> float:
        mu = self.mean()
        return float(np.dot((self.support - mu) ** 2, self.probs))


@dataclass(frozen=True)
class NoiseTable:
    """Symmetric sampling table: counts out of 2^bits for values 0, ±1, ..."""

    name: str
    bits: int
    counts: tuple  # counts[k] is the count of +/-k (0 listed once)
    variance: float = 0.0
    renyi_order: float = 0.0
    renyi_divergence: float = 0.0
    _cdf: np.ndarray = field(init=False, repr=False, compare=False)
    _values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        total = self.counts[0] + 2 * sum(self.counts[1:])
        if total != 1 << self.bits:
            raise ValueError(f"{self.name}: counts sum to {total}, not 2^{self.bits}")
        kmax = len(self.counts) - 1
        values = np.arange(-kmax, kmax + 1, dtype=np.int64)
        cnt = np.array([self.counts[abs(v)] for v in values], dtype=np.int64)
        object.__setattr__(self, "_values", values)
        object.__setattr__(self, "_cdf", np.cumsum(cnt))

    @property
    def support_bound(self) -> int:
        return len(self.counts) - 1

    def pmf(self) -> Pmf:
        kmax = self.support_bound
        cnt = np.array([self.counts[abs(v)] for v in range(-kmax, kmax + 1)], dtype=np.float64)
        return Pmf(-kmax, cnt / (1 << self.bits))


# Table entries: counts of 0, +/-1, +/-2, ... out of 2^bits.
TABLES = {
    t.name: t
    for t in [
        NoiseTable("D_R", 16, (19572, 14792, 6383, 1570, 220, 17), 1.70, 500.0, 1.0000396),
        NoiseTable("D_P", 16, (21456, 15326, 5580, 1033, 97, 4), 1.40, 500.0, 1.0000277),
        NoiseTable("D1", 8, (94, 62, 17, 2), 1.10, 15.0, 1.0015832),
        NoiseTable("D2", 12, (1646, 992, 216, 17), 0.90, 75.0, 1.0003146),
        NoiseTable("D3", 12, (1238, 929, 393, 94, 12, 1), 1.66, 30.0, 1.0002034),
        NoiseTable("D4", 16, (19794, 14865, 6292, 1499, 200, 15), 1.66, 500.0, 1.0000274),
        NoiseTable("D5", 16, (22218, 15490, 5242, 858, 67, 2), 1.30, 500.0, 1.0000337),
        NoiseTable("DB1", 8, (88, 61, 20, 3), 1.25, 25.0, 1.0021674),
        NoiseTable("DB2", 12, (1570, 990, 248, 24, 1), 1.00, 40.0, 1.0001925),
        NoiseTable("DB3", 12, (1206, 919, 406, 104, 15, 1), 1.75, 100.0, 1.0003011),
        NoiseTable("DB4", 16, (19304, 14700, 6490, 1659, 245, 21, 1), 1.75, 500.0, 1.0000146),
    ]
}


def sample_table(table: NoiseTable, rng, size=None):
    """Draw from the table: `bits` random bits through the inverse CDF."""
    r = rng.integers(0, 1 << table.bits, size=size, dtype=np.int64)
    idx = np.searchsorted(table._cdf, r, side="right")
    out = table._values[idx]
    return out if size is not None else int(out)


def sample_centered_binomial(rng, size=None):
    """Psi_16: sum of 16 centered binomial terms, 32 bits per draw, variance 8."""
    r = rng.integers(0, 1 << 32, size=size, dtype=np.uint64)
    lo = np.bitwise_count(r & np.uint64(0xFFFF)).astype(np.int64)
    hi = np.bitwise_count(r >> np.uint64(16)).astype(np.int64)
    out = lo - hi
    return out if size is not None else int(out)


def sample_bab(a: int, b: int, rng, size=None):
    """B^{a,b}: sum of a bits plus twice b bits, centered; variance a/4 + b."""
    if a % 2:
        raise ValueError("a must be even")
    if a + b > 63:
        raise ValueError("a + b must fit one 64-bit draw")
    r = rng.integers(0, 1 << (a + b), size=size, dtype=np.uint64)
    ones = np.bitwise_count(r & np.uint64((1 << a) - 1)).astype(np.int64)
    twos = np.bitwise_count(r >> np.uint64(a)).astype(np.int64)
    out = ones + 2 * twos - (a // 2 + b)
    return out if size is not None else int(out)


def rounded_gaussian_pmf(sigma: float, cutoff: int | None = None) -> Pmf:
    """Rounded Gaussian: mass of N(0, sigma^2) falling nearest to each integer.

    P(x) = Phi((x+1/2)/sigma) - Phi((x-1/2)/sigma), renormalized over
    [-cutoff, cutoff]; cutoff defaults to ceil(12 sigma), far past any mass
    measured against it.  This is the reference the shipped tables
    approximate (their variance exceeds sigma^2 by the rounding term 1/12).
    """
    if sigma <= 0:
        raise ValueError("sigma > 0")
    if cutoff is None:
        cutoff = max(1, math.ceil(12 * sigma))
    edges = (np.arange(-cutoff, cutoff + 2, dtype=np.float64) - 0.5) / (sigma * math.sqrt(2))
    cdf = 0.5 * (1.0 + np.array([math.erf(z) for z in edges]))
    w = np.diff(cdf)
    return Pmf(-cutoff, w / np.sum(w))


def renyi_divergence(p: Pmf, q: Pmf, a: float) -> float:
    """R_a(P || Q) = (sum P(x)^a / Q(x)^(a-1))^(1/(a-1)), log-domain."""
    if a <= 1:
        raise ValueError("order a > 1")
    terms = []
    for x, px in zip(p.support, p.probs):
        if px == 0:
            continue
        qx = q.p(int(x))
        if qx == 0:
            raise ValueError(f"support violation: P({x}) > 0 but Q({x}) = 0")
        terms.append(a * math.log(px) - (a - 1) * math.log(qx))
    m = max(terms)
    lse = m + math.log(sum(math.exp(t - m) for t in terms))
    return math.exp(lse / (a - 1))


# ---------------------------------------------------------------------------
# Exact PMFs of the samplers above, for the analysis engine.

def psi16_pmf() -> Pmf:
    """Exact Psi_16 PMF: binomial(32, 1/2) shifted to [-16, 16]."""
    probs = np.array([math.comb(32, k) for k in range(33)], dtype=np.float64)
    return Pmf(-16, probs / 2.0**32)


def bab_pmf(a: int, b: int) -> Pmf:
    """Exact B^{a,b} PMF via convolution of its bit contributions."""
    if a % 2:
        raise ValueError("a must be even")
    pa = np.array([math.comb(a, k) for k in range(a + 1)], dtype=np.float64) / 2.0**a
    pb = np.zeros(2 * b + 1)
    pb[::2] = np.array([math.comb(b, k) for k in range(b + 1)], dtype=np.float64) / 2.0**b
    return Pmf(-(a // 2 + b), np.convolve(pa, pb))


def table_pmf(name: str) -> Pmf:
    return TABLES[name].pmf()


def uniform_pmf(lo: int, hi: int) -> Pmf:
    """Uniform over the integer range [lo, hi]."""
    n = hi - lo + 1
    return Pmf(lo, np.full(n, 1.0 / n))


def table_from_pmf(pmf: Pmf, bits: int, name: str = "derived") -> NoiseTable:
    """Quantize a symmetric PMF into an exact 2^bits sampling table."""
    kmax = max(abs(int(pmf.support[0])), abs(int(pmf.support[-1])))
    probs = np.array([pmf.p(k) for k in range(kmax + 1)])  # per-sign masses
    total = 1 << bits
    raw = probs * total
    counts = np.floor(raw).astype(np.int64)
    shortfall = total - (counts[0] + 2 * int(np.sum(counts[1:])))
    frac = raw - counts
    order = np.argsort(-frac)
    i = 0
    while shortfall > 0:
        k = int(order[i % len(order)])
        step = 1 if k == 0 else 2
        if step <= shortfall:
            counts[k] += 1
            shortfall -= step
        i += 1
    while (counts[-1] == 0) and len(counts) > 1:
        counts = counts[:-1]
    return NoiseTable(name, bits, tuple(int(c) for c in counts), pmf.variance())
