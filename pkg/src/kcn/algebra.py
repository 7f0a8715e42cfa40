"""Integer-lattice arithmetic shared by the protocols.

Matrices over Z_q are plain int64 ndarrays with elements in [0, q-1];
polynomials in Z_q[x]/(x^n + 1) are RingPoly values carrying a domain flag
so coefficient- and NTT-domain data cannot be mixed silently.  The public
matrix / ring element is expanded deterministically from a 32-byte seed
with SHAKE-128, domain-separated by a one-byte role tag.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "gen_matrix",
    "gen_poly",
    "lwr_round",
    "frac_part",
    "cut_bits",
    "uncut",
    "matmul",
    "RingPoly",
    "ntt_forward",
    "ntt_inverse",
    "poly_mul",
    "poly_add",
    "schoolbook_negacyclic",
]

SEED_BYTES = 32


def _shake_words(seed: bytes, tag: int, nwords: int) -> np.ndarray:
    """First nwords little-endian 16-bit words of SHAKE-128(seed || tag)."""
    raw = hashlib.shake_128(seed + bytes([tag])).digest(2 * nwords)
    return np.frombuffer(raw, dtype="<u2").astype(np.int64)


def gen_matrix(seed: bytes, rows: int, cols: int, q: int, tag: int = 0) -> np.ndarray:
    """Expand seed into a uniform rows x cols matrix over Z_q (q a power of two).

    Each element masks the low log2(q) bits of one 16-bit stream word for
    q <= 2^16; wider-than-16-bit moduli are not used by any suite.
    """
    if len(seed) != SEED_BYTES:
        raise ValueError("seed must be 32 bytes")
    if not (q > 1 and q & (q - 1) == 0 and q <= 1 << 16):
        raise ValueError("gen_matrix needs a power-of-two q <= 2^16")
    words = _shake_words(seed, tag, rows * cols)
    return (words & (q - 1)).reshape(rows, cols)


def gen_poly(seed: bytes, n: int, q: int, tag: int = 0) -> "RingPoly":
    """Expand seed into a uniform ring element for prime q via rejection.

    16-bit chunks below q * floor(2^16 / q) are accepted and reduced mod q,
    which leaves the residue exactly uniform.
    """
    if len(seed) != SEED_BYTES:
        raise ValueError("seed must be 32 bytes")
    lim = q * ((1 << 16) // q)
    out = np.empty(n, dtype=np.int64)
    filled = 0
    nwords = int(n * 1.1) + 16
    offset = 0
    while filled < n:
        raw = hashlib.shake_128(seed + bytes([tag])).digest(2 * (offset + nwords))
        words = np.frombuffer(raw, dtype="<u2").astype(np.int64)[offset:]
        offset += nwords
        acc = words[words < lim] % q
        take = min(len(acc), n - filled)
        out[filled: filled + take] = acc[:take]
        filled += take
        nwords = int((n - filled) * 1.2) + 16
    return RingPoly(n=n, q=q, coeffs=out, domain="coef")


def lwr_round(x, q: int, p: int):
    """LWR rounding: round(p x / q) mod p; requires p | q."""
    if q % p:
        raise ValueError("p must divide q")
    return (2 * p * np.asarray(x, dtype=np.int64) + q) // (2 * q) % p


def frac_part(x, q: int, p: int):
    """Centered residue {x}_p = x - (q/p) round(p x / q), in [-q/2p, q/2p - 1]."""
    if q % p:
        raise ValueError("p must divide q")
    x = np.asarray(x, dtype=np.int64)
    return x - (q // p) * ((2 * p * x + q) // (2 * q))


def cut_bits(y, t: int):
    """Drop the t least significant bits: floor(y / 2^t); t = 0 passes through."""
    return np.asarray(y, dtype=np.int64) >> t


def uncut(y_cut, t: int):
    """Centered reconstruction 2^t y' + 2^(t-1); identity when t = 0."""
    y_cut = np.asarray(y_cut, dtype=np.int64)
    if t == 0:
        return y_cut
    return (y_cut << t) + (1 << (t - 1))


def matmul(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """a @ b mod q.

    Runs in float64 (BLAS) when the exact product bound fits in 2^53,
    which holds for every shipped parameter set; falls back to int64
    otherwise.  Results are exact either way.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"dimension mismatch {a.shape} @ {b.shape}")
    bound = a.shape[-1] * _max_abs(a) * _max_abs(b)
    if bound < 2**53:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % q
    return (a @ b) % q


def _max_abs(x: np.ndarray) -> int:
    return int(max(1, np.abs(x).max())) if x.size else 1


# ---------------------------------------------------------------------------
# Negacyclic NTT over Z_q[x]/(x^n + 1), q prime with q = 1 mod 2n.

@dataclass
class RingPoly:
    n: int
    q: int
    coeffs: np.ndarray
    domain: str = "coef"  # "coef" | "ntt"

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64) % self.q
        if self.coeffs.shape != (self.n,):
            raise ValueError("coefficient count must equal n")
        if self.domain not in ("coef", "ntt"):
            raise ValueError("domain must be 'coef' or 'ntt'")

    def copy(self) -> "RingPoly":
        return RingPoly(self.n, self.q, self.coeffs.copy(), self.domain)


def _find_generator(q: int) -> int:
    fac = []
    m = q - 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            fac.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        fac.append(m)
    for g in range(2, q):
        if all(pow(g, (q - 1) // f, q) != 1 for f in fac):
            return g
    raise ValueError("no generator found")


@lru_cache(maxsize=None)
def _ntt_tables(n: int, q: int):
    """Bit-reversed psi tables for the 2n-th primitive root of unity mod q."""
    if n & (n - 1) or n < 2:
        raise ValueError("n must be a power of two")
    if (q - 1) % (2 * n):
        raise ValueError(f"q = {q} does not support n = {n} (need q = 1 mod 2n)")
    g = _find_generator(q)
    psi = pow(g, (q - 1) // (2 * n), q)
    assert pow(psi, n, q) == q - 1
    logn = n.bit_length() - 1
    br = np.array([int(format(i, f"0{logn}b")[::-1], 2) for i in range(n)])
    powers = np.array([pow(psi, int(i), q) for i in range(n)], dtype=np.int64)
    inv_powers = np.array([pow(psi, -int(i), q) for i in range(n)], dtype=np.int64)
    n_inv = pow(n, -1, q)
    return powers[br], inv_powers[br], n_inv


def ntt_forward(p: RingPoly) -> RingPoly:
    """Forward negacyclic NTT (Cooley-Tukey, psi powers merged in)."""
    if p.domain != "coef":
        raise ValueError("already in NTT domain")
    psi_br, _, _ = _ntt_tables(p.n, p.q)
    a = p.coeffs.copy()
    n, q = p.n, p.q
    m = 1
    while m < n:
        t = n // (2 * m)
        view = a.reshape(m, 2, t)
        s = psi_br[m: 2 * m, None]
        u = view[:, 0, :]
        v = view[:, 1, :] * s % q
        view[:, 0, :], view[:, 1, :] = (u + v) % q, (u - v) % q
        m *= 2
    return RingPoly(n, q, a, "ntt")


def ntt_inverse(p: RingPoly) -> RingPoly:
    """Inverse transform (Gentleman-Sande), including the n^-1 scaling."""
    if p.domain != "ntt":
        raise ValueError("not in NTT domain")
    _, inv_psi_br, n_inv = _ntt_tables(p.n, p.q)
    a = p.coeffs.copy()
    n, q = p.n, p.q
    m = n // 2
    while m >= 1:
        t = n // (2 * m)
        view = a.reshape(m, 2, t)
        s = inv_psi_br[m: 2 * m, None]
        u = view[:, 0, :]
        v = view[:, 1, :]
        view[:, 0, :], view[:, 1, :] = (u + v) % q, (u - v) * s % q
        m //= 2
    return RingPoly(n, q, a * n_inv % q, "coef")


def poly_add(a: RingPoly, b: RingPoly) -> RingPoly:
    if (a.n, a.q, a.domain) != (b.n, b.q, b.domain):
        raise ValueError("operands must share ring and domain")
    return RingPoly(a.n, a.q, (a.coeffs + b.coeffs) % a.q, a.domain)


def poly_sub(a: RingPoly, b: RingPoly) -> RingPoly:
    if (a.n, a.q, a.domain) != (b.n, b.q, b.domain):
        raise ValueError("operands must share ring and domain")
    return RingPoly(a.n, a.q, (a.coeffs - b.coeffs) % a.q, a.domain)


def poly_mul(a: RingPoly, b: RingPoly) -> RingPoly:
    """Negacyclic product via the NTT; inputs and output in coefficient domain."""
    if a.domain == "ntt" and b.domain == "ntt":
        return RingPoly(a.n, a.q, a.coeffs * b.coeffs % a.q, "ntt")
    if (a.n, a.q) != (b.n, b.q):
        raise ValueError("operands must share the ring")
    fa, fb = ntt_forward(a), ntt_forward(b)
    return ntt_inverse(RingPoly(a.n, a.q, fa.coeffs * fb.coeffs % a.q, "ntt"))


def schoolbook_negacyclic(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Reference negacyclic convolution, quadratic time."""
    n = len(a)
    full = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    out = full[:n].copy()
    out[: n - 1] -= full[n:]
    return out % q
