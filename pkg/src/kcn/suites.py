"""Named protocol parameter sets.

Every suite binds dimensions, moduli, the consensus variant and its
(q, m, g, d), the noise sampler, and (for the ring protocols) the
error-handling code mode.  The distance parameter d is always the largest
value passing the variant's correctness condition, which is how the
parameter tables were built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from kcn import noise as noise_mod
from kcn.kc import KcParams, KcVariant, validate_params

__all__ = ["NoiseSpec", "Suite", "SUITES", "get_suite", "suite_names"]


@dataclass(frozen=True)
class NoiseSpec:
    kind: str  # "table" | "psi16" | "bab" | "gauss" | "binary"
    name: str = ""
    a: int = 0
    b: int = 0
    var: float = 0.0

    def pmf(self) -> noise_mod.Pmf:
        if self.kind == "table":
            return noise_mod.table_pmf(self.name)
        if self.kind == "psi16":
            return noise_mod.psi16_pmf()
        if self.kind == "bab":
            return noise_mod.bab_pmf(self.a, self.b)
        if self.kind == "gauss":
            return noise_mod.rounded_gaussian_pmf(math.sqrt(self.var))
        if self.kind == "binary":
            return noise_mod.uniform_pmf(0, 1)
        raise ValueError(self.kind)

    def variance(self) -> float:
        if self.kind == "table":
            return noise_mod.TABLES[self.name].variance
        if self.kind == "psi16":
            return 8.0
        if self.kind == "bab":
            return self.a / 4 + self.b
        if self.kind == "binary":
            return 0.25
        return self.var

    def sample(self, rng, size):
        if self.kind == "table":
            return noise_mod.sample_table(noise_mod.TABLES[self.name], rng, size)
        if self.kind == "psi16":
            return noise_mod.sample_centered_binomial(rng, size)
        if self.kind == "bab":
            return noise_mod.sample_bab(self.a, self.b, rng, size)
        if self.kind == "gauss":
            return noise_mod.sample_table(_gauss_table(self.var), rng, size)
        if self.kind == "binary":
            return rng.integers(0, 2, size=size)
        raise ValueError(self.kind)

    def describe(self) -> str:
        if self.kind == "table":
            return self.name
        if self.kind == "psi16":
            return "Psi16"
        if self.kind == "bab":
            return f"B^({self.a},{self.b})"
        if self.kind == "binary":
            return "U({0,1})"
        return f"gauss(var={self.var})"


@lru_cache(maxsize=None)
def _gauss_table(var: float) -> noise_mod.NoiseTable:
    pmf = noise_mod.rounded_gaussian_pmf(math.sqrt(var))
    return noise_mod.table_from_pmf(pmf, 16, f"gauss{var}")


@dataclass(frozen=True)
class Suite:
    """A fully-resolved protocol instance."""

    name: str
    family: str  # "lwr" | "lwe" | "hybrid" | "rlwe"
    n: int  # n_A for the hybrid family
    l_a: int
    l_b: int
    q: int
    noise: NoiseSpec
    variant: KcVariant | None = None
    kc: KcParams | None = None
    n_b: int = 0  # hybrid only
    p: int = 0  # rounding modulus (lwr / hybrid)
    t: int = 0  # cut bits (lwe)
    mode: str = "plain"  # rlwe: plain | sec | akcn41 | newhope | e8
    code_g: int = 0  # hint range for the code modes
    n_h: int = 0  # SEC parity dimension

    def __post_init__(self):
        if self.kc is not None and self.variant is not None:
            ok = validate_params(self.variant, self.kc)
            if ok is not True:
                raise ValueError(f"{self.name}: invalid kc params: {ok}")

    # -- derived quantities ------------------------------------------------

    @property
    def is_akc(self) -> bool:
        if self.mode in ("akcn41", "e8"):
            return True
        if self.mode == "newhope":
            return False
        return self.variant.is_akc

    @property
    def con_modulus(self) -> int:
        return self.p if self.family in ("lwr", "hybrid") else self.q

    @property
    def qbits(self) -> int:
        return (self.q - 1).bit_length()

    @property
    def sec_blocks(self) -> int:
        code_bits = (1 << self.n_h) + self.n_h
        return self.n // code_bits

    @property
    def key_bits(self) -> int:
        if self.family in ("lwr", "lwe", "hybrid"):
            return self.l_a * self.l_b * (self.kc.m - 1).bit_length()
        if self.mode == "plain":
            return self.n * (self.kc.m - 1).bit_length()
        if self.mode == "sec":
            return self.sec_blocks * ((1 << self.n_h) - 1)
        if self.mode in ("akcn41", "newhope"):
            return self.n // 4
        if self.mode == "e8":
            return self.n // 2
        raise ValueError(self.mode)

    def describe(self) -> dict:
        out = {
            "name": self.name,
            "family": self.family,
            "n": self.n,
            "q": self.q,
            "l": self.l_a,
            "noise": self.noise.describe(),
            "key_bits": self.key_bits,
        }
        if self.family == "hybrid":
            out["n_b"] = self.n_b
        if self.p:
            out["p"] = self.p
        if self.t:
            out["t"] = self.t
        if self.kc is not None:
            out.update(variant=self.variant.value, m=self.kc.m, g=self.kc.g, d=self.kc.d)
        if self.mode != "plain":
            out["mode"] = self.mode
        if self.code_g:
            out["g"] = self.code_g
        if self.n_h:
            out["n_h"] = self.n_h
        return out


def _t(name):
    return NoiseSpec("table", name=name)


_PSI16 = NoiseSpec("psi16")
_RLWE_Q = 12289


def _lwr(name, n, dist):
    return Suite(
        name=name, family="lwr", n=n, l_a=8, l_b=8, q=2**15, p=2**12,
        noise=_t(dist), variant=KcVariant.OKCN_SIMPLE,
        kc=KcParams(q=2**12, m=2**4, g=2**8, d=127),
    )


def _lwe(name, n, q, l, m, g, d, dist, variant=KcVariant.OKCN_SIMPLE, t=0):
    return Suite(
        name=name, family="lwe", n=n, l_a=l, l_b=l, q=q, t=t,
        noise=_t(dist), variant=variant, kc=KcParams(q=q, m=m, g=g, d=d),
    )


def _rlwe(name, variant, g, d, mode="plain", n_h=0, n=1024, noise=_PSI16, code_g=0):
    kc = None
    if variant is not None:
        kc = KcParams(q=_RLWE_Q, m=2, g=g, d=d)
    return Suite(
        name=name, family="rlwe", n=n, l_a=1, l_b=1, q=_RLWE_Q,
        noise=noise, variant=variant, kc=kc, mode=mode, n_h=n_h, code_g=code_g,
    )


SUITES = {
    s.name: s
    for s in [
        _lwr("lwr-recommended", 680, "D_R"),
        _lwr("lwr-paranoid", 832, "D_P"),
        # LWE without bit cutting (t = 0)
        _lwe("lwe-challenge", 334, 2**10, 8, 2, 2**9, 255, "D1"),
        _lwe("lwe-classical", 554, 2**11, 8, 2**2, 2**9, 255, "D2"),
        _lwe("lwe-recommended", 718, 2**14, 8, 2**4, 2**10, 511, "D3"),
        _lwe("lwe-paranoid", 818, 2**14, 8, 2**4, 2**10, 511, "D4"),
        _lwe("lwe-paranoid-512", 700, 2**12, 16, 2**2, 2**10, 511, "DB4"),
        # LWE with t least significant bits cut
        _lwe("okcn-t2", 712, 2**14, 8, 2**4, 2**8, 509, "D5", KcVariant.OKCN_POWER2, t=2),
        _lwe("okcn-t1", 712, 2**14, 8, 2**4, 2**8, 509, "D5", KcVariant.OKCN_POWER2, t=1),
        # Frodo's reconciliation on Frodo's parameters, and ours on the same
        _lwe("frodo-challenge", 352, 2**11, 8, 2, 2, 255, "DB1", KcVariant.FRODO),
        _lwe("frodo-classical", 592, 2**12, 8, 2**2, 2, 255, "DB2", KcVariant.FRODO),
        _lwe("frodo-recommended", 752, 2**15, 8, 2**4, 2, 511, "DB3", KcVariant.FRODO),
        _lwe("frodo-paranoid", 864, 2**15, 8, 2**4, 2, 511, "DB4", KcVariant.FRODO),
        _lwe("okcn-frodo-challenge", 352, 2**11, 8, 2, 2**2, 383, "DB1", KcVariant.OKCN_POWER2),
        _lwe("okcn-frodo-classical", 592, 2**12, 8, 2**2, 2**2, 383, "DB2", KcVariant.OKCN_POWER2),
        _lwe("okcn-frodo-recommended", 752, 2**15, 8, 2**4, 2**3, 895, "DB3", KcVariant.OKCN_POWER2),
        _lwe("okcn-frodo-paranoid", 864, 2**15, 8, 2**4, 2**3, 895, "DB4", KcVariant.OKCN_POWER2),
        # Hybrid public-key construction (LWE public key, LWR ciphertext)
        Suite(
            name="hybrid-recommended", family="hybrid", n=712, n_b=704, l_a=8, l_b=8,
            q=2**15, p=2**12, noise=NoiseSpec("gauss", var=2.0),
            variant=KcVariant.AKCN_GENERIC, kc=KcParams(q=2**12, m=2**4, g=2**8, d=119),
        ),
        Suite(
            name="hybrid-paranoid", family="hybrid", n=864, n_b=832, l_a=8, l_b=8,
            q=2**15, p=2**12, noise=NoiseSpec("gauss", var=2.0),
            variant=KcVariant.AKCN_GENERIC, kc=KcParams(q=2**12, m=2**4, g=2**8, d=119),
        ),
        # RLWE, NewHope parameters
        _rlwe("okcn-rlwe-16", KcVariant.OKCN_GENERIC, 2**4, 2879),
        _rlwe("okcn-rlwe-64", KcVariant.OKCN_GENERIC, 2**6, 3023),
        _rlwe("akcn-rlwe-16", KcVariant.AKCN_GENERIC, 2**4, 2687),
        _rlwe("akcn-rlwe-64", KcVariant.AKCN_GENERIC, 2**6, 2975),
        _rlwe("okcn-sec-765", KcVariant.OKCN_GENERIC, 2**3, 2687, mode="sec", n_h=4),
        _rlwe("okcn-sec-837", KcVariant.OKCN_GENERIC, 2**3, 2687, mode="sec", n_h=5),
        _rlwe("akcn-sec-765", KcVariant.AKCN_GENERIC, 2**4, 2687, mode="sec", n_h=4),
        _rlwe("akcn-sec-837", KcVariant.AKCN_GENERIC, 2**4, 2687, mode="sec", n_h=5),
        _rlwe("newhope", None, 0, 0, mode="newhope", code_g=2**2),
        _rlwe("akcn-4to1", None, 0, 0, mode="akcn41", code_g=2**2),
        _rlwe("zarzar", None, 0, 0, mode="e8", code_g=2**6, n=512,
              noise=NoiseSpec("bab", a=24, b=16)),
    ]
}


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        known = ", ".join(sorted(SUITES))
        raise KeyError(f"unknown suite {name!r}; known suites: {known}") from None


def suite_names() -> list[str]:
    return sorted(SUITES)
