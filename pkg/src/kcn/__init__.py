"""Key consensus with noise: lattice key exchange toolkit and analysis engine."""

from kcn.kc import KcParams, KcVariant  # noqa: F401

__version__ = "0.1.0"
