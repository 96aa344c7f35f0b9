"""p-adic arithmetic, p-adic circle groups, symplectic actions and their momentum maps."""

from .padic import INFTY, Padic, PrecisionPolicy, parse_padic

__all__ = ["INFTY", "Padic", "PrecisionPolicy", "parse_padic"]
