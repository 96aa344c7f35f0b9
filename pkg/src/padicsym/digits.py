"""Digit-level utilities: integer/fractional split, digit windows, digit reversal.

These accept either ``Padic`` values or exact rationals (``int``/``Fraction``);
exact inputs give exact outputs, which is what the orbit machinery relies on.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientPrecision, RangeError
from .padic import INFTY, Padic, check_prime, ord_p


@dataclass(frozen=True)
class FracPart:
    """The element a/p**n of Qp/Zp, in lowest form."""

    p: int
    n: int
    a: int

    def __post_init__(self):
        if not 0 <= self.a < self.p**self.n:
            raise RangeError(f"{self.a} is not in A_{self.n}")
        if self.n > 0 and self.a % self.p == 0:
            raise RangeError("fractional part must be in lowest form")

    def value(self):
        return Fraction(self.a, self.p**self.n)

    def at_window(self, n):
        """Numerator over p**n for any window n >= self.n."""
        if n < self.n:
            raise ValueError(f"window {n} is smaller than the denominator exponent {self.n}")
        return self.a * self.p ** (n - self.n)


def _exact_valuation(q, p):
    return INFTY if q == 0 else ord_p(q, p)


def frac_part(x, p=None):
    """{x} as a FracPart; for rationals pass the prime."""
    if isinstance(x, Padic):
        p = x.p
        if x.v == INFTY or x.v >= 0:
            if x.absprec < 0:
                raise InsufficientPrecision("fractional digits of x are not all known")
            return FracPart(p, 0, 0)
        if x.absprec < 0:
            raise InsufficientPrecision(
                f"digits at positions {x.absprec}..-1 of {x} are unknown")
        n = -x.v
        return FracPart(p, n, x.unit % p**n)
    q = Fraction(x)
    v = _exact_valuation(q, p)
    if v >= 0:
        return FracPart(p, 0, 0)
    n = -v
    mod = p**n
    # q * p^n is a p-adic unit; its residue mod p^n is the numerator a.
    s = q * mod
    return FracPart(p, n, s.numerator * pow(s.denominator, -1, mod) % mod)


def floor_frac(x, p=None):
    """Split x = floor + frac with floor in Zp and frac in Qp/Zp."""
    fr = frac_part(x, p)
    if isinstance(x, Padic):
        if fr.n == 0:
            return x, fr
        return x - Padic.from_rational(fr.value(), x.p, absprec=x.absprec + fr.n), fr
    return Fraction(x) - fr.value(), fr


def residue_window(x, n, p=None):
    """f_n(x): the integer formed by the rightmost n digits of x in Zp."""
    if n < 0:
        raise ValueError("window length must be non-negative")
    if n == 0:
        return 0
    if isinstance(x, Padic):
        if not x.is_integral():
            raise ValueError(f"{x} is not a p-adic integer")
        if x.absprec < n:
            raise InsufficientPrecision(f"need {n} digits, only {x.absprec} known")
        if x.v == INFTY:
            return 0
        return x.unit * x.p**x.v % x.p**n
    q = Fraction(x)
    if q.denominator % p == 0:
        raise ValueError(f"{q} is not a p-adic integer")
    mod = p**n
    return q.numerator * pow(q.denominator, -1, mod) % mod


def digit_reverse(a, n, p):
    """r_n(a): reverse the n base-p digits of a (leading zeros included)."""
    check_prime(p)
    if not 0 <= a < p**n:
        raise RangeError(f"{a} is not in A_{n} for p={p}")
    out = 0
    for _ in range(n):
        a, d = divmod(a, p)
        out = out * p + d
    return out


def digit_list(x, n, p=None):
    """The first n digits of x in Zp, least significant first."""
    w = residue_window(x, n, p)
    pp = x.p if isinstance(x, Padic) else p
    out = []
    for _ in range(n):
        w, d = divmod(w, pp)
        out.append(d)
    return out
