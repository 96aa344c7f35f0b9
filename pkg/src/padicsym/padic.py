"""Capped relative precision p-adic numbers.

A nonzero value is stored as ``p**v * unit`` where ``unit`` is an integer
prime to p known modulo ``p**prec``.  A value that cancelled to nothing is an
*imprecise zero* ``O(p**M)``: its valuation is ``INFTY`` and only the absolute
bound ``M`` is known.  Every instance is immutable.
"""

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    DigitRangeError,
    DivisionByZero,
    NotPrime,
    PadicSyntaxError,
    PrimeMismatch,
)

INFTY = math.inf


@lru_cache(maxsize=None)
def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p!r} is not a prime")
    return p


def ord_p(n, p):
    """Valuation of a nonzero integer or Fraction."""
    if n == 0:
        return INFTY
    if isinstance(n, Fraction):
        return ord_p(n.numerator, p) - ord_p(n.denominator, p)
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@dataclass(frozen=True)
class PrecisionPolicy:
    default_digits: int = 32
    guard_digits: int = 4

    def __post_init__(self):
        if not self.default_digits > self.guard_digits >= 0:
            raise ValueError("precision policy needs default_digits > guard_digits >= 0")


DEFAULT_POLICY = PrecisionPolicy()


class Comparison(enum.Enum):
    EQUAL = "equal"
    DISTINCT = "distinct"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class CompareResult:
    outcome: Comparison
    position: int = None  # first disagreeing digit position, for DISTINCT

    def __bool__(self):
        return self.outcome is Comparison.EQUAL


class Padic:
    __slots__ = ("p", "v", "unit", "absprec")

    def __init__(self, p, v, unit, absprec):
        # Raw constructor; callers are expected to pass normalized data.
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "absprec", absprec)

    def __setattr__(self, name, value):
        raise AttributeError("Padic values are immutable")

    # -- construction ------------------------------------------------------

    @classmethod
    def _from_scaled(cls, p, n, e, absprec):
        """Normalize the value ``n * p**e`` known modulo ``p**absprec``."""
        if e >= absprec:
            return cls(p, INFTY, 0, absprec)
        n %= p ** (absprec - e)
        if n == 0:
            return cls(p, INFTY, 0, absprec)
        while n % p == 0:
            n //= p
            e += 1
        return cls(p, e, n, absprec)

    @classmethod
    def zero(cls, p, absprec):
        return cls(check_prime(p), INFTY, 0, absprec)

    @classmethod
    def from_rational(cls, q, p, prec=None, absprec=None):
        """Convert an exact rational.

        ``prec`` is the relative precision (default 32 digits); ``absprec``
        caps the absolute precision instead.  Exact zero becomes ``O(p**M)``
        with ``M = absprec`` or ``prec``.
        """
        check_prime(p)
        q = Fraction(q)
        if prec is None and absprec is None:
            prec = DEFAULT_POLICY.default_digits
        if q == 0:
            return cls(p, INFTY, 0, absprec if absprec is not None else prec)
        v = ord_p(q, p)
        if absprec is None:
            absprec = v + prec
        elif prec is not None:
            absprec = min(absprec, v + prec)
        if v >= absprec:
            return cls(p, INFTY, 0, absprec)
        if v >= 0:
            num, den = q.numerator // p**v, q.denominator
        else:
            num, den = q.numerator, q.denominator // p ** (-v)
        mod = p ** (absprec - v)
        return cls(p, v, num * pow(den, -1, mod) % mod, absprec)

    @classmethod
    def from_digits(cls, p, digits, v=0, prec=None):
        """Build ``p**v * sum(digits[i] p**i)`` known to ``prec`` digits."""
        n = sum(d * p**i for i, d in enumerate(digits))
        if prec is None:
            prec = len(digits)
        return cls._from_scaled(check_prime(p), n, v, v + prec)

    # -- basic accessors ---------------------------------------------------

    @property
    def prec(self):
        """Relative precision (number of known significant digits)."""
        return 0 if self.v == INFTY else self.absprec - self.v

    def is_zero(self):
        return self.v == INFTY

    def is_integral(self):
        return self.v >= 0 if self.v != INFTY else self.absprec >= 0

    def is_unit(self):
        return self.v == 0

    def valuation(self):
        return self.v

    def digits(self):
        """Unit digits d_0..d_{N-1}, least significant first."""
        out, n = [], self.unit
        for _ in range(self.prec):
            n, d = divmod(n, self.p)
            out.append(d)
        return out

    def digit(self, i):
        """Digit at absolute position ``i`` (coefficient of p**i)."""
        if i >= self.absprec:
            raise IndexError(f"digit {i} is beyond the known precision {self.absprec}")
        if self.v == INFTY or i < self.v:
            return 0
        return (self.unit // self.p ** (i - self.v)) % self.p

    def to_rational(self):
        """The canonical rational representative of the known digits."""
        if self.v == INFTY:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.v

    def lift(self):
        """Integer representative; only for values in Zp."""
        r = self.to_rational()
        if r.denominator != 1:
            raise ValueError("value is not a p-adic integer")
        return r.numerator

    def shift(self, k):
        """Exact multiplication by p**k."""
        if self.v == INFTY:
            return Padic(self.p, INFTY, 0, self.absprec + k)
        return Padic(self.p, self.v + k, self.unit, self.absprec + k)

    def with_absprec(self, absprec):
        """Reduce (never raise) the absolute precision."""
        absprec = min(absprec, self.absprec)
        if self.v == INFTY:
            return Padic(self.p, INFTY, 0, absprec)
        return Padic._from_scaled(self.p, self.unit, self.v, absprec)

    def with_prec(self, prec):
        if self.v == INFTY:
            return self
        return self.with_absprec(self.v + prec)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Padic):
            if other.p != self.p:
                raise PrimeMismatch(f"primes {self.p} and {other.p} differ")
            return other
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return Padic(self.p, INFTY, 0, max(self.absprec, 0) + self.prec + 1)
            vq = ord_p(q, self.p)
            rel = max(self.prec, self.absprec - vq, 1)
            return Padic.from_rational(q, self.p, prec=rel)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        absprec = min(self.absprec, other.absprec)
        if self.v == INFTY and other.v == INFTY:
            return Padic(p, INFTY, 0, absprec)
        if self.v == INFTY:
            return other.with_absprec(absprec)
        if other.v == INFTY:
            return self.with_absprec(absprec)
        e = min(self.v, other.v)
        n = self.unit * p ** (self.v - e) + other.unit * p ** (other.v - e)
        return Padic._from_scaled(p, n, e, absprec)

    __radd__ = __add__

    def __neg__(self):
        if self.v == INFTY:
            return self
        return Padic(self.p, self.v, (-self.unit) % self.p ** self.prec, self.absprec)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if self.v == INFTY and other.v == INFTY:
            return Padic(p, INFTY, 0, self.absprec + other.absprec)
        if self.v == INFTY:
            return Padic(p, INFTY, 0, self.absprec + other.v)
        if other.v == INFTY:
            return Padic(p, INFTY, 0, other.absprec + self.v)
        prec = min(self.prec, other.prec)
        mod = p**prec
        return Padic(p, self.v + other.v, self.unit * other.unit % mod, self.v + other.v + prec)

    __rmul__ = __mul__

    def inverse(self):
        if self.v == INFTY:
            raise DivisionByZero(f"cannot invert the imprecise zero {self}")
        mod = self.p**self.prec
        return Padic(self.p, -self.v, pow(self.unit, -1, mod), -self.v + self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.v == INFTY:
            raise DivisionByZero(f"divisor {other} is indistinguishable from zero")
        if self.v == INFTY:
            return Padic(self.p, INFTY, 0, self.absprec - other.v)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return Padic.from_rational(1, self.p, prec=max(self.prec, self.absprec, 1))
        result, base = None, self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison --------------------------------------------------------

    def compare(self, other):
        """Three-valued equality at joint precision."""
        other = self._coerce(other)
        d = self - other
        if d.v != INFTY:
            return CompareResult(Comparison.DISTINCT, d.v)
        if self.is_zero() != other.is_zero():
            return CompareResult(Comparison.INDETERMINATE)
        return CompareResult(Comparison.EQUAL)

    def __eq__(self, other):
        if not isinstance(other, (Padic, int, Fraction)):
            return NotImplemented
        if isinstance(other, Padic) and other.p != self.p:
            return False
        return self.compare(other).outcome is Comparison.EQUAL

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def same_digits(self, other):
        """Structural identity: same prime, valuation, digits and precision."""
        return (self.p, self.v, self.unit, self.absprec) == (
            other.p, other.v, other.unit, other.absprec)

    # -- text and JSON -----------------------------------------------------

    def __str__(self):
        p = self.p
        parts = []
        if self.v != INFTY:
            for i, d in enumerate(self.digits()):
                if d == 0:
                    continue
                e = self.v + i
                if e == 0:
                    parts.append(f"{d}")
                elif e == 1:
                    parts.append(f"{d}*{p}")
                else:
                    parts.append(f"{d}*{p}^{e}")
        if not parts:
            parts.append("0")
        parts.append(f"O({p}^{self.absprec})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Padic({str(self)!r}, p={self.p})"

    def to_json(self):
        return {
            "p": self.p,
            "v": "inf" if self.v == INFTY else self.v,
            "digits": self.digits(),
            "prec": self.absprec if self.v == INFTY else self.prec,
        }

    @classmethod
    def from_json(cls, obj):
        p = check_prime(obj["p"])
        if obj["v"] == "inf":
            return cls(p, INFTY, 0, obj["prec"])
        digits = obj["digits"]
        if any(not 0 <= d < p for d in digits):
            raise DigitRangeError("digit out of range in JSON value")
        if len(digits) != obj["prec"] or (digits and digits[0] == 0):
            raise ValueError("malformed p-adic JSON object")
        return cls.from_digits(p, digits, obj["v"], obj["prec"])


# -- free functions used throughout -------------------------------------------


def valuation(x):
    """ord_p(x), or INFTY for an imprecise zero (its bound is ``x.absprec``)."""
    return x.v


def discrepancy(x, y):
    """Valuation of x - y; for an imprecise-zero difference, its bound."""
    d = x - y
    return d.absprec if d.v == INFTY else d.v


def field_op(kind, x, y=None):
    if kind == "add":
        return x + y
    if kind == "sub":
        return x - y
    if kind == "mul":
        return x * y
    if kind == "div":
        return x / y
    if kind == "neg":
        return -x
    raise ValueError(f"unknown field operation {kind!r}")


def random_padic(p, rng, prec=32, min_val=0, max_val=None, allow_zero=False):
    """Random value with valuation in [min_val, max_val] and ``prec`` digits."""
    if max_val is None:
        max_val = min_val + 3
    if allow_zero and rng.random() < 0.05:
        return Padic(p, INFTY, 0, min_val + prec)
    v = rng.randint(min_val, max_val)
    unit = rng.randrange(1, p**prec)
    while unit % p == 0:
        unit = rng.randrange(1, p**prec)
    return Padic(p, v, unit, v + prec)


# -- literal grammar ----------------------------------------------------------

_TERM = re.compile(r"(-?\d+)(?:/(\d+))?(?:\*(\d+)(?:\^(-?\d+))?)?")
_BIGO = re.compile(r"O\((\d+)\^(-?\d+)\)")


def parse_padic(text, p, policy=DEFAULT_POLICY):
    """Parse a literal such as ``"2*3^-1 + 1 + O(3^2)"``.

    A plain non-negative integer coefficient is a digit and must be below p.
    Without a trailing ``O(p^M)`` term the value gets the policy's default
    relative precision.
    """
    check_prime(p)
    pieces = []
    pos = 0
    for chunk in text.split("+"):
        stripped = chunk.strip()
        start = pos + (len(chunk) - len(chunk.lstrip()))
        pieces.append((stripped, start))
        pos += len(chunk) + 1
    if not pieces or pieces[0][0] == "":
        raise PadicSyntaxError("empty literal", text, 0)
    total = Fraction(0)
    absprec = None
    for idx, (piece, start) in enumerate(pieces):
        if piece == "":
            raise PadicSyntaxError("missing term", text, start)
        m = _BIGO.fullmatch(piece)
        if m:
            if idx != len(pieces) - 1:
                raise PadicSyntaxError("O(...) must be the last term", text, start)
            if idx == 0:
                raise PadicSyntaxError("literal needs at least one term before O(...)", text, start)
            if int(m.group(1)) != p:
                raise PadicSyntaxError(f"O-term base {m.group(1)} is not the prime {p}", text, start)
            absprec = int(m.group(2))
            continue
        m = _TERM.fullmatch(piece)
        if not m:
            raise PadicSyntaxError(f"malformed term {piece!r}", text, start)
        num, den, base, exp = m.groups()
        if den is None and not num.startswith("-") and int(num) >= p:
            raise DigitRangeError(f"digit {num} is not below {p}", text, start)
        if den is not None and int(den) == 0:
            raise PadicSyntaxError("zero denominator", text, start)
        coeff = Fraction(int(num), int(den) if den else 1)
        if base is not None:
            if int(base) != p:
                raise PadicSyntaxError(f"base {base} is not the prime {p}", text, start)
            coeff *= Fraction(p) ** (int(exp) if exp is not None else 1)
        total += coeff
    if absprec is None:
        return Padic.from_rational(total, p, prec=policy.default_digits)
    return Padic.from_rational(total, p, absprec=absprec)
