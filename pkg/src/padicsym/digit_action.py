"""The free, non-proper action of Qp on (Zp)^2 by digit reversal.

With {g} = a/p^n, b = f_n(y) and c = a + r_n(b):

    psi(g, (x, y)) = (x + floor(g),     y - b + r_n(c))          if c < p^n
                     (x + floor(g) + 1, y - b + r_n(c - p^n))    otherwise

and phi_n(x, y) = p^n x + r_n(f_n(y)) conjugates psi to translation:
phi_n(psi(g, m)) = p^n g + phi_n(m).  Values may be ``Padic`` or exact
rationals; exact inputs give exact outputs and decidable orbit questions.
"""

from dataclasses import dataclass
from fractions import Fraction

from .digits import digit_reverse, floor_frac, frac_part, residue_window
from .errors import InsufficientPrecision
from .padic import INFTY, Padic, ord_p


def _prime_of(*values):
    for v in values:
        if isinstance(v, Padic):
            return v.p
    return None


def digit_act(g, m, p=None, n=None):
    """psi(g, m); ``n`` may be any window at least max(0, -ord_p(g))."""
    x, y = m
    p = p or _prime_of(g, x, y)
    if p is None:
        raise ValueError("prime needed for exact inputs")
    floor, fr = floor_frac(g, p)
    if n is None:
        n = fr.n
    elif n < fr.n:
        raise ValueError(f"window {n} is smaller than the denominator exponent {fr.n}")
    a = fr.at_window(n)
    b = residue_window(y, n, p)
    c = a + digit_reverse(b, n, p)
    mod = p**n
    if c < mod:
        return (x + floor, y - b + digit_reverse(c, n, p))
    return (x + floor + 1, y - b + digit_reverse(c - mod, n, p))


def digit_phi(n, m, p=None):
    x, y = m
    p = p or _prime_of(x, y)
    return p**n * x + digit_reverse(residue_window(y, n, p), n, p)


def _tail(y, n, p):
    """(y - f_n(y)) / p^n for an exact rational y in Zp."""
    return (y - residue_window(y, n, p)) / Fraction(p) ** n


@dataclass
class OrbitResult:
    status: str  # "related", "not_related" or "indeterminate"
    witness: object = None
    n: int = None  # window used by the witness, or the blocking position

    def __bool__(self):
        return self.status == "related"


def _same(u, v):
    if isinstance(u, Padic) or isinstance(v, Padic):
        return bool(u == v)
    return u == v


def digit_orbit_equiv(m1, m2, p=None):
    """Decide whether m1 and m2 lie in one orbit; return the witness g when they do.

    Exact rational inputs are decided completely: the tails of y1 and y2 end up
    purely periodic, so the search stops once a pair of tail states repeats.
    Finite-precision inputs are related when their known y-digits agree above
    some position n below the precision; otherwise the answer is indeterminate.
    """
    (x1, y1), (x2, y2) = m1, m2
    p = p or _prime_of(x1, y1, x2, y2)
    exact = not any(isinstance(v, Padic) for v in (x1, y1, x2, y2))
    if exact:
        y1, y2 = Fraction(y1), Fraction(y2)
        for y in (y1, y2):
            if y != 0 and ord_p(y, p) < 0:
                raise ValueError(f"{y} is not in Z_{p}")
        seen = set()
        n = 0
        while True:
            t1, t2 = _tail(y1, n, p), _tail(y2, n, p)
            if t1 == t2:
                break
            periodic = -1 <= t1 <= 0 and -1 <= t2 <= 0
            if periodic:
                if (t1, t2) in seen:
                    return OrbitResult("not_related", n=n)
                seen.add((t1, t2))
            n += 1
    else:
        N = min(v.absprec for v in (y1, y2) if isinstance(v, Padic))
        if N <= 0:
            return OrbitResult("indeterminate", n=0)
        d1 = _digits(y1, N, p)
        d2 = _digits(y2, N, p)
        n = 0
        for i in range(N - 1, -1, -1):
            if d1[i] != d2[i]:
                n = i + 1
                break
        if n >= N:
            return OrbitResult("indeterminate", n=N)
    g = (digit_phi(n, (x2, y2), p) - digit_phi(n, (x1, y1), p)) / Fraction(p) ** n
    img = digit_act(g, (x1, y1), p)
    if not (_same(img[0], x2) and _same(img[1], y2)):
        raise AssertionError("orbit witness failed verification")
    return OrbitResult("related", g, n)


def _digits(y, N, p):
    w = residue_window(y, N, p)
    out = []
    for _ in range(N):
        w, d = divmod(w, p)
        out.append(d)
    return out


def freeness_bound(g, m, prec):
    """Valuation of g when psi(g, m) agrees with m to ``prec`` digits, else None.

    The isotropy group is trivial, so a near-fixed point forces g to be tiny:
    phi_n(psi(g, m)) - phi_n(m) = p^n g with n = 0 for integral g.
    """
    img = digit_act(g, m)
    dx = img[0] - m[0]
    dy = img[1] - m[1]
    close = all((d.v if d.v != INFTY else d.absprec) >= prec for d in (dx, dy))
    if not close:
        return None
    return g.v if g.v != INFTY else g.absprec


def check_window_independence(g, m, extra=4, p=None):
    """psi computed with windows n, n+1, ..., n+extra; True when all agree."""
    p = p or _prime_of(g, *m)
    n0 = frac_part(g, p).n
    base = digit_act(g, m, p, n0)
    for n in range(n0 + 1, n0 + extra + 1):
        try:
            other = digit_act(g, m, p, n)
        except InsufficientPrecision:
            break
        if not all(_identical(a, b) for a, b in zip(base, other)):
            return False
    return True


def _identical(a, b):
    if isinstance(a, Padic) and isinstance(b, Padic):
        return a.same_digits(b)
    return a == b
