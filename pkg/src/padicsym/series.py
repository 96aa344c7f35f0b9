"""Square roots by Hensel lifting and the analytic functions exp, log, cos, sin.

The series are summed with exact integer arithmetic modulo a power of p: each
term ``t**k / k!`` is an integer multiple of ``p**(k*v(t) - ord_p(k!))``, so the
p-part of the denominator is divided out exactly and the rest inverted modulo
the target.  No digits are lost to denominators; the reported precision is the
one forced by the input.
"""

from .errors import DomainError, InsufficientPrecision, NoRoot
from .padic import INFTY, Padic, ord_p


def legendre(a, p):
    """Legendre symbol (a/p) for odd p, as -1, 0 or 1."""
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def sqrt_mod_p(a, p):
    """Both square roots of a mod an odd prime p (Tonelli-Shanks), smallest first."""
    a %= p
    if a == 0:
        return [0]
    if legendre(a, p) != 1:
        return []
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return sorted({r, p - r})


def _lift_odd(u, r, p, n):
    """Newton-lift r (root of y^2=u mod p) to a root mod p**n."""
    mod = p
    while mod < p**n:
        mod = min(mod * mod, p**n)
        r = (r - (r * r - u) * pow(2 * r, -1, mod)) % mod
    return r


def is_square(x):
    """Whether the Padic x is a square in Qp, judged on its known digits."""
    try:
        hensel_sqrt(x)
    except NoRoot:
        return False
    return True


def hensel_sqrt(x):
    """Square root of x, choosing the root with the smaller leading digit.

    Raises NoRoot when x is not a square.  For p = 2 the root has one digit less
    than the input and needs at least 3 unit digits to decide squareness.
    """
    p = x.p
    if x.v == INFTY:
        raise InsufficientPrecision(f"cannot take the square root of the imprecise zero {x}")
    if x.v % 2:
        raise NoRoot(f"{x} has odd valuation {x.v}")
    half = x.v // 2
    n = x.prec
    u = x.unit
    if p != 2:
        roots = sqrt_mod_p(u % p, p)
        if not roots:
            raise NoRoot(f"unit part of {x} is not a square mod {p}")
        y = _lift_odd(u, roots[0], p, n)
        return Padic(p, half, y, half + n)
    if n < 3:
        if n >= 1 and (n == 1 or u % 4 == 1):
            raise InsufficientPrecision("need 3 unit digits to decide squareness for p=2")
        raise NoRoot(f"{x} is not a square in Q2")
    if u % 8 != 1:
        raise NoRoot(f"unit part of {x} is not 1 mod 8")
    y = 1
    for k in range(3, n):
        # y^2 = u mod 2^k; fix the next bit
        if (y * y - u) % 2 ** (k + 1):
            y += 2 ** (k - 1)
    mod = 2 ** (n - 1)
    y %= mod
    y = min(y, (-y) % mod)
    return Padic(2, half, y, half + n - 1)


def teichmuller(a, p, n):
    """The (p-1)-th root of unity congruent to a mod p, known mod p**n."""
    mod = p**n
    w = a % p
    if w == 0:
        return 0
    for _ in range(n + 1):
        w = pow(w, p, mod)
    return w


# -- analytic functions -------------------------------------------------------


def conv_exponent(p):
    """d: the domain p^d Zp of exp, cos and sin."""
    return 2 if p == 2 else 1


def _series_terms(t, p, target, kinds):
    """Sum t^k/k! mod p**target for the k selected by ``kinds`` with signs.

    ``t`` is an integer with ord_p(t) >= d.  Returns an integer.
    """
    vt = ord_p(t, p) if t else INFTY
    mod = p**target
    total = 0
    if t == 0:
        return kinds(0) or 0
    power = 1
    fact_unit = 1
    fact_v = 0
    k = 0
    while True:
        if k > 0:
            power *= t
            kk = k
            while kk % p == 0:
                kk //= p
                fact_v += 1
            fact_unit *= kk
        sign = kinds(k)
        if sign:
            term = (power // p**fact_v) * pow(fact_unit, -1, mod)
            total += sign * term
        # remaining terms are divisible by p^(k*vt - (k-1)/(p-1)) which grows
        k += 1
        if k * vt - (k - 1) // (p - 1) - 1 >= target and k > 2:
            break
    return total % mod


def _check_domain(t, name):
    d = conv_exponent(t.p)
    if t.v != INFTY and t.v < d:
        raise DomainError(f"{name}({t}) diverges: need valuation >= {d}")
    if t.v == INFTY and t.absprec < d:
        raise DomainError(f"{name}: argument {t} is not known to lie in p^{d} Zp")


def padic_exp(t):
    _check_domain(t, "exp")
    return _trig(t, lambda k: 1, 0)


def padic_cos(t):
    _check_domain(t, "cos")
    return _trig(t, lambda k: 0 if k % 2 else (-1) ** (k // 2), 0)


def padic_sin(t):
    _check_domain(t, "sin")
    return _trig(t, lambda k: (-1) ** (k // 2) if k % 2 else 0, None)


def _trig(t, sign, out_val):
    p = t.p
    if t.v == INFTY:
        # f(t) agrees with f(0) to the precision of t.
        if sign(0):
            return Padic.from_rational(sign(0), p, absprec=t.absprec)
        return Padic.zero(p, t.absprec)
    # Output keeps the input's relative precision and cannot exceed its
    # absolute precision (the derivatives are all integral).
    vout = t.v if out_val is None else out_val
    target = min(t.absprec, vout + t.prec)
    total = _series_terms(t.lift(), p, target, sign)
    return Padic._from_scaled(p, total, 0, target)


def padic_log(x):
    """log(x) for x = 1 mod p^d."""
    p = x.p
    d = conv_exponent(p)
    z = x - 1
    if z.v != INFTY and z.v < d:
        raise DomainError(f"log({x}) diverges: need x = 1 mod {p}^{d}")
    if z.v == INFTY:
        if z.absprec < d:
            raise DomainError(f"log: {x} is not known to be 1 mod {p}^{d}")
        return Padic.zero(p, z.absprec)
    target = x.absprec
    mod = p**target
    zi = z.lift()
    vz = z.v
    total = 0
    power = 1
    k = 1
    while True:
        power *= zi
        e = ord_p(k, p)
        term = (power // p**e) * pow(k // p**e, -1, mod)
        total += term if k % 2 else -term
        k += 1
        # later terms have valuation >= k*vz - log_p(k)
        if k * vz - _floor_log(k, p) >= target and k > 2:
            break
    return Padic._from_scaled(p, total % mod, 0, target)


def _floor_log(k, p):
    e = 0
    while p ** (e + 1) <= k:
        e += 1
    return e


def analytic_fn(kind, t):
    fns = {"exp": padic_exp, "log": padic_log, "cos": padic_cos, "sin": padic_sin}
    try:
        return fns[kind](t)
    except KeyError:
        raise ValueError(f"unknown analytic function {kind!r}") from None
