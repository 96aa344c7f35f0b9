"""The p-adic circle, torus and compact torus, SO(3, Qp), and the group specs used by actions.

The circle S^1_p = {a^2 + b^2 = 1} has the structure

    p = 1 mod 4:  Z x Z/(p-1) x pZp      (through a + b*i in Qp^*)
    p = 3 mod 4:  Z/(p+1) x pZp
    p = 2:        Z/4 x 4Z2

with the pro-p factor embedded by t -> (cos t, sin t).  A decomposition is a
``TorusFactor(bar, t, hat)``; elements of the compact torus have ``hat == 0``.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    DomainError,
    GroupMismatch,
    InsufficientPrecision,
    NotInSubgroup,
    NotOnCircle,
    PrimeMismatch,
    RankMismatch,
    SingularMatrix,
)
from .padic import INFTY, Padic, ord_p, random_padic
from .series import conv_exponent, hensel_sqrt, padic_cos, padic_log, padic_sin, teichmuller


def _const(q, p, prec):
    return Padic.from_rational(q, p, prec=prec)


# -- circle -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CirclePoint:
    a: Padic
    b: Padic

    def __post_init__(self):
        if self.a.p != self.b.p:
            raise PrimeMismatch("circle coordinates over different primes")

    @property
    def p(self):
        return self.a.p

    def on_circle(self):
        return self.a * self.a + self.b * self.b == 1

    def __mul__(self, other):
        return circle_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, CirclePoint) and self.a == other.a and self.b == other.b

    __hash__ = None

    def __str__(self):
        return f"({self.a}, {self.b})"

    def to_json(self):
        return {"a": self.a.to_json(), "b": self.b.to_json()}

    @classmethod
    def from_json(cls, obj):
        return cls(Padic.from_json(obj["a"]), Padic.from_json(obj["b"]))


def circle_point(a, b, p=None, prec=32, check=True):
    """Build a circle point from Padic or rational coordinates."""
    if not isinstance(a, Padic):
        a = _const(a, p, prec)
    if not isinstance(b, Padic):
        b = _const(b, p, prec)
    g = CirclePoint(a, b)
    if check and not g.on_circle():
        raise NotOnCircle(f"{g} does not satisfy a^2 + b^2 = 1")
    return g


def circle_identity(p, prec=32):
    return CirclePoint(_const(1, p, prec), Padic.zero(p, prec))


def circle_mul(g, h):
    if g.p != h.p:
        raise PrimeMismatch(f"circle points over {g.p} and {h.p}")
    return CirclePoint(g.a * h.a - g.b * h.b, g.a * h.b + h.a * g.b)


def circle_inv(g):
    return CirclePoint(g.a, -g.b)


def circle_pow(g, e):
    if e < 0:
        return circle_pow(circle_inv(g), -e)
    result = circle_identity(g.p, max(g.a.absprec, g.b.absprec, 1))
    base = g
    while e:
        if e & 1:
            result = circle_mul(result, base)
        e >>= 1
        if e:
            base = circle_mul(base, base)
    return result


def circle_embed(t):
    """t -> (cos t, sin t) for t in p^d Zp."""
    d = conv_exponent(t.p)
    if t.v != INFTY and t.v < d:
        raise DomainError(f"{t} is outside {t.p}^{d} Z_{t.p}")
    return CirclePoint(padic_cos(t), padic_sin(t))


def _gaussian_log_imag(x, y, p, target):
    """Imaginary part of log(x + y*i) computed formally, i^2 = -1.

    x, y are integers with x = 1, y = 0 mod p^d.  Since the norm is 1 the real
    part vanishes and the imaginary part is the angle t.
    """
    mod = p**target
    wr, wi = x - 1, y
    vw = min(ord_p(wr, p) if wr else INFTY, ord_p(wi, p) if wi else INFTY)
    if vw == INFTY:
        return 0
    pr, pi = 1, 0
    total = 0
    k = 1
    while True:
        pr, pi = pr * wr - pi * wi, pr * wi + pi * wr
        e = ord_p(k, p)
        inv = pow(k // p**e, -1, mod)
        term = (pi // p**e) * inv
        total += term if k % 2 else -term
        pr %= p ** (target + 2 * e + 64)
        pi %= p ** (target + 2 * e + 64)
        k += 1
        le = 0
        while p ** (le + 1) <= k:
            le += 1
        if k * vw - le >= target and k > 2:
            break
    return total % mod


def circle_log(g):
    """Inverse of circle_embed on the principal subgroup."""
    p = g.p
    d = conv_exponent(p)
    target = min(g.a.absprec, g.b.absprec)
    if target < d:
        raise InsufficientPrecision(f"{g} is not known well enough to take its angle")
    if not g.a.is_integral() or not g.b.is_integral():
        raise NotInSubgroup(f"{g} is not in the principal subgroup")
    x, y = g.a.lift(), g.b.lift()
    if (x - 1) % p**d or y % p**d:
        raise NotInSubgroup(f"{g} is not congruent to (1, 0) mod {p}^{d}")
    t = _gaussian_log_imag(x, y, p, target)
    return Padic._from_scaled(p, t, 0, target)


# -- structure of the circle ----------------------------------------------------


def circle_kind(p):
    if p == 2:
        return "two"
    return "split" if p % 4 == 1 else "inert"


def bar_modulus(p):
    return {"two": 4, "inert": p + 1, "split": p - 1}[circle_kind(p)]


@lru_cache(maxsize=None)
def _residue_circle(p):
    """Points of x^2 + y^2 = 1 over F_p, lexicographic order."""
    return [(x, y) for x in range(p) for y in range(p) if (x * x + y * y) % p == 1]


def _res_mul(g, h, p):
    return ((g[0] * h[0] - g[1] * h[1]) % p, (g[0] * h[1] + h[0] * g[1]) % p)


def _res_order(g, p):
    k, h = 1, g
    while h != (1, 0):
        h = _res_mul(h, g, p)
        k += 1
    return k


@lru_cache(maxsize=None)
def residue_generator(p):
    """Lexicographically smallest F_p circle point of order p+1 (p = 3 mod 4)."""
    for pt in _residue_circle(p):
        if _res_order(pt, p) == p + 1:
            return pt
    raise AssertionError("F_p circle group of order p+1 must be cyclic")


def _smallest_primitive_root(p):
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            return g
    return 1


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def sqrt_minus_one(p, prec=32):
    """The canonical i = hensel_sqrt(-1); only for p = 1 mod 4."""
    return hensel_sqrt(_const(-1, p, prec))


def _from_gaussian(z, i):
    """The circle point (a, b) with a + b*i = z, a - b*i = 1/z."""
    zi = z.inverse()
    return CirclePoint((z + zi) / 2, (z - zi) / (2 * i))


def _project_torsion_inert(g):
    """g^(p^(2K)) kills the pro-p part and fixes the Z/(p+1) part."""
    p = g.p
    prec = min(g.a.absprec, g.b.absprec)
    return circle_pow(g, p ** (2 * ((prec + 1) // 2 + 1)))


@lru_cache(maxsize=256)
def torsion_generator(p, prec=32):
    """Canonical generator of the finite factor of the circle."""
    kind = circle_kind(p)
    if kind == "two":
        return CirclePoint(Padic.zero(p, prec), _const(1, p, prec))
    if kind == "inert":
        x0, y0 = residue_generator(p)
        # lift the residue point to the circle, then project onto torsion
        if y0 == 0:
            lift = CirclePoint(_const(x0 if x0 == 1 else -1, p, prec), Padic.zero(p, prec))
        elif x0 == 0:
            r = hensel_sqrt(_const(1, p, prec))
            r = r if r.lift() % p == y0 else -r
            lift = CirclePoint(Padic.zero(p, prec), r)
        else:
            a = _const(x0, p, prec)
            r = hensel_sqrt(1 - a * a)
            r = r if r.lift() % p == y0 else -r
            lift = CirclePoint(a, r)
        return _project_torsion_inert(lift)
    i = sqrt_minus_one(p, prec)
    z = _const(teichmuller(_smallest_primitive_root(p), p, prec), p, prec)
    return _from_gaussian(z, i)


@lru_cache(maxsize=1024)
def torsion_rep(p, bar, prec=32):
    return circle_pow(torsion_generator(p, prec), bar % bar_modulus(p))


def hat_rep(p, hat, prec=32):
    """Circle point corresponding to p**hat in Qp^* (p = 1 mod 4 only)."""
    if circle_kind(p) != "split":
        if hat:
            raise NotInSubgroup(f"the circle over Q_{p} has no free factor")
        return circle_identity(p, prec)
    i = sqrt_minus_one(p, prec)
    return _from_gaussian(_const(Fraction(p) ** hat, p, prec), i)


@dataclass(frozen=True, eq=False)
class TorusFactor:
    """One circle factor in structure coordinates: bar (torsion index), t, hat."""

    p: int
    bar: int
    t: Padic
    hat: int = 0

    def __post_init__(self):
        m = bar_modulus(self.p)
        if not 0 <= self.bar < m:
            raise ValueError(f"torsion index {self.bar} outside Z/{m}")
        d = conv_exponent(self.p)
        if self.t.v != INFTY and self.t.v < d:
            raise DomainError(f"t = {self.t} is outside {self.p}^{d} Z_{self.p}")
        if self.hat and circle_kind(self.p) != "split":
            raise ValueError("free exponent only exists for p = 1 mod 4")

    @property
    def modulus(self):
        return bar_modulus(self.p)

    def __eq__(self, other):
        return (isinstance(other, TorusFactor) and self.p == other.p and self.bar == other.bar
                and self.hat == other.hat and self.t == other.t)

    __hash__ = None

    def to_json(self):
        out = {"bar": self.bar, "t": self.t.to_json()}
        if circle_kind(self.p) == "split":
            out["hat"] = self.hat
        return out

    @classmethod
    def from_json(cls, obj):
        t = Padic.from_json(obj["t"])
        return cls(t.p, obj["bar"], t, obj.get("hat", 0))


def circle_decompose(g):
    """Structure coordinates of a circle point: g = torsion(bar) * hat_rep(hat) * embed(t)."""
    p = g.p
    if not g.on_circle():
        raise NotOnCircle(f"{g} is not on the circle")
    kind = circle_kind(p)
    prec = min(g.a.absprec, g.b.absprec)
    if kind == "two":
        if prec < 3:
            raise InsufficientPrecision("need 3 digits to decompose over Q2")
        if g.a.is_unit():
            zeta, bar = (1, 0), 0 if g.a.lift() % 4 == 1 else 2
            if bar == 2:
                zeta = (-1, 0)
        elif g.b.is_unit():
            bar = 1 if g.b.lift() % 4 == 1 else 3
            zeta = (0, 1) if bar == 1 else (0, -1)
        else:
            raise NotOnCircle(f"{g} has no unit coordinate")
        z = CirclePoint(_const(zeta[0], p, prec) if zeta[0] else Padic.zero(p, prec),
                        _const(zeta[1], p, prec) if zeta[1] else Padic.zero(p, prec))
        t = circle_log(circle_mul(g, circle_inv(z)))
        return TorusFactor(p, bar, t)
    if kind == "inert":
        if prec < 1:
            raise InsufficientPrecision(f"{g} has no known digits")
        zeta = _project_torsion_inert(g)
        res = (zeta.a.lift() % p, zeta.b.lift() % p)
        gen = residue_generator(p)
        h, bar = (1, 0), 0
        while h != res:
            h = _res_mul(h, gen, p)
            bar += 1
            if bar > p + 1:
                raise NotOnCircle(f"{g} reduces to a point outside the residue circle")
        t = circle_log(circle_mul(g, circle_inv(zeta)))
        return TorusFactor(p, bar, t)
    i = sqrt_minus_one(p, max(prec, 1) + 2)
    z = g.a + g.b * i
    if z.is_zero():
        raise InsufficientPrecision(f"a + b*i vanishes to the known precision of {g}")
    hat = z.v
    w = z.shift(-hat)
    g0 = _smallest_primitive_root(p)
    w0 = w.lift() % p
    bar, h = 0, 1
    while h != w0:
        h = h * g0 % p
        bar += 1
    zeta = _const(teichmuller(w0, p, w.absprec), p, w.absprec)
    u = w / zeta
    t = padic_log(u) / i
    return TorusFactor(p, bar, t, hat)


def circle_recompose(f, prec=None):
    if prec is None:
        prec = max(f.t.absprec, 1)
    g = circle_embed(f.t)
    g = circle_mul(torsion_rep(f.p, f.bar, prec), g)
    if f.hat:
        g = circle_mul(hat_rep(f.p, f.hat, prec), g)
    return g


# -- compact torus ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CompactTorusElement:
    factors: tuple

    def __post_init__(self):
        if not self.factors:
            raise ValueError("the compact torus needs k >= 1 factors")
        ps = {f.p for f in self.factors}
        if len(ps) != 1:
            raise PrimeMismatch("factors over different primes")
        if any(f.hat for f in self.factors):
            raise NotInSubgroup("compact torus elements have no free exponent")

    @property
    def p(self):
        return self.factors[0].p

    @property
    def k(self):
        return len(self.factors)

    @property
    def ts(self):
        return tuple(f.t for f in self.factors)

    def to_circles(self):
        return tuple(circle_recompose(f) for f in self.factors)

    def __eq__(self, other):
        return isinstance(other, CompactTorusElement) and self.factors == other.factors

    __hash__ = None

    def to_json(self):
        return [f.to_json() for f in self.factors]


def compact_torus_identity(p, k, prec=32):
    d = conv_exponent(p)
    return CompactTorusElement(tuple(TorusFactor(p, 0, Padic.zero(p, prec + d)) for _ in range(k)))


def _check_compatible(g, h):
    if g.p != h.p:
        raise PrimeMismatch(f"torus elements over {g.p} and {h.p}")
    if g.k != h.k:
        raise RankMismatch(f"torus ranks {g.k} and {h.k} differ")


def compact_torus_mul(g, h):
    _check_compatible(g, h)
    return CompactTorusElement(tuple(
        TorusFactor(f1.p, (f1.bar + f2.bar) % f1.modulus, f1.t + f2.t)
        for f1, f2 in zip(g.factors, h.factors)))


def compact_torus_inv(g):
    return CompactTorusElement(tuple(
        TorusFactor(f.p, (-f.bar) % f.modulus, -f.t) for f in g.factors))


def to_compact(circles):
    """Decompose circle points into a compact torus element (NotInSubgroup if hat != 0)."""
    fs = tuple(circle_decompose(c) for c in circles)
    if any(f.hat for f in fs):
        raise NotInSubgroup("point lies outside the compact subgroup G_p")
    return CompactTorusElement(fs)


def _det(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for j in range(c, n):
                m[r][j] -= f * m[c][j]
    return det


def matrix_inverse(rows):
    """Exact inverse of a rational matrix."""
    n = len(rows)
    m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        pv = m[c][c]
        m[c] = [x / pv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def check_gl_zp(A, p):
    """A has entries in Zp and a unit determinant."""
    for row in A:
        for x in row:
            x = Fraction(x)
            if x != 0 and ord_p(x, p) < 0:
                raise SingularMatrix(f"entry {x} is not in Z_{p}")
    det = _det(A)
    if det == 0 or ord_p(det, p) != 0:
        raise SingularMatrix(f"determinant {det} is not a {p}-adic unit")


def torus_reparam(A, g):
    """(t_1', ..., t_k') = (t_1, ..., t_k) A, torsion part unchanged."""
    k = g.k
    if len(A) != k or any(len(r) != k for r in A):
        raise RankMismatch(f"matrix is not {k}x{k}")
    check_gl_zp(A, g.p)
    ts = g.ts
    new_t = [sum((ts[i] * Fraction(A[i][j]) for i in range(k)), Padic.zero(g.p, ts[0].absprec + 64))
             for j in range(k)]
    return CompactTorusElement(tuple(
        TorusFactor(f.p, f.bar, t, 0) for f, t in zip(g.factors, new_t)))


# -- SO(3, Qp) ------------------------------------------------------------------


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def dot(u, v):
    total = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        total = total + a * b
    return total


def hat_matrix(xi):
    """xi -> A_xi with A_xi x = xi cross x."""
    x1, x2, x3 = xi
    z = 0 * x1
    return ((z, -x3, x2), (x3, z, -x1), (-x2, x1, z))


def matvec(M, v):
    return tuple(dot(row, v) for row in M)


def matmul(A, B):
    cols = list(zip(*B))
    return tuple(tuple(dot(r, c) for c in cols) for r in A)


def transpose(A):
    return tuple(zip(*A))


def det3(M):
    return dot(M[0], cross(M[1], M[2]))


@dataclass(frozen=True, eq=False)
class SO3Element:
    matrix: tuple

    def __post_init__(self):
        if len(self.matrix) != 3 or any(len(r) != 3 for r in self.matrix):
            raise RankMismatch("SO(3) elements are 3x3 matrices")

    @property
    def p(self):
        return self.matrix[0][0].p

    def check(self):
        M = self.matrix
        prod = matmul(transpose(M), M)
        ok = all(prod[i][j] == int(i == j) for i in range(3) for j in range(3))
        return ok and det3(M) == 1

    def __eq__(self, other):
        return isinstance(other, SO3Element) and all(
            a == b for r1, r2 in zip(self.matrix, other.matrix) for a, b in zip(r1, r2))

    __hash__ = None

    def to_json(self):
        return [[x.to_json() for x in row] for row in self.matrix]


def so3_element(rows, p=None, prec=32, check=True):
    M = tuple(tuple(x if isinstance(x, Padic) else _const(x, p, prec) for x in r) for r in rows)
    g = SO3Element(M)
    if check and not g.check():
        raise GroupMismatch("matrix is not in SO(3): need Phi^T Phi = I and det Phi = 1")
    return g


def cayley(xi):
    """Cayley transform of A_xi: orthogonal, det 1, derivative A_xi at 0.

    Works over Fractions or Padics: I + 2/(1 + |k|^2) (K + K^2) with k = xi/2.
    """
    k = tuple(x / 2 for x in xi)
    K = hat_matrix(k)
    K2 = matmul(K, K)
    s = 2 / (1 + dot(k, k))
    one = 1 + 0 * xi[0]
    return tuple(tuple((one if i == j else 0 * one) + s * (K[i][j] + K2[i][j]) for j in range(3))
                 for i in range(3))


# -- group specs used by actions --------------------------------------------------


class AdditiveGroup:
    """(Zp)^k (min_val=0), (pZp)^k (min_val=1) or Qp^k (min_val=None) under addition."""

    abelian = True

    def __init__(self, p, k, min_val=0, name=None):
        self.p, self.k, self.min_val = p, k, min_val
        self.name = name or {0: f"(Z_{p})^{k}", 1: f"({p}Z_{p})^{k}"}.get(min_val, f"(Q_{p})^{k}")

    def identity(self, prec=32):
        return tuple(Padic.zero(self.p, prec) for _ in range(self.k))

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def contains(self, g):
        if len(g) != self.k:
            return False
        if self.min_val is None:
            return True
        return all(x.v >= self.min_val if x.v != INFTY else x.absprec >= self.min_val for x in g)

    def random(self, rng, prec=32):
        lo = -8 if self.min_val is None else self.min_val
        return tuple(random_padic(self.p, rng, prec, lo, lo + 4 if self.min_val is None else lo + 2)
                     for _ in range(self.k))

    def embed(self, xi, k):
        """Group element p^k xi (the exponential is the identity here)."""
        return tuple(x.shift(k) for x in xi)

    def bracket(self, xi, eta):
        return tuple(0 * x for x in xi)

    def coadjoint(self, g, eta):
        return tuple(eta)


class CompactTorusGroup:
    abelian = True

    def __init__(self, p, k):
        self.p, self.k = p, k
        self.name = f"(G_{p})^{k}"

    def identity(self, prec=32):
        return compact_torus_identity(self.p, self.k, prec)

    def mul(self, g, h):
        return compact_torus_mul(self._coerce(g), self._coerce(h))

    def inv(self, g):
        return compact_torus_inv(self._coerce(g))

    def _coerce(self, g):
        if isinstance(g, CompactTorusElement):
            if g.k != self.k:
                raise RankMismatch(f"expected {self.k} torus factors, got {g.k}")
            return g
        if isinstance(g, CirclePoint):
            g = (g,)
        return to_compact(tuple(g))

    def contains(self, g):
        try:
            self._coerce(g)
        except (NotInSubgroup, RankMismatch):
            return False
        return True

    def circles(self, g):
        """Circle coordinates (a_j, b_j) of each factor."""
        if isinstance(g, CompactTorusElement):
            if g.k != self.k:
                raise RankMismatch(f"expected {self.k} torus factors, got {g.k}")
            return g.to_circles()
        if isinstance(g, CirclePoint):
            g = (g,)
        if len(g) != self.k:
            raise RankMismatch(f"expected {self.k} circle points")
        if circle_kind(self.p) == "split":
            # only here is S^1_p larger than G_p
            self._coerce(g)
        return tuple(g)

    def random(self, rng, prec=32):
        d = conv_exponent(self.p)
        m = bar_modulus(self.p)
        return CompactTorusElement(tuple(
            TorusFactor(self.p, rng.randrange(m), random_padic(self.p, rng, prec, d, d + 2, allow_zero=True))
            for _ in range(self.k)))

    def embed(self, xi, k):
        d = conv_exponent(self.p)
        ts = tuple(x.shift(k) for x in xi)
        if any(t.v != INFTY and t.v < d for t in ts):
            raise DomainError(f"p^{k} xi leaves the embeddable neighbourhood p^{d} Z_p")
        return CompactTorusElement(tuple(TorusFactor(self.p, 0, t) for t in ts))

    def bracket(self, xi, eta):
        return tuple(0 * x for x in xi)

    def coadjoint(self, g, eta):
        return tuple(eta)


class SO3Group:
    abelian = False
    k = 3

    def __init__(self, p):
        self.p = p
        self.name = f"SO(3, Q_{p})"

    def identity(self, prec=32):
        return so3_element([[int(i == j) for j in range(3)] for i in range(3)], self.p, prec, check=False)

    def mul(self, g, h):
        return SO3Element(matmul(g.matrix, h.matrix))

    def inv(self, g):
        return SO3Element(transpose(g.matrix))

    def contains(self, g):
        return isinstance(g, SO3Element) and g.check()

    def random(self, rng, prec=32):
        d = conv_exponent(self.p)
        xi = [Fraction(rng.randrange(-self.p**4, self.p**4) * self.p**d) for _ in range(3)]
        M = cayley(xi)
        perm = rng.choice([(0, 1, 2), (1, 2, 0), (2, 0, 1)])
        P = [[int(perm[i] == j) for j in range(3)] for i in range(3)]
        M = [[sum(P[i][l] * M[l][j] for l in range(3)) for j in range(3)] for i in range(3)]
        return so3_element(M, self.p, prec, check=False)

    def embed(self, xi, k):
        return SO3Element(cayley(tuple(x.shift(k) for x in xi)))

    def bracket(self, xi, eta):
        return cross(xi, eta)

    def coadjoint(self, g, eta):
        return coadjoint(self, g, eta)


def coadjoint(group, g, eta):
    """Ad*_g on the dual Lie algebra; identity for Abelian groups, eta -> Phi eta on SO(3)."""
    if group.abelian:
        if len(eta) != group.k:
            raise RankMismatch(f"dual vector has length {len(eta)}, group has dimension {group.k}")
        return tuple(eta)
    if len(eta) != 3:
        raise RankMismatch("SO(3) dual vectors have length 3")
    return matvec(g.matrix, eta)
