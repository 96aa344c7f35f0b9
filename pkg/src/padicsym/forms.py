"""Symplectic forms, phase spaces and the Poisson bracket.

A form is a weighted sum of factors over coordinate slots:

* ``("plane", (i, j), w)``   is ``w dx_i ^ dx_j``;
* ``("sphere", (i, j, k), w)`` is ``w`` times the area form of the unit sphere in
  coordinates (x_i, x_j, x_k), namely ``omega_m(u, v) = -m . (u x v)``, which
  equals -(1/x) dy^dz = (1/y) dx^dz = -(1/z) dx^dy on tangent vectors.

Brackets use {f, g} = df(X_g) with omega(X_g, .) = dg, so {y, -x} = 1 on the
plane and {x, y} = -z on the sphere.
"""

from fractions import Fraction

from .errors import RankMismatch, SpaceMismatch, UnsupportedForm
from .padic import INFTY, Padic, ord_p, random_padic
from .polynomial import PolyObservable


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


class SymplecticFormSpec:
    def __init__(self, dim, factors):
        self.dim = dim
        self.factors = tuple(factors)
        used = []
        for kind, slots, _w in self.factors:
            if kind not in ("plane", "sphere"):
                raise UnsupportedForm(f"unknown form factor {kind!r}")
            if len(slots) != (2 if kind == "plane" else 3):
                raise UnsupportedForm(f"{kind} factor needs {2 if kind == 'plane' else 3} slots")
            used.extend(slots)
        if sorted(used) != list(range(dim)):
            raise UnsupportedForm("factors must cover each coordinate exactly once")

    @classmethod
    def standard(cls, n):
        """sum dx_i ^ dy_i on (x_1, y_1, ..., x_n, y_n)."""
        return cls(2 * n, [("plane", (2 * i, 2 * i + 1), 1) for i in range(n)])

    @classmethod
    def sphere(cls, weight=1):
        return cls(3, [("sphere", (0, 1, 2), weight)])

    @classmethod
    def product(cls, specs, weights=None):
        weights = weights or [1] * len(specs)
        factors, offset = [], 0
        for spec, w in zip(specs, weights):
            for kind, slots, w0 in spec.factors:
                factors.append((kind, tuple(s + offset for s in slots), w0 * w))
            offset += spec.dim
        return cls(offset, factors)

    @property
    def has_sphere(self):
        return any(kind == "sphere" for kind, _, _ in self.factors)

    def omega(self, m, u, v):
        """omega_m(u, v)."""
        if not len(m) == len(u) == len(v) == self.dim:
            raise RankMismatch(f"form on {self.dim} coordinates")
        total = 0
        for kind, s, w in self.factors:
            if kind == "plane":
                i, j = s
                term = u[i] * v[j] - u[j] * v[i]
            else:
                ms = [m[k] for k in s]
                c = _cross([u[k] for k in s], [v[k] for k in s])
                term = -(ms[0] * c[0] + ms[1] * c[1] + ms[2] * c[2])
            total = total + (term if w == 1 else term * Fraction(w))
        return total

    def matrix(self, m):
        """Omega with omega_m(u, v) = u^T Omega v (entries exact for rational m)."""
        n = self.dim
        out = [[Fraction(0)] * n for _ in range(n)]
        for kind, s, w in self.factors:
            w = Fraction(w)
            if kind == "plane":
                i, j = s
                out[i][j] += w
                out[j][i] -= w
            else:
                ms = [m[k] for k in s]
                # -m . (e_a x e_b) = -eps_{abc} m_c
                for a in range(3):
                    b, c = (a + 1) % 3, (a + 2) % 3
                    out[s[a]][s[b]] += -w * ms[c]
                    out[s[b]][s[a]] += w * ms[c]
        return out

    def to_json(self):
        return [{"kind": k, "slots": list(s), "weight": str(w)} for k, s, w in self.factors]


def poisson_bracket(f, g, form):
    """{f, g} = df(X_g) as a polynomial; sphere factors use the ambient formula
    -(x, y, z) . (grad f x grad g), exact on the unit sphere."""
    if not isinstance(form, SymplecticFormSpec):
        raise UnsupportedForm(f"unsupported form {form!r}")
    if f.nvars != form.dim or g.nvars != form.dim:
        raise RankMismatch("observables and form have different dimensions")
    out = PolyObservable(form.dim)
    for kind, s, w in form.factors:
        inv = 1 / Fraction(w)
        if kind == "plane":
            i, j = s
            term = f.diff(i) * g.diff(j) - f.diff(j) * g.diff(i)
        else:
            xs = [PolyObservable.var(k, form.dim) for k in s]
            c = _cross([f.diff(k) for k in s], [g.diff(k) for k in s])
            term = -(xs[0] * c[0] + xs[1] * c[1] + xs[2] * c[2])
        out = out + term * inv
    return out


def sphere_constraint(form, slots):
    """x^2 + y^2 + z^2 - 1 for a sphere factor, as a polynomial."""
    xs = [PolyObservable.var(k, form.dim) for k in slots]
    return xs[0] ** 2 + xs[1] ** 2 + xs[2] ** 2 - 1


def reduce_on_spheres(f, form):
    """Replace z_k^2 by 1 - x_k^2 - y_k^2 on each sphere factor (canonical form modulo constraints)."""
    for kind, s, _w in form.factors:
        if kind != "sphere":
            continue
        zi = s[2]
        changed = True
        while changed:
            changed = False
            out = {}
            for e, c in f.terms.items():
                if e[zi] >= 2:
                    changed = True
                    base = list(e)
                    base[zi] -= 2
                    for k2, sign in ((None, 1), (s[0], -1), (s[1], -1)):
                        e2 = list(base)
                        if k2 is not None:
                            e2[k2] += 2
                        out[tuple(e2)] = out.get(tuple(e2), 0) + sign * c
                else:
                    out[e] = out.get(e, 0) + c
            f = PolyObservable(f.nvars, out)
    return f


# -- phase spaces -------------------------------------------------------------


class PhaseSpace:
    """Blocks of coordinates: ("ball", m) for (Zp)^m, ("affine", m) for (Qp)^m, ("sphere", 3)."""

    def __init__(self, p, blocks):
        self.p = p
        self.blocks = tuple(blocks)
        self.dim = sum(size for _, size in self.blocks)

    def _slices(self):
        start = 0
        for kind, size in self.blocks:
            yield kind, start, start + size
            start += size

    def contains(self, m):
        if len(m) != self.dim:
            return False
        for kind, a, b in self._slices():
            block = m[a:b]
            if kind == "ball" and not all(x.is_integral() for x in block):
                return False
            if kind == "sphere":
                x, y, z = block
                if not (x * x + y * y + z * z == 1):
                    return False
        return True

    def check(self, m):
        if not self.contains(m):
            raise SpaceMismatch(f"point is not in the phase space {self.describe()}")
        return m

    def describe(self):
        names = {"ball": f"(Z_{self.p})^{{}}", "affine": f"(Q_{self.p})^{{}}"}
        parts = []
        for kind, size in self.blocks:
            parts.append(f"S^2_{self.p}" if kind == "sphere" else names[kind].format(size))
        return " x ".join(parts)

    def sample(self, rng, prec=32):
        p = self.p
        out = []
        for kind, size in self.blocks:
            if kind == "ball":
                out.extend(random_padic(p, rng, prec, 0, 3, allow_zero=True) for _ in range(size))
            elif kind == "affine":
                out.extend(random_padic(p, rng, prec, -1, 3, allow_zero=True) for _ in range(size))
            else:
                out.extend(sphere_sample(p, rng, prec))
        return tuple(out)

    def tangent_basis(self, m):
        """Spanning set of T_m M: coordinate vectors, and m x e_i on sphere factors."""
        cap = max((x.absprec for x in m if isinstance(x, Padic)), default=32) + 64
        zero = Padic.zero(self.p, cap)
        one = Padic.from_rational(1, self.p, prec=cap)
        out = []
        for kind, a, b in self._slices():
            if kind == "sphere":
                ms = m[a:b]
                for i in range(3):
                    e = [zero, zero, zero]
                    e[i] = one
                    t = _cross(ms, e)
                    v = [zero] * self.dim
                    v[a:b] = t
                    out.append(tuple(v))
            else:
                for i in range(a, b):
                    v = [zero] * self.dim
                    v[i] = one
                    out.append(tuple(v))
        return out

    def to_json(self):
        return [{"kind": k, "size": s} for k, s in self.blocks]


def sphere_sample(p, rng, prec=32):
    """A rational point of the unit sphere with integral coordinates, by inverse
    stereographic projection."""
    while True:
        s = Fraction(rng.randint(-p**3, p**3), rng.choice([1, 1, 1, p]))
        t = Fraction(rng.randint(-p**3, p**3))
        den = s * s + t * t + 1
        pt = (2 * s / den, 2 * t / den, (s * s + t * t - 1) / den)
        if all(x == 0 or _v(x, p) >= 0 for x in pt):
            return tuple(Padic.from_rational(x, p, prec=prec) if x else Padic.zero(p, prec) for x in pt)


def _v(q, p):
    return ord_p(q, p) if q else INFTY
