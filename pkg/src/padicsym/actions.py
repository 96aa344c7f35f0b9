"""Catalog of p-adic symplectic actions with generators and momentum maps.

Every descriptor exposes ``act(g, m)``, the closed-form infinitesimal
generator ``generator(xi, m)``, the momentum map ``momentum(m)`` (a tuple, one
entry per Lie algebra basis vector) and the classification ``flags`` the
verifier is expected to reproduce.  Points are tuples of ``Padic``; generator
and momentum formulas only use ring operations, so they also evaluate on exact
rationals.

Sign conventions.  Plane rotations act by (ax + by, ay - bx), so the
generator of 1 is y d/dx - x d/dy and mu = (x^2 + y^2)/2 for dx^dy.  The
Jaynes-Cummings action uses the same convention on both factors, which makes
mu = (u^2 + v^2)/2 + z a momentum map for the product form.
"""

import json
from fractions import Fraction

from .digit_action import OrbitResult, digit_act, digit_orbit_equiv
from .errors import (
    DomainError,
    GroupMismatch,
    IndeterminateCase,
    NoRoot,
    PlanError,
    RankMismatch,
    UnsupportedAction,
)
from .forms import PhaseSpace, SymplecticFormSpec
from .groups import (
    AdditiveGroup,
    CirclePoint,
    CompactTorusGroup,
    SO3Element,
    SO3Group,
    circle_embed,
    cross,
    matvec,
    sqrt_minus_one,
    torsion_generator,
    torus_reparam,
    check_gl_zp,
)
from .padic import INFTY, Comparison, Padic, random_padic
from .polynomial import PolyObservable
from .series import conv_exponent, hensel_sqrt


def _flags(weak, ham, strict, iso, proper, free, fixed):
    return {
        "weakly_hamiltonian": weak,
        "hamiltonian": ham,
        "strictly_hamiltonian": strict,
        "isotropic": iso,
        "proper": proper,
        "free": free,
        "has_fixed_points": fixed,
    }


def _as_tuple(g):
    if isinstance(g, (Padic, int, Fraction)):
        return (g,)
    return tuple(g)


class ActionDescriptor:
    """Base class; subclasses fill in the formulas."""

    name = "action"
    momentum_polys = None  # list of PolyObservable when the momentum map is polynomial

    def __init__(self, p, group, space, form, params=None, flags=None):
        self.p = p
        self.group = group
        self.space = space
        self.form = form
        self.params = dict(params or {})
        self.flags = dict(flags or {})

    @property
    def k(self):
        return self.group.k

    @property
    def dim(self):
        return self.space.dim

    def basis(self, prec=32):
        one = Padic.from_rational(1, self.p, prec=prec)
        zero = Padic.zero(self.p, prec)
        return [tuple(one if i == j else zero for j in range(self.k)) for i in range(self.k)]

    def act(self, g, m):
        raise NotImplementedError

    def generator(self, xi, m):
        raise NotImplementedError

    def has_momentum(self):
        return True

    def momentum(self, m):
        if self.momentum_polys is None:
            raise UnsupportedAction(f"{self.name} has no polynomial momentum map")
        return tuple(f(m) for f in self.momentum_polys)

    def momentum_along(self, xi, m):
        """mu_xi(m) = <mu(m), xi>."""
        mu = self.momentum(m)
        total = mu[0] * xi[0]
        for a, b in zip(mu[1:], xi[1:]):
            total = total + a * b
        return total

    def sample_point(self, rng, prec=32):
        return self.space.sample(rng, prec)

    def sample_group(self, rng, prec=32):
        return self.group.random(rng, prec)

    def special_witnesses(self, prec=32):
        """Group elements and points that expose known failures, tried first."""
        return []

    def _check_xi(self, xi):
        if len(xi) != self.k:
            raise RankMismatch(f"Lie algebra vector of length {len(xi)}, expected {self.k}")

    def _check_m(self, m):
        if len(m) != self.dim:
            raise RankMismatch(f"point has {len(m)} coordinates, expected {self.dim}")

    def to_json(self):
        out = {"name": self.name, "p": self.p, "group": self.group.name,
               "space": self.space.describe(), "params": {k: _jsonable(v) for k, v in self.params.items()},
               "flags": self.flags}
        return out


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


# -- translations -------------------------------------------------------------


class TranslationAction(ActionDescriptor):
    """(Zp)^k (or (pZp)^k) translating the given coordinate slots of (Zp)^(2n)."""

    def __init__(self, name, p, n, slots, momentum_polys, flags, min_val=0):
        group = AdditiveGroup(p, len(slots), min_val)
        super().__init__(p, group, PhaseSpace(p, [("ball", 2 * n)]), SymplecticFormSpec.standard(n),
                         {"n": n}, flags)
        self.name = name
        self.n = n
        self.slots = tuple(slots)
        self.momentum_polys = momentum_polys

    def act(self, g, m):
        g = _as_tuple(g)
        if len(g) != len(self.slots):
            raise GroupMismatch(f"{self.name} needs {len(self.slots)} group components")
        self._check_m(m)
        out = list(m)
        for s, a in zip(self.slots, g):
            out[s] = out[s] + a
        return tuple(out)

    def generator(self, xi, m):
        self._check_xi(xi)
        self._check_m(m)
        zero = 0 * m[0]
        out = [zero] * self.dim
        for s, c in zip(self.slots, xi):
            out[s] = out[s] + c
        return tuple(out)

    def orbit_witness(self, m1, m2):
        for i in range(self.dim):
            if i not in self.slots and not (m1[i] == m2[i]):
                return OrbitResult("not_related")
        g = tuple(m2[s] - m1[s] for s in self.slots)
        if not self.group.contains(g):
            return OrbitResult("not_related")
        return OrbitResult("related", g)

    def same_level_sample(self, m, rng, prec=32):
        """A random point with the same momentum value: the conjugate y's are kept."""
        mom = {s + 1 for s in self.slots}
        fresh = self.space.sample(rng, prec)
        return tuple(m[i] if i in mom else fresh[i] for i in range(self.dim))


def _vars(nvars):
    return PolyObservable.variables(nvars)


def translation(p, n=1):
    v = _vars(2 * n)
    return TranslationAction("translation", p, n, [2 * i for i in range(n)],
                             [v[2 * i + 1] for i in range(n)],
                             _flags(True, True, True, True, True, True, False))


def no_fixed_points(p, n=2):
    v = _vars(2 * n)
    return TranslationAction("no_fixed_points", p, n, [0], [v[1]],
                             _flags(True, True, n == 1, True, True, True, False))


def weak_only(p, n=1):
    v = _vars(2 * n)
    return TranslationAction("weak_only", p, n, [0, 1], [v[1], -v[0]],
                             _flags(True, False, False, False, True, True, False))


class PiecewiseAction(ActionDescriptor):
    """(pZp)^2 translating (x1, y1) only on the ball where x1, y1 are in pZp."""

    name = "piecewise"

    def __init__(self, p, n=1):
        super().__init__(p, AdditiveGroup(p, 2, 1), PhaseSpace(p, [("ball", 2 * n)]),
                         SymplecticFormSpec.standard(n), {"n": n},
                         _flags(True, False, False, False, True, False, True))
        self.n = n

    def inside(self, m):
        for x in m[:2]:
            if x.v == INFTY:
                if x.absprec < 1:
                    raise IndeterminateCase(f"cannot tell whether {x} lies in {self.p}Z_{self.p}")
            elif x.v < 1:
                return False
        return True

    def act(self, g, m):
        a, b = _as_tuple(g)
        self._check_m(m)
        if not self.inside(m):
            return tuple(m)
        return (m[0] + a, m[1] + b) + tuple(m[2:])

    def generator(self, xi, m):
        self._check_xi(xi)
        zero = 0 * m[0]
        out = [zero] * self.dim
        if self.inside(m):
            out[0] = out[0] + xi[0]
            out[1] = out[1] + xi[1]
        return tuple(out)

    def momentum(self, m):
        if self.inside(m):
            return (m[1], -m[0])
        z = Padic.zero(self.p, max(m[0].absprec, m[1].absprec))
        return (z, z)

    def sample_point(self, rng, prec=32):
        m = self.space.sample(rng, prec)
        if rng.random() < 0.5:
            m = (m[0].shift(1), m[1].shift(1)) + m[2:]
        return m


# -- rotations ------------------------------------------------------------------


class RotationFamily(ActionDescriptor):
    """Actions of (G_p)^k through circle points: each factor rotates some planes."""

    # list per group factor of (i, j) coordinate pairs rotated by (a x + b y, a y - b x)
    planes = ()

    def act(self, g, m):
        self._check_m(m)
        circles = self.group.circles(g)
        out = list(m)
        for c, pairs in zip(circles, self.planes):
            a, b = c.a, c.b
            for i, j in pairs:
                x, y = m[i], m[j]
                out[i] = a * x + b * y
                out[j] = a * y - b * x
        return tuple(out)

    def generator(self, xi, m):
        self._check_xi(xi)
        self._check_m(m)
        zero = 0 * m[0]
        out = [zero] * self.dim
        for c, pairs in zip(xi, self.planes):
            for i, j in pairs:
                out[i] = out[i] + c * m[j]
                out[j] = out[j] - c * m[i]
        return tuple(out)


class RotationPlane(RotationFamily):
    name = "rotation_plane"

    def __init__(self, p, n=1):
        super().__init__(p, CompactTorusGroup(p, n), PhaseSpace(p, [("affine", 2 * n)]),
                         SymplecticFormSpec.standard(n), {"n": n},
                         _flags(True, True, p % 4 != 1, True, True, False, True))
        self.n = n
        self.planes = tuple(((2 * i, 2 * i + 1),) for i in range(n))
        v = _vars(2 * n)
        self.momentum_polys = [(v[2 * i] ** 2 + v[2 * i + 1] ** 2) / 2 for i in range(n)]

    def orbit_witness(self, m1, m2):
        if self.n != 1:
            raise UnsupportedAction("orbit witnesses are implemented for one plane")
        return rotation_orbit_witness(m1, m2)

    def same_level_sample(self, m, rng, prec=32):
        if self.n != 1:
            return None
        two_mu = m[0] * m[0] + m[1] * m[1]
        for _ in range(20):
            x2 = random_padic(self.p, rng, prec, 0, 2)
            r = two_mu - x2 * x2
            if r.is_zero():
                continue
            try:
                y2 = hensel_sqrt(r)
            except (NoRoot, ValueError):
                continue
            return (x2, -y2 if rng.random() < 0.5 else y2)
        return None

    def special_pairs(self, prec=32):
        """The null-cone pair (0,0) ~ (1, i), only over p = 1 mod 4."""
        if self.p % 4 != 1:
            return []
        zero = Padic.zero(self.p, prec)
        i = sqrt_minus_one(self.p, prec)
        return [((zero, zero), (Padic.from_rational(1, self.p, prec=prec), i))]


def rotation_orbit_witness(m1, m2):
    """A circle point (a, b) with rotation((a, b), m1) = m2, or NotRelated.

    Off the null cone a = (x x' + y y')/N and b = (y x' - x y')/N with
    N = x^2 + y^2.  On the null cone (p = 1 mod 4) the orbit of (x, +-i x) is
    {(w, +-i w)}; the witness comes from z = x'/x.
    """
    (x, y), (x2, y2) = m1, m2
    p = x.p
    mu1 = (x * x + y * y) / 2
    mu2 = (x2 * x2 + y2 * y2) / 2
    if mu1.compare(mu2).outcome is Comparison.DISTINCT:
        return OrbitResult("not_related")
    m1_zero = x.is_zero() and y.is_zero()
    m2_zero = x2.is_zero() and y2.is_zero()
    if m1_zero or m2_zero:
        if m1_zero and m2_zero:
            return OrbitResult("related", CirclePoint(Padic.from_rational(1, p, prec=x.absprec), Padic.zero(p, x.absprec)))
        return OrbitResult("not_related")
    N = x * x + y * y
    if not N.is_zero():
        a = (x * x2 + y * y2) / N
        b = (y * x2 - x * y2) / N
        g = CirclePoint(a, b)
    elif p % 4 != 1:
        raise IndeterminateCase("x^2 + y^2 is an imprecise zero")
    else:
        i = sqrt_minus_one(p, max(x.absprec, y.absprec, 1) + 2)
        eps1 = _null_sign(x, y, i)
        eps2 = _null_sign(x2, y2, i)
        if eps1 is None or eps2 is None:
            raise IndeterminateCase("cannot place the points on a null-cone line")
        if eps1 != eps2:
            return OrbitResult("not_related")
        u, u2 = (x, x2) if not x.is_zero() else (y, y2)
        z = u2 / u
        zi = z.inverse()
        a = (z + zi) / 2
        b = (z - zi) / (2 * i) * eps1
        g = CirclePoint(a, b)
    if not g.on_circle():
        return OrbitResult("not_related")
    img = (g.a * x + g.b * y, g.a * y - g.b * x)
    if not (img[0] == x2 and img[1] == y2):
        return OrbitResult("not_related")
    return OrbitResult("related", g)


def _null_sign(x, y, i):
    if (y - i * x).is_zero():
        return 1
    if (y + i * x).is_zero():
        return -1
    return None


class SphereRotation(RotationFamily):
    """One circle rotating several spheres (and optionally planes) at once."""

    def __init__(self, name, p, blocks, form, mom, flags, params):
        super().__init__(p, CompactTorusGroup(p, 1), PhaseSpace(p, blocks), form, params, flags)
        self.name = name
        self.momentum_polys = mom


def rotation_sphere(p):
    v = _vars(3)
    a = SphereRotation("rotation_sphere", p, [("sphere", 3)], SymplecticFormSpec.sphere(),
                       [v[2]], _flags(True, True, p % 4 != 1, True, True, False, True), {})
    a.planes = (((0, 1),),)
    return a


def jaynes_cummings(p):
    form = SymplecticFormSpec.product([SymplecticFormSpec.sphere(), SymplecticFormSpec.standard(1)])
    v = _vars(5)
    a = SphereRotation("jaynes_cummings", p, [("sphere", 3), ("affine", 2)], form,
                       [(v[3] ** 2 + v[4] ** 2) / 2 + v[2]],
                       _flags(True, True, None, True, True, False, True), {})
    a.planes = (((0, 1), (3, 4)),)
    return a


def coupled_angular_momentum(p, R1=1, R2=2):
    R1, R2 = Fraction(R1), Fraction(R2)
    form = SymplecticFormSpec.product([SymplecticFormSpec.sphere(), SymplecticFormSpec.sphere()], [R1, R2])
    v = _vars(6)
    a = SphereRotation("coupled_angular_momentum", p, [("sphere", 3), ("sphere", 3)], form,
                       [v[2] * R1 + v[5] * R2],
                       _flags(True, True, None, True, True, False, True), {"R1": R1, "R2": R2})
    a.planes = (((0, 1), (3, 4)),)
    return a


def jc_observables():
    """(u^2 + v^2)/2 + z and u x + v y on S^2 x Qp^2, coordinates (x, y, z, u, v)."""
    x, y, z, u, v = _vars(5)
    form = SymplecticFormSpec.product([SymplecticFormSpec.sphere(), SymplecticFormSpec.standard(1)])
    return (u**2 + v**2) / 2 + z, u * x + v * y, form


# -- SO(3) ----------------------------------------------------------------------


class SO3AngularMomentum(ActionDescriptor):
    """SO(3, Qp) on Qp^3 x Qp^3 with coordinates (x1, x2, x3, y1, y2, y3)."""

    name = "so3_angular_momentum"

    def __init__(self, p):
        form = SymplecticFormSpec(6, [("plane", (i, i + 3), 1) for i in range(3)])
        super().__init__(p, SO3Group(p), PhaseSpace(p, [("affine", 6)]), form, {},
                         _flags(True, True, None, False, p == 2, False, True))
        x = _vars(6)
        self.momentum_polys = list(cross(x[0:3], x[3:6]))

    def act(self, g, m):
        if not isinstance(g, SO3Element):
            raise GroupMismatch("so3_angular_momentum needs an SO(3) element")
        self._check_m(m)
        return matvec(g.matrix, m[0:3]) + matvec(g.matrix, m[3:6])

    def generator(self, xi, m):
        self._check_xi(xi)
        self._check_m(m)
        return tuple(cross(xi, m[0:3])) + tuple(cross(xi, m[3:6]))


# -- the digit action -------------------------------------------------------------


class DigitCounterexample(ActionDescriptor):
    """Qp acting freely on (Zp)^2; locally a translation in x with local momentum y."""

    name = "digit_counterexample"

    def __init__(self, p):
        super().__init__(p, AdditiveGroup(p, 1, None, name=f"Q_{p}"), PhaseSpace(p, [("ball", 2)]),
                         SymplecticFormSpec.standard(1), {},
                         _flags(True, False, False, True, False, True, False))
        self.momentum_polys = [_vars(2)[1]]

    def act(self, g, m):
        (g,) = _as_tuple(g)
        self._check_m(m)
        return digit_act(g, m, self.p)

    def generator(self, xi, m):
        self._check_xi(xi)
        return (xi[0], 0 * xi[0])

    def sample_group(self, rng, prec=32):
        return (random_padic(self.p, rng, prec, -8, 3),)

    def special_witnesses(self, prec=32, guard=4):
        """g = p^-guard at the origin: mu jumps from 0 to p^(guard-1)."""
        zero = Padic.zero(self.p, prec + guard)
        g = Padic.from_rational(Fraction(1, self.p**guard), self.p, prec=prec)
        return [((g,), (zero, zero))]

    def orbit_witness(self, m1, m2):
        return digit_orbit_equiv(m1, m2, self.p)


# -- toric assembly -----------------------------------------------------------------


class ToricAction(RotationFamily):
    """(G_p)^n rotating each leaf ball of a subdivision of (Zp)^(2n) about its center."""

    name = "toric"

    def __init__(self, p, n=1, plan=()):
        super().__init__(p, CompactTorusGroup(p, n), PhaseSpace(p, [("ball", 2 * n)]),
                         SymplecticFormSpec.standard(n), {"n": n, "plan": list(plan)},
                         _flags(True, True, None, True, True, False, True))
        self.n = n
        self.planes = tuple(((2 * i, 2 * i + 1),) for i in range(n))
        self.balls = [((0,) * (2 * n), 0)]
        self.trail = [1]
        for idx in plan:
            self.subdivide(idx)

    def subdivide(self, idx):
        if not isinstance(idx, int) or not 0 <= idx < len(self.balls):
            raise PlanError(f"no ball with index {idx!r} (there are {len(self.balls)})")
        center, r = self.balls[idx]
        p, dim = self.p, 2 * self.n
        children = []
        for code in range(p**dim):
            rho = []
            for _ in range(dim):
                code, d = divmod(code, p)
                rho.append(d)
            rho.reverse()  # lexicographic order in the residue digits
            children.append((tuple(c + p**r * d for c, d in zip(center, rho)), r + 1))
        self.balls[idx:idx + 1] = children
        self.trail.append(p**dim - 1)

    @property
    def fixed_point_count(self):
        return len(self.balls)

    def fixed_points(self):
        return [c for c, _ in self.balls]

    def locate(self, m):
        for idx, (c, r) in enumerate(self.balls):
            inside = True
            for x, ci in zip(m, c):
                d = x - ci
                if d.v == INFTY:
                    if d.absprec < r:
                        raise IndeterminateCase("point is too imprecise to pick its ball")
                elif d.v < r:
                    inside = False
                    break
            if inside:
                return idx
        raise DomainError("point lies outside (Z_p)^(2n)")

    def act(self, g, m):
        self._check_m(m)
        c, _ = self.balls[self.locate(m)]
        rel = tuple(x - ci for x, ci in zip(m, c))
        moved = RotationFamily.act(self, g, rel)
        return tuple(x + ci for x, ci in zip(moved, c))

    def generator(self, xi, m):
        c, _ = self.balls[self.locate(m)]
        return RotationFamily.generator(self, xi, tuple(x - ci for x, ci in zip(m, c)))

    def momentum(self, m):
        c, _ = self.balls[self.locate(m)]
        rel = [x - ci for x, ci in zip(m, c)]
        return tuple((rel[2 * i] * rel[2 * i] + rel[2 * i + 1] * rel[2 * i + 1]) / 2 for i in range(self.n))

    def census(self):
        return {"balls": len(self.balls), "fixed_points": self.fixed_point_count,
                "trail": " + ".join(str(t) for t in self.trail)}

    def exhaustive_fixed_points(self, prec=3):
        """Points of (Z/p^prec)^(2n) fixed mod p^prec by the torsion generator
        and by embed(p^d) in every factor."""
        p, dim = self.p, 2 * self.n
        gens = []
        for j in range(self.n):
            for c in (torsion_generator(p, prec + 2), None):
                gens.append((j, c))
        principal = circle_embed(Padic.from_rational(p ** conv_exponent(p), p, prec=prec + 2))
        count = 0
        for code in range(p ** (prec * dim)):
            coords = []
            for _ in range(dim):
                code, d = divmod(code, p**prec)
                coords.append(Padic.from_rational(d, p, absprec=prec) if d else Padic.zero(p, prec))
            m = tuple(coords)
            fixed = True
            for j, c in gens:
                c = c or principal
                circles = [c if i == j else _circle_one(p, prec + 2) for i in range(self.n)]
                img = self.act(tuple(circles), m)
                if not all(((a - b).v == INFTY) for a, b in zip(img, m)):
                    fixed = False
                    break
            count += fixed
        return count


def _circle_one(p, prec):
    return CirclePoint(Padic.from_rational(1, p, prec=prec), Padic.zero(p, prec))


def parse_plan(text):
    """"[0, 0]" -> [0, 0]; a plan lists the leaf indices subdivided in turn."""
    try:
        plan = json.loads(text)
    except ValueError as exc:
        raise PlanError(f"malformed plan {text!r}") from exc
    if not isinstance(plan, list) or not all(isinstance(i, int) for i in plan):
        raise PlanError("plan must be a list of leaf indices")
    return plan


# -- reparametrized torus action ---------------------------------------------------


class ReparametrizedAction(ActionDescriptor):
    """psi'(g, m) = psi(phi_A(g), m) for phi_A(t) = t A; its momentum map is A mu."""

    def __init__(self, base, A):
        check_gl_zp(A, base.p)
        super().__init__(base.p, base.group, base.space, base.form,
                         {"base": base.name, "A": [[str(Fraction(x)) for x in r] for r in A]}, dict(base.flags))
        self.name = f"{base.name}_reparam"
        self.base = base
        self.A = [[Fraction(x) for x in r] for r in A]
        if base.momentum_polys is not None:
            k = base.k
            self.momentum_polys = [sum((base.momentum_polys[j] * self.A[i][j] for j in range(k)),
                                       PolyObservable(base.dim)) for i in range(k)]

    def act(self, g, m):
        if not hasattr(g, "factors"):
            g = self.group._coerce(g)
        return self.base.act(torus_reparam(self.A, g), m)

    def _xi_a(self, xi):
        k = self.k
        return tuple(sum((xi[i] * self.A[i][j] for i in range(1, k)), xi[0] * self.A[0][j]) for j in range(k))

    def generator(self, xi, m):
        self._check_xi(xi)
        return self.base.generator(self._xi_a(xi), m)


def rotation_pair_reparam(p, A=((1, 1), (0, 1))):
    action = ReparametrizedAction(RotationPlane(p, 2), A)
    action.name = "rotation_pair_reparam"
    return action


# -- registry ------------------------------------------------------------------------

REGISTRY = {
    "translation": translation,
    "rotation_plane": RotationPlane,
    "rotation_sphere": rotation_sphere,
    "jaynes_cummings": jaynes_cummings,
    "coupled_angular_momentum": coupled_angular_momentum,
    "so3_angular_momentum": SO3AngularMomentum,
    "weak_only": weak_only,
    "no_fixed_points": no_fixed_points,
    "piecewise": PiecewiseAction,
    "digit_counterexample": DigitCounterexample,
    "toric": ToricAction,
}


ALIASES = {"rotation": "rotation_plane"}


def make_action(name, p, **params):
    name = ALIASES.get(name, name)
    if name == "rotation_pair_reparam":
        return rotation_pair_reparam(p, **params)
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise UnsupportedAction(f"unknown action {name!r}; known: {', '.join(REGISTRY)}") from None
    return factory(p, **params)
