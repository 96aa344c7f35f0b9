"""Polynomial observables and 1-forms with exact rational coefficients.

Coefficients are ``Fraction``; evaluation accepts any ring elements (``Padic``
or ``Fraction``), so the same observable can be used symbolically and at
p-adic sample points.
"""

from fractions import Fraction
from itertools import product

from .errors import NotClosed, PrecisionExhausted, RankMismatch
from .padic import ord_p


class PolyObservable:
    """sum c_I x^I over m variables; terms maps exponent tuples to coefficients."""

    def __init__(self, nvars, terms=None, names=None):
        self.nvars = nvars
        self.terms = {}
        for exps, c in (terms or {}).items():
            if len(exps) != nvars:
                raise RankMismatch(f"exponent {exps} does not have {nvars} entries")
            if any(e < 0 for e in exps):
                raise ValueError("exponents must be non-negative")
            c = Fraction(c)
            if c:
                self.terms[tuple(exps)] = self.terms.get(tuple(exps), 0) + c
        self.terms = {e: c for e, c in self.terms.items() if c}
        self.names = names

    @classmethod
    def const(cls, c, nvars):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def variables(cls, nvars):
        return [cls.var(i, nvars) for i in range(nvars)]

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self):
        return not self.terms

    def _lift(self, other):
        if isinstance(other, PolyObservable):
            if other.nvars != self.nvars:
                raise RankMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        return PolyObservable.const(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return PolyObservable(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyObservable(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = {}
        for (e1, c1), (e2, c2) in product(self.terms.items(), other.terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
        return PolyObservable(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    def __pow__(self, k):
        out = PolyObservable.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PolyObservable.const(other, self.nvars)
        return isinstance(other, PolyObservable) and self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None

    def diff(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return PolyObservable(self.nvars, out)

    def gradient(self):
        return [self.diff(i) for i in range(self.nvars)]

    def antidiff(self, i):
        """Antiderivative in x_i with zero constant: x^k -> x^(k+1)/(k+1)."""
        out = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[i] += 1
            out[tuple(e2)] = c / e2[i]
        return PolyObservable(self.nvars, out)

    def restrict_zero(self, start):
        """Set x_start, ..., x_{m-1} to zero."""
        return PolyObservable(self.nvars, {e: c for e, c in self.terms.items() if not any(e[start:])})

    def __call__(self, point):
        if len(point) != self.nvars:
            raise RankMismatch(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = None
        for e, c in self.terms.items():
            term = None
            for x, k in zip(point, e):
                if k:
                    term = x**k if term is None else term * x**k
            term = c if term is None else term * c
            total = term if total is None else total + term
        if total is None:
            return 0 * point[0] if point else Fraction(0)
        return total

    def __repr__(self):
        names = self.names or [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            parts.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts)


class PolyOneForm:
    """alpha = sum alpha_i dx_i."""

    def __init__(self, components):
        components = list(components)
        n = len(components)
        if any(c.nvars != n for c in components):
            raise RankMismatch("a 1-form needs one coefficient per variable")
        self.components = components

    @property
    def nvars(self):
        return len(self.components)

    def __eq__(self, other):
        return isinstance(other, PolyOneForm) and self.components == other.components

    __hash__ = None

    def __repr__(self):
        return " + ".join(f"({c}) dx{i + 1}" for i, c in enumerate(self.components))


def exterior_d(f):
    return PolyOneForm(f.gradient())


def closedness_defects(alpha):
    """Nonzero d_j alpha_i - d_i alpha_j for i < j."""
    out = []
    for i in range(alpha.nvars):
        for j in range(i + 1, alpha.nvars):
            defect = alpha.components[j].diff(i) - alpha.components[i].diff(j)
            if not defect.is_zero():
                out.append((i, j, defect))
    return out


def integrate_closed_form(alpha, p=None, digits=32):
    """f with df = alpha and f(0) = 0, built one variable at a time.

    f = sum_j int_0^{x_j} alpha_j(x_1, ..., x_j, 0, ..., 0) dx_j.  When p is given
    the largest p-adic denominator introduced, ord_p(k+1), is recorded as
    ``f.precision_loss``; exceeding ``digits`` raises PrecisionExhausted.
    """
    if closedness_defects(alpha):
        raise NotClosed(f"{alpha} is not closed")
    n = alpha.nvars
    f = PolyObservable(n)
    loss = 0
    for j, comp in enumerate(alpha.components):
        piece = comp.restrict_zero(j + 1)
        if p is not None:
            for e, c in piece.terms.items():
                loss = max(loss, ord_p(e[j] + 1, p))
        f = f + piece.antidiff(j)
    if loss >= digits:
        raise PrecisionExhausted(f"integration loses {loss} of {digits} digits")
    f.precision_loss = loss
    return f


def random_poly(rng, nvars, degree, coeff_range=5, density=0.5):
    terms = {}
    for e in product(range(degree + 1), repeat=nvars):
        if sum(e) <= degree and rng.random() < density:
            terms[e] = rng.randint(-coeff_range, coeff_range)
    return PolyObservable(nvars, terms)
