import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicsym.errors import NotClosed, PrecisionExhausted, RankMismatch, UnsupportedForm
from padicsym.forms import PhaseSpace, SymplecticFormSpec, poisson_bracket, reduce_on_spheres, sphere_sample
from padicsym.padic import Padic
from padicsym.polynomial import (
    PolyObservable,
    PolyOneForm,
    closedness_defects,
    exterior_d,
    integrate_closed_form,
    random_poly,
)

x, y = PolyObservable.variables(2)


def test_arithmetic_and_eval():
    f = (x + y) ** 2 - 2 * x * y
    assert f == x**2 + y**2
    assert f.degree() == 2
    assert f((Fraction(3), Fraction(4))) == 25
    assert f((Padic.from_rational(3, 5), Padic.from_rational(4, 5))) == 25
    assert (f / 2).terms[(2, 0)] == Fraction(1, 2)
    assert repr(x * y + 1) == "1 + x1*x2"
    with pytest.raises(RankMismatch):
        f((1, 2, 3))


def test_closed_examples():
    assert closedness_defects(PolyOneForm([y, x])) == []
    d = closedness_defects(PolyOneForm([-y, x]))
    assert len(d) == 1 and d[0][2] == PolyObservable.const(2, 2)
    assert closedness_defects(PolyOneForm([x + y, x + y**3])) == []


def test_integrate_examples():
    assert integrate_closed_form(PolyOneForm([2 * x, PolyObservable(2)])) == x**2
    assert integrate_closed_form(PolyOneForm([y, x])) == x * y
    f = integrate_closed_form(PolyOneForm([x + y, x + y**3]))
    assert f == x**2 / 2 + x * y + y**4 / 4
    with pytest.raises(NotClosed):
        integrate_closed_form(PolyOneForm([-y, x]))


def test_integration_precision_loss():
    f = integrate_closed_form(PolyOneForm([x**8, PolyObservable(2)]), p=3)
    assert f.precision_loss == 2  # x^9 / 9
    with pytest.raises(PrecisionExhausted):
        integrate_closed_form(PolyOneForm([x**8, PolyObservable(2)]), p=3, digits=2)


@pytest.mark.parametrize("p,nvars,degree", [(3, 2, 5), (5, 3, 5), (7, 4, 4), (2, 3, 3)])
def test_integrate_then_differentiate(p, nvars, degree):
    rng = random.Random(p * 100 + nvars)
    for _ in range(50):
        g = random_poly(rng, nvars, degree + 1, density=0.3)
        alpha = exterior_d(g)
        f = integrate_closed_form(alpha, p=p)
        assert exterior_d(f) == alpha
        assert f([Fraction(0)] * nvars) == 0


# -- brackets -------------------------------------------------------------------


def test_bracket_examples():
    std = SymplecticFormSpec.standard(1)
    assert poisson_bracket(y, -x, std) == PolyObservable.const(1, 2)
    f = x**2 * y + 3 * y
    assert poisson_bracket(f, f, std).is_zero()
    sph = SymplecticFormSpec.sphere()
    X, Y, Z = PolyObservable.variables(3)
    assert poisson_bracket(X, Y, sph) == -Z
    assert poisson_bracket(Y, Z, sph) == -X
    assert poisson_bracket(Z, X, sph) == -Y


def test_jaynes_cummings_commutes():
    form = SymplecticFormSpec.product([SymplecticFormSpec.sphere(), SymplecticFormSpec.standard(1)])
    X, Y, Z, U, V = PolyObservable.variables(5)
    J = (U**2 + V**2) / 2 + Z
    H = U * X + V * Y
    assert reduce_on_spheres(poisson_bracket(J, H, form), form).is_zero()


def test_product_weights_scale_bracket():
    form = SymplecticFormSpec.product([SymplecticFormSpec.standard(1)], weights=[2])
    assert poisson_bracket(y, -x, form) == PolyObservable.const(Fraction(1, 2), 2)


def test_form_validation():
    with pytest.raises(UnsupportedForm):
        SymplecticFormSpec(2, [("disk", (0, 1), 1)])
    with pytest.raises(UnsupportedForm):
        SymplecticFormSpec(3, [("plane", (0, 1), 1)])
    with pytest.raises(UnsupportedForm):
        poisson_bracket(x, y, "standard")


def test_form_matrix_matches_omega():
    form = SymplecticFormSpec.product([SymplecticFormSpec.sphere(), SymplecticFormSpec.standard(1)], [3, 1])
    m = (Fraction(3, 5), Fraction(4, 5), Fraction(0), Fraction(1), Fraction(2))
    M = form.matrix(m)
    for i in range(5):
        for j in range(5):
            u = [Fraction(int(k == i)) for k in range(5)]
            v = [Fraction(int(k == j)) for k in range(5)]
            assert form.omega(m, u, v) == M[i][j]


def test_sphere_sample_on_sphere(rng):
    space = PhaseSpace(5, [("sphere", 3)])
    for _ in range(20):
        m = sphere_sample(5, rng)
        assert space.contains(m)
        assert all(c.is_integral() for c in m)
        # tangent basis vectors are orthogonal to m
        for v in space.tangent_basis(m):
            assert (m[0] * v[0] + m[1] * v[1] + m[2] * v[2]).is_zero()


polys3 = st.builds(lambda seed: random_poly(random.Random(seed), 4, 3, density=0.3), st.integers(0, 10**6))


@settings(max_examples=40, deadline=None)
@given(polys3, polys3, polys3, st.integers(-5, 5))
def test_bracket_laws(f, g, h, c):
    form = SymplecticFormSpec.standard(2)

    def br(a, b):
        return poisson_bracket(a, b, form)

    assert br(f, g) == -br(g, f)
    assert br(f + c * g, h) == br(f, h) + c * br(g, h)
    assert br(f * g, h) == f * br(g, h) + g * br(f, h)
    assert (br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))).is_zero()


sphere_polys = st.builds(lambda seed: random_poly(random.Random(seed), 3, 3, density=0.3), st.integers(0, 10**6))


@settings(max_examples=25, deadline=None)
@given(sphere_polys, sphere_polys, sphere_polys)
def test_sphere_bracket_jacobi(f, g, h):
    form = SymplecticFormSpec.sphere()

    def br(a, b):
        return poisson_bracket(a, b, form)

    assert br(f, g) == -br(g, f)
    assert br(f * g, h) == f * br(g, h) + g * br(f, h)
    jac = br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))
    assert reduce_on_spheres(jac, form).is_zero()
