import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicsym.errors import DomainError, NotOnCircle, PrimeMismatch, RankMismatch, SingularMatrix
from padicsym.groups import (
    CompactTorusElement,
    CompactTorusGroup,
    SO3Group,
    TorusFactor,
    bar_modulus,
    cayley,
    circle_decompose,
    circle_embed,
    circle_identity,
    circle_inv,
    circle_kind,
    circle_mul,
    circle_point,
    circle_pow,
    circle_recompose,
    coadjoint,
    compact_torus_identity,
    compact_torus_inv,
    compact_torus_mul,
    so3_element,
    torsion_generator,
    torus_reparam,
)
from padicsym.padic import Padic
from padicsym.series import conv_exponent, hensel_sqrt, padic_cos, padic_sin

from strategies import padics, primes


def P(q, p, prec=32):
    return Padic.from_rational(q, p, prec=prec)


def pt(a, b, p):
    return circle_point(Fraction(a), Fraction(b), p)


def test_circle_mul_examples():
    g = pt(Fraction(3, 5), Fraction(4, 5), 7)
    assert circle_mul(circle_identity(7), g) == g
    assert circle_mul(pt(0, 1, 3), pt(0, 1, 3)) == pt(-1, 0, 3)
    assert circle_mul(g, g) == pt(Fraction(-7, 25), Fraction(24, 25), 7)


def test_circle_inv_examples():
    assert circle_inv(pt(1, 0, 3)) == pt(1, 0, 3)
    assert circle_inv(pt(0, 1, 3)) == pt(0, -1, 3)
    g = pt(Fraction(3, 5), Fraction(4, 5), 7)
    assert circle_mul(g, pt(Fraction(3, 5), Fraction(-4, 5), 7)) == circle_identity(7)


def test_circle_point_checks():
    with pytest.raises(NotOnCircle):
        pt(1, 1, 5)
    with pytest.raises(PrimeMismatch):
        circle_mul(pt(1, 0, 3), pt(1, 0, 5))


def test_circle_embed_examples():
    assert circle_embed(Padic.zero(5, 10)) == circle_identity(5)
    g = circle_embed(P(5, 5, 3))
    assert str(g.a) == "1 + 2*5^2 + O(5^3)"
    # sin(5) = 5 - 125/6 + ... agrees with 5 only modulo 5^3
    assert (g.b - 5).v == 3 and g.b.digits() == [1, 0, 4]
    with pytest.raises(DomainError):
        circle_embed(P(1, 5))


def test_decompose_examples():
    f = circle_decompose(pt(-1, 0, 3))
    assert (f.bar, f.t.is_zero(), f.modulus) == (2, True, 4)
    assert torsion_generator(3) == pt(0, 1, 3)
    for p in (2, 3, 5, 7):
        f = circle_decompose(circle_identity(p))
        assert f.bar == 0 and f.hat == 0 and f.t.is_zero()
    # p = 5: a + b*i = i, a fourth root of unity
    f = circle_decompose(pt(0, 1, 5))
    assert f.t.is_zero() and f.hat == 0
    i = hensel_sqrt(P(-1, 5))
    assert i**4 == 1
    assert circle_recompose(f) == pt(0, 1, 5)


def test_kinds_and_moduli():
    assert [circle_kind(p) for p in (2, 3, 5, 7, 13)] == ["two", "inert", "split", "inert", "split"]
    assert [bar_modulus(p) for p in (2, 3, 5, 7, 13)] == [4, 4, 4, 8, 12]


@pytest.mark.parametrize("p", [3, 7, 11])
def test_torsion_generator_has_order_p_plus_one(p):
    g = torsion_generator(p)
    assert circle_pow(g, p + 1) == circle_identity(p)
    for d in range(1, p + 1):
        if (p + 1) % d == 0 and d < p + 1:
            assert not circle_pow(g, d) == circle_identity(p)


def test_compact_torus_examples():
    g = CompactTorusElement((TorusFactor(3, 2, Padic.zero(3, 20)),))
    e = compact_torus_identity(3, 1)
    assert compact_torus_mul(e, g) == g
    sq = compact_torus_mul(g, g)
    assert sq.factors[0].bar == 0 and sq.factors[0].t.is_zero()
    a = CompactTorusElement((TorusFactor(5, 0, P(5, 5)),))
    b = CompactTorusElement((TorusFactor(5, 0, P(20, 5)),))
    c = compact_torus_mul(a, b)
    assert c.ts[0] == P(25, 5)
    assert circle_embed(c.ts[0]) == circle_mul(circle_embed(P(5, 5)), circle_embed(P(20, 5)))
    assert compact_torus_mul(a, compact_torus_inv(a)) == compact_torus_identity(5, 1)
    with pytest.raises(RankMismatch):
        compact_torus_mul(a, compact_torus_identity(5, 2))


def test_torus_factor_domain():
    with pytest.raises(DomainError):
        TorusFactor(2, 0, P(2, 2))
    with pytest.raises(ValueError):
        TorusFactor(3, 4, P(3, 3))


def test_torus_reparam_examples():
    g = CompactTorusElement((TorusFactor(5, 1, P(5, 5)), TorusFactor(5, 2, P(50, 5))))
    assert torus_reparam([[1, 0], [0, 1]], g) == g
    h = torus_reparam([[1, 1], [0, 1]], g)
    assert h.ts == (P(5, 5), P(55, 5))
    assert [f.bar for f in h.factors] == [1, 2]
    g1 = CompactTorusElement((TorusFactor(5, 0, P(5, 5)),))
    assert torus_reparam([[2]], g1).ts[0] == P(10, 5)
    with pytest.raises(SingularMatrix):
        torus_reparam([[5]], g1)
    with pytest.raises(SingularMatrix):
        torus_reparam([[1, 1], [1, 1]], g)


def test_reparam_inverse_round_trip(rng):
    G = CompactTorusGroup(3, 2)
    A, Ainv = [[2, 1], [1, 1]], [[1, -1], [-1, 2]]
    for _ in range(20):
        g = G.random(rng)
        assert torus_reparam(Ainv, torus_reparam(A, g)) == g


def test_coadjoint_examples():
    G = CompactTorusGroup(5, 2)
    eta = (P(1, 5), P(7, 5))
    assert coadjoint(G, G.random(random.Random(1)), eta) == eta
    S = SO3Group(5)
    perm = so3_element([[0, 0, 1], [1, 0, 0], [0, 1, 0]], 5)  # e1 -> e2 -> e3
    e1 = (P(1, 5), Padic.zero(5, 32), Padic.zero(5, 32))
    out = coadjoint(S, perm, e1)
    assert out[1] == 1 and out[0].is_zero() and out[2].is_zero()
    assert coadjoint(S, S.identity(), e1) == e1
    with pytest.raises(RankMismatch):
        coadjoint(G, G.identity(), e1)


def test_coadjoint_is_a_homomorphism_on_so3(rng):
    S = SO3Group(7)
    for _ in range(10):
        g, h = S.random(rng), S.random(rng)
        eta = tuple(P(rng.randint(-50, 50), 7) for _ in range(3))
        lhs = coadjoint(S, S.mul(g, h), eta)
        rhs = coadjoint(S, g, coadjoint(S, h, eta))
        assert lhs == rhs


def test_cayley_is_orthogonal():
    M = cayley((Fraction(3), Fraction(-1), Fraction(2)))
    for i in range(3):
        for j in range(3):
            assert sum(M[i][l] * M[j][l] for l in range(3)) == (i == j)
    assert so3_element(M, 5).check()


# -- properties ---------------------------------------------------------------------


@st.composite
def embeddable(draw, p=None):
    p = p or draw(primes)
    d = conv_exponent(p)
    return draw(padics(p=p, prec=16, min_val=d, max_val=d + 3))


@settings(max_examples=40)
@given(st.data())
def test_embed_homomorphism(data):
    p = data.draw(primes)
    s, t = data.draw(embeddable(p)), data.draw(embeddable(p))
    assert circle_mul(circle_embed(s), circle_embed(t)) == circle_embed(s + t)


@settings(max_examples=40)
@given(st.data())
def test_circle_group_axioms(data):
    p = data.draw(primes)
    g, h, k = (circle_embed(data.draw(embeddable(p))) for _ in range(3))
    z = torsion_generator(p, 16) if circle_kind(p) != "split" else circle_identity(p, 16)
    g = circle_mul(z, g)
    assert circle_mul(circle_mul(g, h), k) == circle_mul(g, circle_mul(h, k))
    assert circle_mul(g, circle_identity(p)) == g
    assert circle_mul(g, circle_inv(g)) == circle_identity(p)


@settings(max_examples=40)
@given(st.data())
def test_decompose_recompose(data):
    p = data.draw(primes)
    t = data.draw(embeddable(p))
    bar = data.draw(st.integers(0, bar_modulus(p) - 1))
    f = TorusFactor(p, bar, t)
    g = circle_recompose(f, prec=16)
    back = circle_decompose(g)
    assert back.bar == bar and back.t == t
    assert circle_recompose(back) == g


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_compact_mul_matches_circle_mul(p, rng):
    G = CompactTorusGroup(p, 1)
    for _ in range(10):
        g, h = G.random(rng, 16), G.random(rng, 16)
        lhs = G.mul(g, h).to_circles()[0]
        rhs = circle_mul(g.to_circles()[0], h.to_circles()[0])
        assert lhs == rhs


def test_embed_agrees_with_series():
    t = P(3, 3, 12)
    g = circle_embed(t)
    assert g.a == padic_cos(t) and g.b == padic_sin(t)
