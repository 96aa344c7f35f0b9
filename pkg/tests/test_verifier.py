import json
import warnings
from fractions import Fraction

import pytest

from padicsym.actions import make_action, rotation_pair_reparam
from padicsym.errors import RankDeficiencyWarning, UnsupportedForm
from padicsym.groups import circle_point
from padicsym.padic import Padic
from padicsym.polynomial import PolyObservable, PolyOneForm
from padicsym.verifier import (
    SuiteConfig,
    check_closed,
    check_duality,
    check_gauge,
    check_hamilton,
    check_isotropy,
    check_orbit_invariance,
    check_pullback_symplectic,
    cocycle_tau,
    directional_derivative,
    numeric_generator,
    run_all,
    run_check,
    sample_group,
    sample_points,
    tau_constants,
)


def P(q, p, prec=32):
    return Padic.from_rational(q, p, prec=prec)


def Z(p, prec=32):
    return Padic.zero(p, prec)


x, y = PolyObservable.variables(2)


def test_directional_derivative_examples():
    m = (P(3, 5), P(7, 5))
    d = directional_derivative(y, m, (Z(5), P(1, 5)), 6)
    assert d.value == 1 and d.value.absprec == 2 and d.exact == 1
    f = (x**2 + y**2) / 2
    one0 = (P(1, 5), Z(5))
    d = directional_derivative(f, one0, (Z(5), P(1, 5)), 6)
    assert d.value.is_zero() and d.exact.is_zero()
    d = directional_derivative(f, one0, (P(1, 5), Z(5)), 6)
    assert d.value == 1 and d.exact == 1
    with pytest.raises(ValueError):
        directional_derivative(f, one0, (P(1, 5), Z(5)), 0)


@pytest.mark.parametrize("k", range(2, 9))
def test_directional_derivative_matches_gradient(k, rng):
    from padicsym.polynomial import random_poly

    for _ in range(100):
        f = random_poly(rng, 2, 3)
        m = tuple(P(rng.randint(-99, 99), 3) for _ in range(2))
        v = tuple(P(rng.randint(-9, 9), 3) for _ in range(2))
        d = directional_derivative(f, m, v, k, guard=4)
        diff = d.value - d.exact
        assert diff.is_zero() or diff.v >= k - 4


def test_numeric_generator_examples():
    t = make_action("translation", 5)
    g = numeric_generator(t, (P(1, 5),), (P(2, 5), P(3, 5)), 3)
    assert g[0] == 1 and g[1].is_zero()
    r = make_action("rotation_plane", 5)
    g = numeric_generator(r, (P(1, 5),), (P(1, 5), Z(5)), 2)
    assert (g[0] - 0).v >= 1 and (g[1] + 1).v >= 1
    dg = make_action("digit_counterexample", 5)
    for k in (1, 3, 6):
        g = numeric_generator(dg, (P(1, 5),), (Z(5), Z(5)), k)
        assert g[0] == 1 and g[1].is_zero()


def test_hamilton_examples():
    for name, p in [("rotation_plane", 5), ("weak_only", 5), ("translation", 7)]:
        a = make_action(name, p)
        assert check_hamilton(a, sample_points(a, 16)).verdict == "pass"
    a = make_action("translation", 5)
    bad = check_hamilton(a, sample_points(a, 8), momentum=lambda m: (m[0],))
    assert bad.verdict == "fail" and bad.witnesses


def test_isotropy_examples():
    t = make_action("translation", 5, n=2)
    assert check_isotropy(t, sample_points(t, 8)).passed
    w = make_action("weak_only", 5)
    rep = check_isotropy(w, sample_points(w, 8))
    assert rep.verdict == "fail"
    assert all(v == 1 for v in rep.values["nonzero_values"])
    d = make_action("digit_counterexample", 5)
    assert check_isotropy(d, sample_points(d, 8)).passed


def test_invariance_examples():
    for name in ("rotation_plane", "so3_angular_momentum"):
        a = make_action(name, 7)
        rep = check_orbit_invariance(a, sample_points(a, 16), sample_group(a, 16))
        assert rep.passed
    d = make_action("digit_counterexample", 3)
    rep = check_orbit_invariance(d, sample_points(d, 8), sample_group(d, 8))
    assert rep.verdict == "fail"
    w = rep.witnesses[0]
    assert w["g"][0] == Fraction(1, 81) and w["mu_before"][0].is_zero() and w["mu_after"][0] == 27


def test_pullback_examples():
    t = make_action("translation", 5)
    rep = check_pullback_symplectic(t, (P(3, 5),), sample_points(t, 8))
    # J = identity: agreement on every digit left after the step p^6
    assert rep.passed and rep.min_discrepancy_valuation == 32 - 6
    r = make_action("rotation_plane", 5)
    quarter = circle_point(0, 1, 5)
    assert check_pullback_symplectic(r, (quarter,), sample_points(r, 8)).passed
    d = make_action("digit_counterexample", 3)
    assert check_pullback_symplectic(d, (P(Fraction(5, 3), 3),), [(Z(3), P(4, 3))]).passed


def test_tau_examples():
    r = make_action("rotation_plane", 5)
    b = r.basis()[0]
    rep = cocycle_tau(r, b, b, sample_points(r, 8))
    assert rep.passed and all(t.is_zero() for t in rep.values["tau"])
    w = make_action("weak_only", 5)
    e1, e2 = w.basis()
    rep = cocycle_tau(w, e1, e2, sample_points(w, 8))
    consts = tau_constants(rep, 2)
    assert rep.passed and len(consts) == 1 and consts[0] == 1
    s = make_action("so3_angular_momentum", 5)
    e1, e2, _ = s.basis()
    m = (P(1, 5), Z(5), Z(5), Z(5), P(1, 5), Z(5))
    rep = cocycle_tau(s, e1, e2, [m] + sample_points(s, 4))
    assert all(t.is_zero() or t.v >= 2 for t in rep.values["tau"])


def test_gauge_examples():
    t = make_action("translation", 5)
    pts = sample_points(t, 12)
    rep = check_gauge(t, lambda m: (m[1] + 7,), pts)
    assert rep.passed and len(rep.values["offsets"]) == 1 and rep.values["offsets"][0][0] == 7

    def step(m):
        inside = m[0].is_zero() or m[0].v >= 1
        return (m[1] + (1 if inside else 0),)

    pts = pts + [(P(5, 5), P(1, 5)), (P(1, 5), P(1, 5))]
    rep = check_gauge(t, step, pts)
    assert rep.passed and len(rep.values["offsets"]) == 2
    assert check_gauge(t, lambda m: (m[1] + m[0],), pts).verdict == "fail"


def test_closed_examples():
    assert check_closed(PolyOneForm([y, x])).passed
    rep = check_closed(PolyOneForm([-y, x]))
    assert rep.verdict == "fail" and rep.witnesses[0]["defect"] == "2"
    assert check_closed(PolyOneForm([x + y, x + y**3])).passed


def test_duality_examples():
    r = make_action("rotation_plane", 5)
    rep = check_duality(r, (Fraction(1), Fraction(0)))
    assert rep.passed and rep.values["rank_im_L"] == 1 and rep.values["dim_ker_T"] == 1
    t = make_action("translation", 5, n=2)
    assert check_duality(t, tuple(Fraction(i) for i in range(4))).passed
    s = make_action("so3_angular_momentum", 5)
    e = tuple(Fraction(v) for v in (1, 0, 0, 0, 1, 0))
    assert check_duality(s, e).passed
    # equivariance fails where tau is nonzero
    w = make_action("weak_only", 5)
    rep = check_duality(w, (Fraction(1), Fraction(2)))
    assert rep.statuses == ["pass", "pass", "fail"]
    with pytest.raises(UnsupportedForm):
        check_duality(make_action("rotation_sphere", 5), (0, 0, 1))


def test_duality_warns_on_imprecise_zero():
    r = make_action("rotation_plane", 5)
    with pytest.warns(RankDeficiencyWarning):
        check_duality(r, (P(1, 5), Z(5)))


def test_report_json_schema():
    a = make_action("rotation_plane", 5)
    rep = run_check(a, "hamilton", SuiteConfig(samples=4))
    obj = json.loads(json.dumps(rep.to_json()))
    assert set(obj) == {"check", "action", "p", "samples", "min_discrepancy_valuation",
                        "threshold", "verdict", "witnesses"}
    assert obj["verdict"] in ("pass", "fail", "indeterminate")
    assert obj["threshold"] == 2 and obj["p"] == 5 and obj["samples"] == 4


def test_deterministic_under_seed():
    a = make_action("weak_only", 3)
    cfg = SuiteConfig(samples=8, seed=5)
    one = [r.to_json() for r in run_all(a, cfg)[0].values()]
    two = [r.to_json() for r in run_all(a, cfg)[0].values()]
    cfg.workers = 4
    three = [r.to_json() for r in run_all(a, cfg)[0].values()]
    assert one == two == three


def test_classification_matches_flags():
    for name in ("translation", "weak_only", "digit_counterexample", "piecewise"):
        a = make_action(name, 5)
        reports, cls = run_all(a, SuiteConfig(samples=16))
        assert cls["matches_flags"], (name, cls)
    reports, cls = run_all(make_action("rotation_plane", 5), SuiteConfig(samples=16))
    assert cls["observed"]["hamiltonian"] and not cls["observed"]["strictly_hamiltonian"]
    reports, cls = run_all(make_action("rotation_plane", 7), SuiteConfig(samples=16))
    assert cls["observed"]["strictly_hamiltonian"]


def test_reparam_hamilton_against_a_mu():
    a = rotation_pair_reparam(5, ((2, 1), (1, 1)))
    assert run_check(a, "hamilton", SuiteConfig(samples=12)).passed
    # the base momentum map is wrong for the reparametrized action
    bad = check_hamilton(a, sample_points(a, 12), momentum=a.base.momentum)
    assert bad.verdict == "fail"


def test_indeterminate_on_exhausted_precision():
    a = make_action("rotation_plane", 5)
    pts = [(P(1, 5, 3), P(2, 5, 3))]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = check_hamilton(a, pts, k=6, guard=1)
    assert rep.verdict == "indeterminate"
