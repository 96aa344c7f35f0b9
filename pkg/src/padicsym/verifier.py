"""Sample-based verification of the defining equations of symplectic actions.

Derivatives are difference quotients with step p^k; a comparison passes when
the discrepancy valuation reaches the threshold (k - guard for derivatives).
A difference that cancels to an imprecise zero below the threshold means the
digits ran out, which makes the sample indeterminate rather than failed.
"""

import random
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import Matrix

from .errors import (
    IndeterminateCase,
    InsufficientPrecision,
    RankDeficiencyWarning,
    UnsupportedAction,
    UnsupportedForm,
)
from .groups import cross
from .polynomial import closedness_defects
from .padic import INFTY, Padic, ord_p

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate"


@dataclass
class CheckReport:
    check: str
    action: str
    p: int
    samples: int
    threshold: int
    discrepancies: list = field(default_factory=list)
    statuses: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def verdict(self):
        if FAIL in self.statuses:
            return FAIL
        if INDETERMINATE in self.statuses:
            return INDETERMINATE
        return PASS

    @property
    def passed(self):
        return self.verdict == PASS

    @property
    def min_discrepancy_valuation(self):
        return min(self.discrepancies, default=INFTY)

    def add(self, val, status, witness=None):
        self.discrepancies.append(val)
        self.statuses.append(status)
        if status != PASS and witness is not None:
            self.witnesses.append(witness)

    def to_json(self):
        mdv = self.min_discrepancy_valuation
        return {
            "check": self.check,
            "action": self.action,
            "p": self.p,
            "samples": self.samples,
            "min_discrepancy_valuation": "inf" if mdv == INFTY else mdv,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "witnesses": [_json(w) for w in self.witnesses[:8]],
        }

    def summary(self):
        mdv = self.min_discrepancy_valuation
        line = (f"{self.check:<10} {self.verdict:<13} min discrepancy valuation "
                f"{'inf' if mdv == INFTY else mdv} (threshold {self.threshold}, {self.samples} samples)")
        if self.witnesses:
            line += f"\n  witness: {_json(self.witnesses[0])}"
        return line


def _json(obj):
    if isinstance(obj, Padic):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float) and obj == INFTY:
        return "inf"
    if isinstance(obj, dict):
        return {k: _json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


# -- grading ------------------------------------------------------------------


def grade(x, y, threshold, p=None):
    """(discrepancy valuation of x - y, status)."""
    d = x - y
    if isinstance(d, Padic):
        if d.v != INFTY:
            return d.v, PASS if d.v >= threshold else FAIL
        return d.absprec, PASS if d.absprec >= threshold else INDETERMINATE
    d = Fraction(d)
    if d == 0:
        return INFTY, PASS
    v = ord_p(d, p) if p else -INFTY
    return v, PASS if v >= threshold else FAIL


def _grade_vec(xs, ys, threshold):
    worst_val, worst = INFTY, PASS
    order = {PASS: 0, INDETERMINATE: 1, FAIL: 2}
    for x, y in zip(xs, ys):
        v, s = grade(x, y, threshold)
        worst_val = min(worst_val, v)
        if order[s] > order[worst]:
            worst = s
    return worst_val, worst


def _map(fn, items, workers):
    """Ordered map, optionally on a thread pool; results keep sample order."""
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# -- derivatives ----------------------------------------------------------------


def _step(m, v, k):
    return tuple(x + w.shift(k) if isinstance(w, Padic) else x + w * Fraction(x.p) ** k
                 for x, w in zip(m, v))


def _quotient(f, m, v, k):
    return (f(_step(m, v, k)) - f(m)).shift(-k)


@dataclass
class Derivative:
    value: Padic
    exact: object = None  # gradient pairing for polynomial f


def directional_derivative(f, m, v, k, guard=4):
    """(f(m + p^k v) - f(m)) / p^k, with absolute precision capped at k - guard.

    When f is a PolyObservable the exact pairing grad f . v is returned too.
    """
    if k < 1:
        raise ValueError("step valuation k must be at least 1")
    val = _quotient(f, m, v, k)
    if not isinstance(val, Padic):
        val = Padic.from_rational(val, m[0].p, absprec=k - guard)
    exact = None
    if hasattr(f, "gradient"):
        grad = f.gradient()
        exact = sum((g(m) * w for g, w in zip(grad, v)), 0 * m[0])
    return Derivative(val.with_absprec(k - guard), exact)


def numeric_generator(action, xi, m, k):
    """(act(embed(p^k xi), m) - m) / p^k."""
    g = action.group.embed(xi, k)
    img = action.act(g, m)
    return tuple((a - b).shift(-k) for a, b in zip(img, m))


def _mu_component(action, i, momentum=None):
    mom = momentum or action.momentum
    return lambda m: mom(m)[i]


# -- checks ---------------------------------------------------------------------


def sample_points(action, count, seed=0, prec=32):
    rng = random.Random(seed)
    return [action.sample_point(rng, prec) for _ in range(count)]


def sample_group(action, count, seed=0, prec=32):
    rng = random.Random(seed + 7919)
    return [action.sample_group(rng, prec) for _ in range(count)]


def check_hamilton(action, samples, k=6, guard=4, momentum=None, workers=None):
    """omega(X_xi, v) = d mu_xi(v) for basis xi and tangent directions v.

    X_xi is the difference-quotient generator; it is also compared with the
    closed-form generator of the catalog.
    """
    threshold = k - guard
    rep = CheckReport("hamilton", action.name, action.p, len(samples), threshold)
    basis = action.basis()
    mus = [_mu_component(action, i, momentum) for i in range(action.k)]

    def one(item):
        idx, m = item
        out = []
        try:
            tangents = action.space.tangent_basis(m)
            for i, xi in enumerate(basis):
                X = numeric_generator(action, xi, m, k)
                val, st = _grade_vec(X, action.generator(xi, m), threshold)
                out.append((val, st, {"sample": idx, "xi": i, "generator_mismatch": True}))
                for j, v in enumerate(tangents):
                    lhs = _quotient(mus[i], m, v, k)
                    rhs = action.form.omega(m, X, v)
                    val, st = grade(lhs, rhs, threshold)
                    out.append((val, st, {"sample": idx, "xi": i, "direction": j,
                                          "dmu": lhs, "omega": rhs}))
        except (InsufficientPrecision, IndeterminateCase) as exc:
            out.append((-INFTY, INDETERMINATE, {"sample": idx, "error": str(exc)}))
        return out

    for res in _map(one, list(enumerate(samples)), workers):
        for val, st, w in res:
            rep.add(val, st, w)
    return rep


def check_isotropy(action, samples, k=6, guard=4, workers=None):
    """omega(X_xi_i, X_xi_j) = 0 for all basis pairs."""
    threshold = k - guard
    rep = CheckReport("isotropy", action.name, action.p, len(samples), threshold)
    basis = action.basis()
    values = []

    def one(item):
        idx, m = item
        out = []
        try:
            X = [numeric_generator(action, xi, m, k) for xi in basis]
            for i in range(len(X)):
                for j in range(i + 1, len(X)):
                    w = action.form.omega(m, X[i], X[j])
                    val, st = grade(w, 0, threshold)
                    out.append((val, st, {"sample": idx, "pair": [i, j], "value": w}, w))
        except (InsufficientPrecision, IndeterminateCase) as exc:
            out.append((-INFTY, INDETERMINATE, {"sample": idx, "error": str(exc)}, None))
        return out

    for res in _map(one, list(enumerate(samples)), workers):
        for val, st, w, value in res:
            rep.add(val, st, w)
            if value is not None and st == FAIL:
                values.append(value)
    if not rep.statuses:
        rep.add(INFTY, PASS)  # one-dimensional group: nothing to pair
    rep.values["nonzero_values"] = values
    return rep


def check_orbit_invariance(action, samples, group_samples, guard=4, prec=32, workers=None):
    """mu(act(g, m)) = Ad*_g mu(m); known witnesses are tried first."""
    threshold = prec - 2 * guard
    rep = CheckReport("invariance", action.name, action.p, 0, threshold)
    try:
        special = action.special_witnesses(prec, guard)
    except TypeError:
        special = action.special_witnesses(prec)
    pairs = list(special) + list(zip(group_samples, samples))
    rep.samples = len(pairs)

    def one(item):
        idx, (g, m) = item
        try:
            lhs = action.momentum(action.act(g, m))
            rhs = action.group.coadjoint(g, action.momentum(m))
            val, st = _grade_vec(lhs, rhs, threshold)
            return val, st, {"sample": idx, "g": g, "m": m, "mu_before": action.momentum(m), "mu_after": lhs}
        except (InsufficientPrecision, IndeterminateCase) as exc:
            return -INFTY, INDETERMINATE, {"sample": idx, "error": str(exc)}

    for val, st, w in _map(one, list(enumerate(pairs)), workers):
        rep.add(val, st, w)
    return rep


def check_pullback_symplectic(action, g, samples, k=6, guard=4, workers=None):
    """psi(g, .)^* omega = omega via the numeric Jacobian on tangent basis vectors."""
    threshold = k - guard
    rep = CheckReport("symplectic", action.name, action.p, len(samples), threshold)

    def one(item):
        idx, m = item
        out = []
        try:
            img = action.act(g, m)
            tangents = action.space.tangent_basis(m)
            pushed = []
            for u in tangents:
                moved = action.act(g, _step(m, u, k))
                pushed.append(tuple((a - b).shift(-k) for a, b in zip(moved, img)))
            for a in range(len(tangents)):
                for b in range(a + 1, len(tangents)):
                    lhs = action.form.omega(img, pushed[a], pushed[b])
                    rhs = action.form.omega(m, tangents[a], tangents[b])
                    val, st = grade(lhs, rhs, threshold)
                    out.append((val, st, {"sample": idx, "pair": [a, b]}))
        except (InsufficientPrecision, IndeterminateCase) as exc:
            out.append((-INFTY, INDETERMINATE, {"sample": idx, "error": str(exc)}))
        return out

    for res in _map(one, list(enumerate(samples)), workers):
        for val, st, w in res:
            rep.add(val, st, w)
    return rep


def cocycle_tau(action, xi, eta, samples, k=6, guard=4, workers=None):
    """tau(xi, eta) = {mu_xi, mu_eta} - mu_[xi, eta] with {f, g} = df(X_g).

    Local constancy is tested by re-evaluating at m + p^k v for each tangent
    basis vector v; ``values["tau"]`` lists the value at every sample.
    """
    threshold = k - guard
    rep = CheckReport("tau", action.name, action.p, len(samples), threshold)
    bracket = action.group.bracket(xi, eta)

    def mu_xi(m):
        return action.momentum_along(xi, m)

    def tau_at(m):
        X = numeric_generator(action, eta, m, k)
        return _quotient(mu_xi, m, X, k) - action.momentum_along(bracket, m)

    def one(item):
        idx, m = item
        try:
            t0 = tau_at(m)
            out = [t0]
            for v in action.space.tangent_basis(m)[:2]:
                t1 = tau_at(_step(m, v, k))
                val, st = grade(t0, t1, threshold)
                out.append((val, st, {"sample": idx, "tau": t0, "nearby": t1}))
            return out
        except (InsufficientPrecision, IndeterminateCase) as exc:
            return [None, (-INFTY, INDETERMINATE, {"sample": idx, "error": str(exc)})]

    taus = []
    for res in _map(one, list(enumerate(samples)), workers):
        taus.append(res[0])
        for val, st, w in res[1:]:
            rep.add(val, st, w)
    rep.values["tau"] = taus
    rep.values["radius"] = f"{action.p}^-{k}"
    return rep


def tau_constants(report, digits):
    """Distinct tau values known to ``digits`` absolute digits."""
    out = []
    for t in report.values.get("tau", []):
        if t is None:
            continue
        t = t.with_absprec(digits)
        if not any(t == u for u in out):
            out.append(t)
    return out


def check_gauge(action, mu2, samples, k=6, guard=4, mu1=None, workers=None):
    """mu1 - mu2 has zero differential; reports the locally constant offsets."""
    threshold = k - guard
    mu1 = mu1 or action.momentum
    rep = CheckReport("gauge", action.name, action.p, len(samples), threshold)

    def diff(m):
        return tuple(b - a for a, b in zip(mu1(m), mu2(m)))

    def one(item):
        idx, m = item
        out = []
        base = diff(m)
        for j, v in enumerate(action.space.tangent_basis(m)):
            moved = diff(_step(m, v, k))
            for c, (a, b) in enumerate(zip(base, moved)):
                val, st = grade((b - a).shift(-k), 0, threshold)
                out.append((val, st, {"sample": idx, "direction": j, "component": c}))
        return base, out

    offsets = []
    for base, res in _map(one, list(enumerate(samples)), workers):
        for val, st, w in res:
            rep.add(val, st, w)
        if not any(all(a == b for a, b in zip(base, o)) for o in offsets):
            offsets.append(base)
    rep.values["offsets"] = offsets
    return rep


def check_closed(alpha, p=None):
    """d_i alpha_j = d_j alpha_i for every pair, compared symbolically (exact)."""
    n = alpha.nvars
    rep = CheckReport("closed", "1-form", p, n * (n - 1) // 2, 0)
    bad = {(i, j): d for i, j, d in closedness_defects(alpha)}
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in bad:
                rep.add(0, FAIL, {"pair": [i, j], "defect": repr(bad[i, j])})
            else:
                rep.add(INFTY, PASS)
    return rep


def check_duality(action, m):
    """The pointwise duality identities by exact linear algebra at the rational point m.

    (1) T_m mu = L_m^T Omega (the adjoint identity T_m mu^* = I_m L_m);
    (2) (ker T_m mu)^omega = im L_m;
    (3) T_m mu (L_m xi) = -ad(xi)^* mu(m).

    (1) and (2) hold for every momentum map; (3) is equivariance and fails
    exactly when the cocycle tau is nonzero (weak_only, for instance).
    """
    if action.form.has_sphere:
        raise UnsupportedForm("duality is checked on flat phase spaces")
    if action.momentum_polys is None:
        raise UnsupportedAction(f"{action.name} has no polynomial momentum map")
    if any(isinstance(x, Padic) and x.is_zero() for x in m):
        warnings.warn("imprecise zero coordinate: rank certified at its representative 0",
                      RankDeficiencyWarning, stacklevel=2)
    mq = tuple(x.to_rational() if isinstance(x, Padic) else Fraction(x) for x in m)
    n, k = action.dim, action.k
    T = Matrix([[g(mq) for g in f.gradient()] for f in action.momentum_polys])
    basis = [tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k)]
    L = Matrix.hstack(*[Matrix(action.generator(xi, mq)) for xi in basis]) if k else Matrix.zeros(n, 0)
    Om = Matrix(action.form.matrix(mq))
    rep = CheckReport("duality", action.name, action.p, 1, 0)
    ok1 = (T - L.T * Om).is_zero_matrix
    rep.add(INFTY if ok1 else 0, PASS if ok1 else FAIL, {"identity": "adjoint"})
    K = T.nullspace()
    if K:
        comp = (Om * Matrix.hstack(*K)).T.nullspace()
        C = Matrix.hstack(*comp) if comp else Matrix.zeros(n, 0)
    else:
        C = Matrix.eye(n)
    rank_l, rank_c = L.rank(), C.rank()
    joint = Matrix.hstack(L, C).rank() if C.cols else rank_l
    ok2 = rank_l == rank_c == joint
    rep.add(INFTY if ok2 else 0, PASS if ok2 else FAIL,
            {"identity": "subspaces", "rank_im_L": rank_l, "rank_ker_complement": rank_c})
    mu = [f(mq) for f in action.momentum_polys]
    ok3 = True
    for xi in basis:
        lhs = T * Matrix(action.generator(xi, mq))
        if action.group.abelian:
            rhs = Matrix.zeros(k, 1)
        else:
            # ad(xi)^* mu = mu x xi, the dual of eta -> xi x eta
            rhs = -Matrix(cross(mu, xi))
        ok3 = ok3 and (lhs - rhs).is_zero_matrix
    rep.add(INFTY if ok3 else 0, PASS if ok3 else FAIL, {"identity": "ad_star"})
    rep.values.update({"rank_im_L": rank_l, "dim_ker_T": len(K)})
    return rep


def check_strictness(action, samples, seed=0, prec=32):
    """Points with equal momentum must lie in one orbit; null-cone pairs tried first."""
    if not hasattr(action, "same_level_sample") or not hasattr(action, "orbit_witness"):
        raise UnsupportedAction(f"{action.name} has no orbit test")
    rng = random.Random(seed + 104729)
    rep = CheckReport("strict", action.name, action.p, 0, 0)
    pairs = list(getattr(action, "special_pairs", lambda prec: [])(prec))
    for m in samples:
        m2 = action.same_level_sample(m, rng, prec)
        if m2 is not None:
            pairs.append((m, m2))
    rep.samples = len(pairs)
    for idx, (m1, m2) in enumerate(pairs):
        try:
            res = action.orbit_witness(m1, m2)
        except (InsufficientPrecision, IndeterminateCase) as exc:
            rep.add(-INFTY, INDETERMINATE, {"pair": idx, "error": str(exc)})
            continue
        if res.status == "related":
            rep.add(INFTY, PASS)
        elif res.status == "not_related":
            rep.add(0, FAIL, {"pair": idx, "m1": m1, "m2": m2, "result": "NotRelated"})
        else:
            rep.add(-INFTY, INDETERMINATE, {"pair": idx, "blocking_position": res.n})
    return rep


# -- suites ---------------------------------------------------------------------


@dataclass
class SuiteConfig:
    samples: int = 64
    k: int = 6
    guard: int = 4
    prec: int = 32
    seed: int = 0
    workers: int = None


def run_check(action, which, cfg=None):
    cfg = cfg or SuiteConfig()
    pts = sample_points(action, cfg.samples, cfg.seed, cfg.prec)
    if which == "hamilton":
        return check_hamilton(action, pts, cfg.k, cfg.guard, workers=cfg.workers)
    if which == "isotropy":
        return check_isotropy(action, pts, cfg.k, cfg.guard, workers=cfg.workers)
    if which == "invariance":
        gs = sample_group(action, cfg.samples, cfg.seed, cfg.prec)
        return check_orbit_invariance(action, pts, gs, cfg.guard, cfg.prec, workers=cfg.workers)
    if which == "symplectic":
        g = sample_group(action, 1, cfg.seed, cfg.prec)[0]
        return check_pullback_symplectic(action, g, pts, cfg.k, cfg.guard, workers=cfg.workers)
    if which == "tau":
        basis = action.basis()
        if len(basis) < 2:
            return cocycle_tau(action, basis[0], basis[0], pts, cfg.k, cfg.guard, workers=cfg.workers)
        return cocycle_tau(action, basis[0], basis[1], pts, cfg.k, cfg.guard, workers=cfg.workers)
    if which == "gauge":
        shift = tuple(Padic.from_rational(7, action.p, prec=cfg.prec) for _ in range(action.k))
        mu2 = lambda m: tuple(a + b for a, b in zip(action.momentum(m), shift))  # noqa: E731
        return check_gauge(action, mu2, pts, cfg.k, cfg.guard, workers=cfg.workers)
    if which == "duality":
        rep = CheckReport("duality", action.name, action.p, 0, 0)
        for m in pts[: min(len(pts), 32)]:
            sub = check_duality(action, m)
            rep.samples += 1
            for val, st, w in zip(sub.discrepancies, sub.statuses, sub.witnesses + [None] * 3):
                rep.add(val, st, w)
        return rep
    if which == "strict":
        return check_strictness(action, pts, cfg.seed, cfg.prec)
    raise ValueError(f"unknown check {which!r}")


CORE_CHECKS = ("hamilton", "isotropy", "invariance", "symplectic", "tau")


def run_all(action, cfg=None):
    """Core checks plus the strictness probe where supported; returns (reports, classification)."""
    cfg = cfg or SuiteConfig()
    reports = {name: run_check(action, name, cfg) for name in CORE_CHECKS}
    if reports["hamilton"].passed and reports["invariance"].passed:
        try:
            reports["strict"] = run_check(action, "strict", cfg)
        except UnsupportedAction:
            pass
    return reports, classify(action, reports)


def classify(action, reports):
    weak = reports["hamilton"].passed
    ham = weak and reports["invariance"].passed
    observed = {
        "weakly_hamiltonian": weak,
        "hamiltonian": ham,
        "isotropic": reports["isotropy"].passed,
    }
    if "strict" in reports and ham:
        observed["strictly_hamiltonian"] = reports["strict"].passed
    elif not ham:
        observed["strictly_hamiltonian"] = False
    if ham:
        label = "Hamiltonian candidate (all sampled checks pass)"
    elif weak:
        label = "weakly Hamiltonian (momentum map not orbit-invariant at sampled points)"
    else:
        label = "neither (no momentum map passed Hamilton's equation)"
    expected = {k: action.flags.get(k) for k in observed}
    matches = all(expected[k] is None or expected[k] == observed[k] for k in observed)
    return {"label": label, "observed": observed, "expected": expected, "matches_flags": matches}
