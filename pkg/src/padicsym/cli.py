"""Command-line front end: ``python -m padicsym --p 5 eval "sqrt(-1)"``.

Exit codes: 0 pass, 1 fail, 2 indeterminate (``check``); 3 for input,
domain and precision errors; argparse's own usage errors also exit 2.
"""

import argparse
import ast
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .actions import ALIASES, REGISTRY, make_action, parse_plan
from .digits import digit_reverse, floor_frac, residue_window
from .errors import DivisionByZero, PadicError, PadicSyntaxError, UnsupportedAction, UnsupportedForm
from .groups import (
    AdditiveGroup,
    CirclePoint,
    CompactTorusGroup,
    SO3Element,
    SO3Group,
    cayley,
    circle_decompose,
    circle_point,
    so3_element,
    sqrt_minus_one,
)
from .padic import INFTY, Padic, check_prime, ord_p
from .series import analytic_fn, hensel_sqrt
from .verifier import CORE_CHECKS, FAIL, INDETERMINATE, SuiteConfig, classify, run_check

EXIT_PASS, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_ERROR = 0, 1, 2, 3
CHECKS = ("hamilton", "isotropy", "invariance", "symplectic", "gauge", "duality", "tau", "strict", "all")


@dataclass
class SessionConfig:
    p: int = 3
    prec: int = 32
    seed: int = 0
    json: bool = False
    guard: int = 4
    samples: int = 64
    step_k: int = 6

    def __post_init__(self):
        check_prime(self.p)
        if not self.prec > self.guard >= 0:
            raise ValueError(f"need prec > guard >= 0, got prec={self.prec}, guard={self.guard}")

    def suite(self):
        return SuiteConfig(samples=self.samples, k=self.step_k, guard=self.guard, prec=self.prec, seed=self.seed)


# -- expressions ------------------------------------------------------------------
#
# Values stay exact (int / Fraction) until a function needs p-adic digits or an
# O(p^N) term caps them; then they become Padic at the session precision.


class _BigO:
    def __init__(self, absprec):
        self.absprec = absprec


class Evaluator:
    FUNCTIONS = ("sqrt", "cos", "sin", "exp", "log", "ord", "floor", "frac", "rev", "f", "O")

    def __init__(self, p, prec):
        self.p, self.prec = p, prec

    def padic(self, x):
        if isinstance(x, Padic):
            return x
        if isinstance(x, _BigO):
            return Padic.zero(self.p, x.absprec)
        x = Fraction(x)
        return Padic.from_rational(x, self.p, prec=self.prec) if x else Padic.zero(self.p, self.prec)

    def evaluate(self, text):
        self.text = text
        # "^" becomes "**"; offsets maps positions in the rewritten string back.
        src, self.offsets = [], []
        for i, ch in enumerate(text):
            if ch == "^":
                src.append("**")
                self.offsets.extend([i, i])
            else:
                src.append(ch)
                self.offsets.append(i)
        try:
            tree = ast.parse("".join(src).strip(), mode="eval")
        except SyntaxError as exc:
            raise PadicSyntaxError(f"cannot parse expression: {exc.msg}", text, self._pos(exc.offset - 1)) from None
        value = self._eval(tree.body)
        if isinstance(value, _BigO):
            return Padic.zero(self.p, value.absprec)
        return value

    def _pos(self, col):
        lead = len(self.text) - len(self.text.lstrip())
        col = max(col, 0) + lead
        return self.offsets[col] if col < len(self.offsets) else len(self.text)

    def _fail(self, node, msg):
        raise PadicSyntaxError(msg, self.text, self._pos(getattr(node, "col_offset", 0)))

    def _eval(self, node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                self._fail(node, f"unsupported literal {node.value!r}")
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id == "i":
                return sqrt_minus_one(self.p, self.prec)
            if node.id == "p":
                return Fraction(self.p)
            self._fail(node, f"unknown name {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self._eval(node.operand)
            if isinstance(v, _BigO):
                return v
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            return self._binop(node)
        if isinstance(node, ast.Call):
            return self._call(node)
        if isinstance(node, ast.Tuple):
            self._fail(node, "tuples are only allowed as points")
        self._fail(node, "unsupported expression")

    def _plain(self, node):
        v = self._eval(node)
        if isinstance(v, _Ord):
            if v.value is None:
                self._fail(node, "ord of zero is not a number")
            return Fraction(v.value)
        return v

    def _binop(self, node):
        a, b = self._plain(node.left), self._plain(node.right)
        op = node.op
        if isinstance(a, _BigO) or isinstance(b, _BigO):
            if not isinstance(op, (ast.Add, ast.Sub)):
                self._fail(node, "O(...) can only be added")
            if isinstance(a, _BigO) and isinstance(b, _BigO):
                return _BigO(min(a.absprec, b.absprec))
            x, o = (b, a) if isinstance(a, _BigO) else (a, b)
            if isinstance(a, _BigO) and isinstance(op, ast.Sub):
                x = -x
            return self._cap(x, o.absprec)
        if isinstance(op, ast.Add):
            return a + b
        if isinstance(op, ast.Sub):
            return a - b
        if isinstance(op, ast.Mult):
            return a * b
        if isinstance(op, ast.Div):
            if not isinstance(b, Padic) and b == 0:
                raise DivisionByZero("division by zero")
            if isinstance(a, Padic) or isinstance(b, Padic):
                return self.padic(a) / b
            return Fraction(a) / b
        if isinstance(op, ast.Pow):
            if isinstance(b, Padic) or Fraction(b).denominator != 1:
                self._fail(node.right, "exponent must be an integer")
            e = int(b)
            if not isinstance(a, Padic) and a == 0 and e < 0:
                raise DivisionByZero("zero to a negative power")
            return a**e
        self._fail(node, "unsupported operator")

    def _cap(self, x, absprec):
        if isinstance(x, Padic):
            return x.with_absprec(min(absprec, x.absprec))
        x = Fraction(x)
        if x == 0:
            return Padic.zero(self.p, absprec)
        return Padic.from_rational(x, self.p, absprec=absprec)

    def _call(self, node):
        if not isinstance(node.func, ast.Name) or node.func.id not in self.FUNCTIONS:
            self._fail(node, "unknown function")
        name = node.func.id
        if name == "O":
            return self._bigo(node)
        want = 2 if name in ("rev", "f") else 1
        if len(node.args) != want or node.keywords:
            self._fail(node, f"{name} takes {want} argument{'s' if want > 1 else ''}")
        args = [self._plain(a) for a in node.args]
        if any(isinstance(a, _BigO) for a in args):
            self._fail(node, f"{name} of a bare O(...) term")
        x = args[-1]
        if name == "sqrt":
            return hensel_sqrt(self.padic(x))
        if name in ("cos", "sin", "exp", "log"):
            return analytic_fn(name, self.padic(x))
        if name == "ord":
            if isinstance(x, Padic):
                if x.v == INFTY:
                    return _Ord(None, x.absprec)
                return _Ord(x.v)
            return _Ord(None if x == 0 else ord_p(Fraction(x), self.p))
        if name == "floor":
            return floor_frac(x, self.p)[0]
        if name == "frac":
            return floor_frac(x, self.p)[1].value()
        n = args[0]
        if isinstance(n, Padic) or Fraction(n).denominator != 1 or n < 0:
            self._fail(node.args[0], "window must be a non-negative integer")
        w = residue_window(x, int(n), self.p)
        return Fraction(w if name == "f" else digit_reverse(w, int(n), self.p))

    def _bigo(self, node):
        bad = "O(...) takes p^N"
        if len(node.args) != 1:
            self._fail(node, bad)
        arg = node.args[0]
        if isinstance(arg, ast.Constant) and arg.value == self.p:
            return _BigO(1)
        if not (isinstance(arg, ast.BinOp) and isinstance(arg.op, ast.Pow)):
            self._fail(arg, bad)
        base, exp = self._eval(arg.left), self._eval(arg.right)
        if base != self.p:
            self._fail(arg, f"O-term base {base} is not the prime {self.p}")
        if Fraction(exp).denominator != 1:
            self._fail(arg.right, bad)
        return _BigO(int(exp))


class _Ord:
    """ord(x) is an integer, not a p-adic number; printed as such."""

    def __init__(self, value, bound=None):
        self.value, self.bound = value, bound

    def __str__(self):
        if self.value is None:
            return "inf" if self.bound is None else f">= {self.bound}"
        return str(self.value)

    def to_json(self):
        if self.value is None:
            return {"ord": "inf" if self.bound is None else {"at_least": self.bound}}
        return {"ord": self.value}


def parse_tuple(text, ev):
    """"(a, b)" or "((a, b), (c, d))" -> nested tuples of values; a bare expression -> value."""
    src = text.replace("^", "**").strip()
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise PadicSyntaxError(f"cannot parse: {exc.msg}", text, max((exc.offset or 1) - 1, 0)) from None

    def walk(node):
        if isinstance(node, (ast.Tuple, ast.List)):
            return tuple(walk(e) for e in node.elts)
        return ev.evaluate(ast.get_source_segment(src, node).replace("**", "^"))

    return walk(tree.body)


def _flatten(v):
    return v if isinstance(v, tuple) else (v,)


def to_group_element(action, g, ev):
    grp = action.group
    if isinstance(grp, AdditiveGroup):
        # exact rationals stay exact: the digit action reads their digits directly
        return _flatten(g)
    if isinstance(grp, CompactTorusGroup):
        pairs = (g,) if len(g) == 2 and not isinstance(g[0], tuple) else g
        if len(pairs) != grp.k or any(not isinstance(c, tuple) or len(c) != 2 for c in pairs):
            raise PadicSyntaxError(f"{action.name} needs {grp.k} circle point(s) (a, b)", str(g), 0)
        return tuple(circle_point(ev.padic(a), ev.padic(b)) for a, b in pairs)
    if isinstance(grp, SO3Group):
        if len(g) == 3 and not isinstance(g[0], tuple):
            return SO3Element(cayley(tuple(ev.padic(x) for x in g)))
        return so3_element([[ev.padic(x) for x in row] for row in g])
    raise UnsupportedAction(f"cannot parse group elements of {grp.name}")


def _fmt(v):
    if isinstance(v, tuple):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    if isinstance(v, CirclePoint):
        return f"({v.a}, {v.b})"
    return str(v)


def _jsonify(v):
    if isinstance(v, tuple):
        return [_jsonify(x) for x in v]
    if hasattr(v, "to_json"):
        return v.to_json()
    return str(v)


# -- commands -----------------------------------------------------------------------


def cmd_eval(cfg, args, out):
    ev = Evaluator(cfg.p, cfg.prec)
    value = ev.evaluate(args.expr)
    if not isinstance(value, (Padic, _Ord)):
        value = ev.padic(value)
    if cfg.json:
        out(json.dumps(value.to_json()))
    else:
        out(str(value))
    return EXIT_PASS


def cmd_act(cfg, args, out):
    action = make_action(args.action, cfg.p)
    ev = Evaluator(cfg.p, cfg.prec)
    g = to_group_element(action, parse_tuple(args.g, ev), ev)
    m = tuple(ev.padic(x) for x in _flatten(parse_tuple(args.m, ev)))
    img = action.act(g, m)
    if cfg.json:
        out(json.dumps({"action": action.name, "image": _jsonify(tuple(img))}))
    else:
        out(_fmt(tuple(img)))
    return EXIT_PASS


def _exit_code(reports):
    verdicts = [r.verdict for r in reports]
    if FAIL in verdicts:
        return EXIT_FAIL
    if INDETERMINATE in verdicts:
        return EXIT_INDETERMINATE
    return EXIT_PASS


def cmd_check(cfg, args, out):
    action = make_action(args.action, cfg.p)
    suite = cfg.suite()
    if args.which != "all":
        rep = run_check(action, args.which, suite)
        out(json.dumps(rep.to_json(), sort_keys=True) if cfg.json else rep.summary())
        return _exit_code([rep])
    reports, skipped = {}, {}
    for name in CORE_CHECKS + ("gauge", "duality"):
        try:
            reports[name] = run_check(action, name, suite)
        except (UnsupportedAction, UnsupportedForm) as exc:
            skipped[name] = str(exc)
    code = _exit_code(reports.values())
    if reports["hamilton"].passed and reports["invariance"].passed:
        try:
            reports["strict"] = run_check(action, "strict", suite)
        except UnsupportedAction as exc:
            skipped["strict"] = str(exc)
    cls = classify(action, reports)
    if cfg.json:
        out(json.dumps({"reports": {k: r.to_json() for k, r in reports.items()},
                        "skipped": skipped, "classification": cls}, sort_keys=True))
        return code
    for r in reports.values():
        out(r.summary())
    for name, why in skipped.items():
        out(f"{name:<10} skipped       {why}")
    out(f"classification: {cls['label']}")
    for key in cls["observed"]:
        exp = cls["expected"][key]
        out(f"  {key:<22} observed {str(cls['observed'][key]):<6} expected {'n/a' if exp is None else exp}")
    out(f"matches catalog flags: {cls['matches_flags']}")
    return code


def cmd_orbit(cfg, args, out):
    action = make_action(args.action, cfg.p)
    if not hasattr(action, "orbit_witness"):
        raise UnsupportedAction(f"{action.name} does not answer orbit queries")
    ev = Evaluator(cfg.p, cfg.prec)
    m1 = _flatten(parse_tuple(args.m1, ev))
    m2 = _flatten(parse_tuple(args.m2, ev))
    exact = action.name == "digit_counterexample" and not any(isinstance(x, Padic) for x in m1 + m2)
    if not exact:
        m1 = tuple(ev.padic(x) for x in m1)
        m2 = tuple(ev.padic(x) for x in m2)
    res = action.orbit_witness(m1, m2)
    status = {"related": "Related", "not_related": "NotRelated", "indeterminate": "Indeterminate"}[res.status]
    if cfg.json:
        out(json.dumps({"status": status, "witness": None if res.witness is None else _jsonify(res.witness),
                        "n": res.n}))
    elif res.status == "related":
        out(f"Related: g = {_fmt(res.witness)}" + (f" (window n = {res.n})" if res.n is not None else ""))
    elif res.status == "indeterminate":
        out(f"Indeterminate: digits differ at the precision boundary (position {res.n})")
    else:
        out("NotRelated")
    return {"related": EXIT_PASS, "not_related": EXIT_FAIL, "indeterminate": EXIT_INDETERMINATE}[res.status]


def cmd_decompose(cfg, args, out):
    ev = Evaluator(cfg.p, cfg.prec)
    a, b = parse_tuple(args.point, ev)
    g = circle_point(ev.padic(a), ev.padic(b))
    f = circle_decompose(g)
    if cfg.json:
        out(json.dumps(f.to_json()))
    else:
        out(f"bar = {f.bar} (mod {f.modulus}), t = {f.t}, hat = {f.hat}")
    return EXIT_PASS


def cmd_toric(cfg, args, out):
    action = make_action("toric", cfg.p, n=args.n, plan=parse_plan(args.plan))
    c = action.census()
    if cfg.json:
        out(json.dumps(c))
    else:
        out(f"balls: {c['balls']}")
        out(f"fixed points: {c['fixed_points']} = {c['trail']}")
    return EXIT_PASS


def cmd_list(cfg, args, out):
    names = list(REGISTRY) + ["rotation_pair_reparam"]
    entries = [make_action(n, cfg.p).to_json() for n in names]
    if cfg.json:
        out(json.dumps(entries, sort_keys=True))
        return EXIT_PASS
    for e in entries:
        flags = ", ".join(k for k, v in e["flags"].items() if v)
        out(f"{e['name']:<26} {e['group']:<12} on {e['space']}  [{flags}]")
    out("aliases: " + ", ".join(f"{a} -> {t}" for a, t in ALIASES.items()))
    return EXIT_PASS


COMMANDS = {"eval": cmd_eval, "act": cmd_act, "check": cmd_check, "orbit": cmd_orbit,
            "decompose": cmd_decompose, "toric": cmd_toric, "list": cmd_list}


def build_parser():
    ap = argparse.ArgumentParser(prog="padicsym", description="p-adic symplectic actions and momentum maps")
    ap.add_argument("--p", type=int, default=3, help="the prime (default 3)")
    ap.add_argument("--prec", type=int, default=32, help="default relative precision in digits")
    ap.add_argument("--guard", type=int, default=4, help="guard digits for finite differences")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--samples", type=int, default=64)
    ap.add_argument("--step-k", type=int, default=6, help="difference quotient step p^k")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="evaluate an expression")
    s.add_argument("expr")
    s = sub.add_parser("act", help="apply a catalog action")
    s.add_argument("action")
    s.add_argument("--g", required=True)
    s.add_argument("--m", required=True)
    s = sub.add_parser("check", help="run verifier checks")
    s.add_argument("action")
    s.add_argument("--which", choices=CHECKS, default="all")
    s = sub.add_parser("orbit", help="decide whether two points share an orbit")
    s.add_argument("action")
    s.add_argument("m1")
    s.add_argument("m2")
    s = sub.add_parser("decompose", help="split a circle point into torsion and principal parts")
    s.add_argument("point")
    s = sub.add_parser("toric", help="fixed-point census of a toric subdivision plan")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--plan", default="[]")
    sub.add_parser("list", help="list catalog actions")
    return ap


def main(argv=None, out=print, err=None):
    err = err or (lambda s: print(s, file=sys.stderr))
    args = build_parser().parse_args(argv)
    try:
        cfg = SessionConfig(p=args.p, prec=args.prec, seed=args.seed, json=args.json,
                            guard=args.guard, samples=args.samples, step_k=args.step_k)
        return COMMANDS[args.command](cfg, args, out)
    except PadicSyntaxError as exc:
        err(f"error: {type(exc).__name__}: {exc}")
        if exc.text is not None:
            err(f"  {exc.text}")
            err("  " + " " * (exc.position or 0) + "^")
        return EXIT_ERROR
    except (PadicError, ValueError) as exc:
        err(f"error: {type(exc).__name__}: {exc}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
