"""Command-line front end: ``eulerops <command> ...``.

Exit codes: 0 success or verified, 1 verification mismatch, 2 usage or
parse error, 3 resonance or degenerate input.
"""

import argparse
import json
import sys

from . import families as fam
from . import identities as ids
from . import ladder as lad
from .errors import (DegenerateIndicialError, MixedDegreeError, ParseError, ResonanceError,
                     ShapeError, UnboundParameter)
from .exact import ASCENDING, DESCENDING, LaurentPoly, XSeries, format_rational, rational
from .operators import commutator
from .parser import parse_diffop
from .solver import check_residual, indicial_roots, normal_separation, solve_operator, solve_series

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_RESONANCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _binding(text):
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), rational(value.strip())
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rat(text):
    try:
        return rational(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rat_list(text):
    return [_rat(t) for t in text.split(",") if t.strip()]


def _n_range(text):
    lo, sep, hi = text.partition(":")
    try:
        return range(int(lo), int(hi) + 1) if sep else range(int(lo), int(lo) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO:HI, got {text!r}") from None


def _add_common(p):
    p.add_argument("--json", action="store_true", help="emit the JSON document")
    p.add_argument("--param", action="append", type=_binding, default=[], metavar="NAME=P/Q",
                   help="bind a free identifier in an operator expression")


def _add_family_params(p, with_n=True):
    if with_n:
        p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=_rat)
    p.add_argument("--beta", type=_rat)
    p.add_argument("--gamma", type=_rat)
    p.add_argument("--a", type=_rat, help="coefficient of cos(x) in the periodic equation")
    p.add_argument("--num", type=_rat_list, help="comma-separated upper pFq parameters")
    p.add_argument("--den", type=_rat_list, help="comma-separated lower pFq parameters")


def build_parser():
    ap = _Parser(prog="eulerops", description="Euler-operator series solutions of linear ODEs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("indicial", help="indicial roots of an operator")
    p.add_argument("--op", required=True)
    p.add_argument("--mode", choices=(ASCENDING, DESCENDING), default=ASCENDING)
    _add_common(p)

    p = sub.add_parser("solve", help="series solutions of an operator or a named family")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--op")
    src.add_argument("--family", choices=sorted(_SOLVE_FAMILIES))
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--root", type=_rat)
    p.add_argument("--mode", choices=(ASCENDING, DESCENDING), default=ASCENDING)
    _add_family_params(p)
    _add_common(p)

    p = sub.add_parser("residual", help="apply an operator to a stored solution")
    p.add_argument("--op", required=True)
    p.add_argument("--solution", required=True, help="JSON file holding a series or solve output")
    p.add_argument("--order", type=int)
    _add_common(p)

    p = sub.add_parser("family", help="construct a family member")
    p.add_argument("name", choices=sorted(_FAMILY_BUILDERS))
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--lam", type=_rat, default=rational(0))
    _add_family_params(p)
    _add_common(p)

    p = sub.add_parser("ladder", help="verify a ladder relation over a range of n")
    p.add_argument("name", choices=sorted(_LADDERS))
    p.add_argument("--n", type=_n_range, default=range(0, 11), metavar="LO:HI")
    p.add_argument("--order", type=int, default=10)
    _add_family_params(p, with_n=False)
    _add_common(p)

    p = sub.add_parser("rodriguez", help="compare a Rodriguez formula with the family")
    p.add_argument("name", choices=("laguerre", "hermite"))
    p.add_argument("--n", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("genfunc", help="compare a generating function with its closed form")
    p.add_argument("name", choices=("laguerre", "laguerre-operator", "chebyshev-u"))
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--nx", type=int, default=None, help="x-degree window for laguerre-operator")
    _add_common(p)

    p = sub.add_parser("commutator", help="canonical form of [A, B]")
    p.add_argument("--op", required=True)
    p.add_argument("--op2", required=True)
    _add_common(p)
    return ap


def _need(args, *names):
    missing = [f"--{k}" for k in names if getattr(args, k) is None]
    if missing:
        raise UsageError("missing " + ", ".join(missing))
    return [getattr(args, k) for k in names]


def _family_spec(name, args):
    if name == "hg2f1":
        a, b, g = _need(args, "alpha", "beta", "gamma")
        return fam.FamilySpec(fam.HG2F1, {"alpha": a, "beta": b, "gamma": g})
    if name == "chg":
        a, g = _need(args, "alpha", "gamma")
        return fam.FamilySpec(fam.CHG, {"alpha": a, "gamma": g})
    if name == "pfq":
        num, den = _need(args, "num", "den")
        return fam.FamilySpec(fam.PFQ, {"num": tuple(num), "den": tuple(den)})
    if name == "laguerre":
        (n,) = _need(args, "n")
        return fam.FamilySpec(fam.LAGUERRE, {"n": n, "alpha": args.alpha or 0},
                              fam.DERIVATIVE_SEEDED)
    if name == "hermite":
        (n,) = _need(args, "n")
        return fam.FamilySpec(fam.HERMITE, {"n": n}, fam.DERIVATIVE_SEEDED)
    if name == "chebyshev-u":
        (n,) = _need(args, "n")
        return fam.FamilySpec(fam.CHEBYSHEV_U, {"n": n}, fam.DERIVATIVE_SEEDED)
    (a,) = _need(args, "a")
    return fam.FamilySpec(fam.PERIODIC_COS, {"a": a, "order": args.order})


_SOLVE_FAMILIES = ("hg2f1", "chg", "pfq", "laguerre", "hermite", "chebyshev-u", "periodic-cos")


def _family_poly(fn, *keys):
    def build(args):
        return fn(*_need(args, *keys)).to_json()
    return build


def _family_series(args, name):
    if name == "hg2f1":
        a, b, g = _need(args, "alpha", "beta", "gamma")
        return fam.hypergeometric_2f1(a, b, g, args.order)
    if name == "chg":
        a, g = _need(args, "alpha", "gamma")
        return fam.confluent_1f1(a, g, args.order)
    if name == "pfq":
        num, den = _need(args, "num", "den")
        return fam.pfq(num, den, args.order)
    (a,) = _need(args, "a")
    return fam.periodic_cos(a, args.lam, args.order)


_FAMILY_BUILDERS = {
    "laguerre": lambda args: fam.laguerre(*_need(args, "n"), args.alpha or 0).to_json(),
    "hermite": _family_poly(fam.hermite, "n"),
    "chebyshev-u": _family_poly(fam.chebyshev_u, "n"),
    "hg2f1": lambda args: _family_series(args, "hg2f1").to_json(),
    "chg": lambda args: _family_series(args, "chg").to_json(),
    "pfq": lambda args: _family_series(args, "pfq").to_json(),
    "periodic-cos": lambda args: _family_series(args, "periodic-cos").to_json(),
}


def _g(args):
    return _need(args, "gamma")[0]


def _ag(args):
    return _need(args, "alpha", "gamma")


_LADDERS = {
    "ch-lowering": lambda a: lad.ch_lowering(_g(a)),
    "ch-raising": lambda a: lad.ch_raising(_g(a)),
    "hg-lowering": lambda a: lad.hg_lowering(*_ag(a)),
    "hg-lowering-monomial": lambda a: lad.hg_lowering_monomial(*_ag(a)),
    "hg-raising": lambda a: lad.hg_raising(*_ag(a)),
    "hg-raising-bar": lambda a: lad.hg_raising_bar(*_ag(a)),
    "hg-raising-monomial": lambda a: lad.hg_raising_monomial(*_ag(a)),
    "hermite-raising": lambda a: lad.hermite_ladder()[0],
    "hermite-lowering": lambda a: lad.hermite_ladder()[1],
    "laguerre-raising": lambda a: lad.laguerre_ladder(a.alpha or 0)[0],
    "laguerre-lowering": lambda a: lad.laguerre_ladder(a.alpha or 0)[1],
    "laguerre-parameter-shift": lambda a: lad.parameter_shift_laguerre(a.alpha or 0),
    "hg-parameter-shift": lambda a: lad.parameter_shift_hg(
        *_need(a, "alpha", "beta", "gamma"), order=a.order),
}


def _emit(args, doc, text):
    if args.json:
        print(json.dumps(doc))
    else:
        print(text)


def _cmd_indicial(args):
    L = parse_diffop(args.op, dict(args.param))
    F, _ = normal_separation(L, args.mode)
    res = indicial_roots(F)
    text = "F(D) = " + str(F) + "\nroots: " + ", ".join(res.to_json()["roots"])
    if res.unresolved_degree:
        text += f"\n(irrational/complex factor of degree {res.unresolved_degree} not resolved)"
    _emit(args, res.to_json(), text)
    return EXIT_OK


def _cmd_solve(args):
    if args.op is not None:
        L = parse_diffop(args.op, dict(args.param))
        reports = solve_operator(L, args.order, args.mode, args.root)
    else:
        spec = _family_spec(args.family, args)
        F, P = spec.separation()
        roots = [args.root] if args.root is not None else spec.roots()
        reports = [solve_series(F, P, r, args.order) for r in roots]
    doc = {"solutions": [dict(r.to_json(), root=format_rational(r.root)) for r in reports]}
    text = "\n".join(f"lambda = {format_rational(r.root)}: {r.solution}" for r in reports)
    _emit(args, doc, text)
    return EXIT_OK


def _load_solution(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "error" in doc:
        raise ValueError(f"{path} does not hold a solution")
    if isinstance(doc, dict) and "solutions" in doc:
        return [XSeries.from_json(s["solution"]) for s in doc["solutions"]]
    if isinstance(doc, dict) and "solution" in doc:
        return [XSeries.from_json(doc["solution"])]
    return [XSeries.from_json(doc)]


def _cmd_residual(args):
    L = parse_diffop(args.op, dict(args.param))
    series = _load_solution(args.solution)
    residuals = [check_residual(L, y, args.order) for y in series]
    ok = all(r.is_zero() for r in residuals)
    doc = {"zero": ok, "residuals": [r.to_json() for r in residuals]}
    _emit(args, doc, "\n".join(str(r) for r in residuals) + ("\nzero" if ok else "\nNONZERO"))
    return EXIT_OK if ok else EXIT_MISMATCH


def _cmd_family(args):
    doc = _FAMILY_BUILDERS[args.name](args)
    if "base_exponent" in doc:
        text = str(XSeries.from_json(doc))
    else:
        text = str(LaurentPoly.from_json(doc))
    _emit(args, doc, text)
    return EXIT_OK


def _cmd_ladder(args):
    rel = _LADDERS[args.name](args)
    rows = rel.verify(args.n)
    ok = all(r["ok"] for r in rows)
    doc = {"relation": rel.name, "ok": ok, "rows": rows}
    lines = [f"{rel.name}"] + [
        f"  n={r['n']:>3}  expected {r['expected']:>10}  measured {str(r['measured']):>10}  "
        + ("ok" if r["ok"] else "MISMATCH") for r in rows]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK if ok else EXIT_MISMATCH


def _cmd_rodriguez(args):
    doc = ids.rodriguez_report(args.name, args.n)
    _emit(args, doc, f"{args.name} n={args.n}: " + ("equal" if doc["equal"] else "MISMATCH"))
    return EXIT_OK if doc["equal"] else EXIT_MISMATCH


def _cmd_genfunc(args):
    if args.name == "laguerre":
        rep = ids.gf_laguerre(args.order)
    elif args.name == "chebyshev-u":
        rep = ids.gf_chebyshev(args.order)
    else:
        nx = args.order if args.nx is None else args.nx
        rep = ids.gf_laguerre_window(args.order, nx)
    doc = dict(rep.to_json(), family=args.name)
    k = rep.first_mismatch()
    text = f"{args.name} through t^{args.order}: " + (
        "equal" if rep.equal else f"MISMATCH at t^{k}")
    _emit(args, doc, text)
    return EXIT_OK if rep.equal else EXIT_MISMATCH


def _cmd_commutator(args):
    bind = dict(args.param)
    a, b = parse_diffop(args.op, bind), parse_diffop(args.op2, bind)
    c = commutator(a, b)
    _emit(args, {"commutator": str(c), "terms": c.to_json()}, str(c))
    return EXIT_OK


_COMMANDS = {
    "indicial": _cmd_indicial, "solve": _cmd_solve, "residual": _cmd_residual,
    "family": _cmd_family, "ladder": _cmd_ladder, "rodriguez": _cmd_rodriguez,
    "genfunc": _cmd_genfunc, "commutator": _cmd_commutator,
}


def _fail(json_mode, kind, detail, code):
    if json_mode:
        print(json.dumps({"error": {"kind": kind, "detail": detail}}))
    else:
        print(f"error ({kind}): {detail}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    json_mode = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(json_mode, "usage", str(exc), EXIT_USAGE)
    except ParseError as exc:
        return _fail(json_mode, "parse", str(exc), EXIT_USAGE)
    except UnboundParameter as exc:
        return _fail(json_mode, "unbound-parameter", str(exc), EXIT_USAGE)
    except DegenerateIndicialError as exc:
        return _fail(json_mode, "degenerate", str(exc), EXIT_RESONANCE)
    except ResonanceError as exc:
        return _fail(json_mode, "resonance", str(exc), EXIT_RESONANCE)
    except (MixedDegreeError, ShapeError) as exc:
        return _fail(json_mode, "invalid-operator", str(exc), EXIT_USAGE)
    except (ValueError, ZeroDivisionError, OSError) as exc:
        return _fail(json_mode, "invalid-input", str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
