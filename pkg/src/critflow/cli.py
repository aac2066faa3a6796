"""Command-line front end.  Every command prints one JSON report; exit 0 iff its checks pass.

Rationals are written as "num/den" strings.  CRITFLOW_FLOOR sets the default
dressing floor for mKdV fields and CRITFLOW_SEED the default sampling seed.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from fractions import Fraction

from . import combin, genpop, kdv, miura, sato, schur
from .exactalg import ExactAlgError, Poly, rat_str
from .psdo import FloorError

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


# ----------------------------------------------------------------- parsing

def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def parse_rationals(text: str):
    text = text.strip()
    return tuple(parse_rational(t) for t in text.split(",")) if text else ()


def parse_ints(text: str):
    text = text.strip()
    try:
        return tuple(int(t) for t in text.split(",")) if text else ()
    except ValueError as exc:
        raise UsageError(f"not an integer list: {text!r}") from exc


def parse_maya(text: str) -> combin.Maya:
    """"(3,1,1)" is a partition; "{-3,0,1,3,4,...}" lists a set up to its tail."""
    text = text.strip()
    body = text[1:-1].strip() if len(text) >= 2 else ""
    try:
        if text.startswith("(") and text.endswith(")"):
            parts = tuple(int(p) for p in body.split(",") if p.strip())
            return combin.partition_to_maya(combin.Partition(parts))
        if text.startswith("{") and text.endswith("}"):
            items = [p.strip() for p in body.split(",") if p.strip()]
            if not items or not re.fullmatch(r"\.\.\.|…", items[-1]):
                raise UsageError(f"set must end with '...': {text!r}")
            elems = [int(p) for p in items[:-1]]
            if not elems:
                raise UsageError(f"set needs at least one element: {text!r}")
            return combin.TailSet(tuple(elems), elems[-1] + 1).as_maya()
    except (ValueError, combin.CombinError) as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError(f"expected '(parts)' or '{{set,...}}', got {text!r}")


def parse_tuple(text: str, N: int) -> combin.MKdVSetTuple:
    members = [parse_maya(t) for t in text.split(";")]
    if len(members) != N:
        raise UsageError(f"expected {N} members separated by ';'")
    return combin.MKdVSetTuple(tuple(combin.KdVSet(m, N) for m in members))


def default_seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int(os.environ.get("CRITFLOW_SEED", "0"))


def default_floor(args):
    """--floor K (or CRITFLOW_FLOOR) means the floor -K; None leaves the minimal depth."""
    raw = args.floor if getattr(args, "floor", None) is not None else os.environ.get("CRITFLOW_FLOOR")
    if raw is None:
        return None
    k = int(raw)
    return -abs(k)


def _rats(values):
    return [rat_str(Fraction(v)) for v in values]


def _maya_json(S):
    base = S.base if isinstance(S, combin.KdVSet) else S
    return {"set": str(base), "partition": list(combin.maya_to_partition(base).parts)}


def _family(args):
    J = parse_ints(args.seq)
    c = parse_rationals(args.c)
    if len(J) != len(c):
        raise UsageError("--seq and --c need the same length")
    return J, c


# ----------------------------------------------------------------- commands

def cmd_generate(args):
    J, c = _family(args)
    y = genpop.generate_multi(J, c, args.n)
    fertile, _ = genpop.is_fertile(y)
    report = {"command": "generate", "N": args.n, "J": list(J), "c": _rats(c),
              "tuple": [p.to_str() for p in y.ys], "coefficients": y.to_json(),
              "degrees": list(y.degrees), "degree_vector": list(combin.degree_vector(J, args.n)),
              "generic": genpop.is_generic(y), "fertile": fertile}
    report["ok"] = fertile and tuple(report["degrees"]) == tuple(report["degree_vector"])
    return report


def cmd_mutate(args):
    N = args.n
    report = {"command": "mutate", "N": N}
    if args.tuple:
        T = parse_tuple(args.tuple, N)
        report["input"] = [_maya_json(S) for S in T.members]
        if args.reduce:
            steps = combin.reduce_tuple_to_empty(T)
            report["steps"] = steps
            report["ok"] = combin.replay_tuple(T, steps) == combin.MKdVSetTuple.empty(N)
        else:
            if args.i is None:
                raise UsageError("tuple mutation needs --i")
            T2 = combin.mutate_tuple(T, args.i)
            report["i"] = args.i
            report["result"] = [_maya_json(S) for S in T2.members]
            report["ok"] = combin.mutate_tuple(T2, args.i) == T
        return report
    if not args.s:
        raise UsageError("mutate needs --s or --tuple")
    S = combin.KdVSet(parse_maya(args.s), N)
    report["input"] = _maya_json(S)
    report["leading_term"] = list(combin.leading_term(S))
    if args.reduce:
        steps = combin.reduce_kdv_to_empty(S)
        report["steps"] = list(steps)
        cur = S
        for a in steps:
            cur = combin.mutate_kdv(cur, a)
        report["ok"] = cur.base == combin.Maya.empty()
    else:
        if args.a is None:
            raise UsageError("KdV mutation needs --a")
        S2 = combin.mutate_kdv(S, args.a)
        report["a"] = args.a
        report["result"] = _maya_json(S2)
        report["result_leading_term"] = list(combin.leading_term(S2))
        report["ok"] = sum(report["result_leading_term"]) == N * (N - 1) // 2
    return report


def cmd_schur(args):
    S = parse_maya(args.s)
    if args.kind == "poly":
        F = schur.schur_from_maya(S)
        return {"command": "schur poly", "input": _maya_json(S), "F": F.to_str(),
                "derivative_rule": schur.derivative_rule_check(combin.maya_to_partition(S)),
                "ok": schur.derivative_rule_check(combin.maya_to_partition(S))}
    if args.a1 is None or args.a2 is None:
        raise UsageError("schur pair needs --a1 and --a2")
    S1, S2, S3, S4, rep = schur.pair_identity(S, args.a1, args.a2)
    out = rep.to_json()
    out.update({"command": "schur pair", "sets": [_maya_json(X) for X in (S1, S2, S3, S4)],
                "ok": rep.equal})
    return out


def cmd_tau(args):
    if args.space:
        W = sato.GrSpace.from_json(json.loads(args.space))
    elif args.s:
        W = sato.GrSpace.from_maya(parse_maya(args.s))
    elif args.seq is not None:
        J, c = _family(args)
        T = sato.generate_tuple_multi(J, c, args.n)
        xy = sato.x_equals_y_check(J, c, args.n)
        return {"command": "tau", "N": args.n, "J": list(J), "c": _rats(c),
                "spaces": T.to_json(),
                "tau": [sato.tau_normalized(W).to_str() for W in T.members],
                "tau_t0": [p.to_str() for p in xy.taus.ys],
                "Y": [p.to_str() for p in xy.y.ys], "ok": xy.ok}
    else:
        raise UsageError("tau needs --space, --s or --seq/--c")
    F = sato.tau(W)
    wr_form = sato.tau_wronskian_form(W)
    return {"command": "tau", "space": W.to_json(), "order_subset": _maya_json(W.order_subset()),
            "tau": F.to_str(), "tau_normalized": sato.normalize(F).to_str(),
            "tau_t0": sato.tau_t0(W).to_str(), "ok": wr_form == F}


def parse_poly_tuple(text: str, N: int) -> genpop.PolyTuple:
    """JSON list of coefficient lists (low degree first), as in the 'coefficients' of generate."""
    try:
        data = json.loads(text)
        ys = tuple(Poly.from_json(cs) for cs in data)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"not a JSON list of coefficient lists: {text!r}") from exc
    if len(ys) != N:
        raise UsageError(f"expected {N} polynomials")
    return genpop.PolyTuple(ys)


def _verify_bethe(args):
    if args.tuple:
        y = parse_poly_tuple(args.tuple, args.n)
        head = {"command": "verify bethe", "N": args.n}
    else:
        if args.seq is None or args.c is None:
            raise UsageError("verify bethe needs --tuple or --seq/--c")
        J, c = _family(args)
        y = genpop.generate_multi(J, c, args.n)
        head = {"command": "verify bethe", "N": args.n, "J": list(J), "c": _rats(c)}
    head["tuple"] = [p.to_str() for p in y.ys]
    if not genpop.is_generic(y):
        head.update({"generic": False, "ok": False,
                     "error": {"type": "NotGeneric",
                               "message": "repeated or shared roots; the master function is singular here"}})
        return head
    res = genpop.bethe_residuals(genpop.master_spec(y))
    worst = max((abs(r) for r in res), default=0.0)
    head.update({"generic": True, "residuals": [f"{r.real:.3e}{r.imag:+.3e}j" for r in res],
                 "max_residual": f"{worst:.3e}", "tol": f"{args.tol:.1e}", "ok": worst < args.tol})
    return head


def _verify_mkdv(args):
    J, c = _family(args)
    floor = default_floor(args)
    rep = miura.verify_theorem_main(J, c, args.r, args.n, use_dressing=floor is not None or args.dress,
                                    floor=floor)
    out = rep.to_json()
    out.update({"command": "verify mkdv", "N": args.n, "floor": floor,
                "residual": "0" if rep.residual.is_zero() else rep.residual.to_json()})
    return out


def _verify_kdv(args):
    J, c = _family(args)
    rep = kdv.verify_mkdv_to_kdv(J, c, args.r, args.i, args.n, use_dressing=args.dress)
    out = rep.to_json()
    out.update({"command": "verify kdv", "N": args.n})
    return out


def _sample(args, r):
    rng = random.Random(default_seed(args))
    return sato.sample_times(rng, max(r, 2))


def _verify_wilson(args):
    J, c = _family(args)
    T = sato.generate_tuple_multi(J, c, args.n)
    ts = _sample(args, args.r)
    rep = sato.verify_wilson(T, args.r, ts, default_floor(args))
    out = rep.to_json()
    out.update({"command": "verify wilson", "N": args.n, "J": list(J), "c": _rats(c),
                "seed": default_seed(args)})
    return out


def _verify_xy(args):
    J, c = _family(args)
    rep = sato.x_equals_y_check(J, c, args.n)
    out = rep.to_json()
    out.update({"command": "verify xy", "N": args.n, "J": list(J), "c": _rats(c),
                "Y_str": [p.to_str() for p in rep.y.ys]})
    return out


VERIFIERS = {"bethe": _verify_bethe, "mkdv": _verify_mkdv, "kdv": _verify_kdv,
             "wilson": _verify_wilson, "xy": _verify_xy}


def cmd_verify(args):
    return VERIFIERS[args.what](args)


# ----------------------------------------------------------------- parser

def _family_args(p, with_r=False):
    p.add_argument("--n", type=int, required=True, help="N, the size of the tuple")
    p.add_argument("--seq", required=True, help="direction sequence, e.g. 1,2,1")
    p.add_argument("--c", required=True, help="parameters, e.g. 1,5/2")
    if with_r:
        p.add_argument("--r", type=int, required=True, help="flow index")


def _verify_args(p, what):
    if what == "bethe":
        p.add_argument("--n", type=int, required=True, help="N, the size of the tuple")
        p.add_argument("--seq", default=None, help="direction sequence, e.g. 1,2,1")
        p.add_argument("--c", default=None, help="parameters, e.g. 1,5/2")
        p.add_argument("--tuple", default=None, help="JSON coefficient lists, low degree first")
    else:
        _family_args(p, with_r=what in ("mkdv", "kdv", "wilson"))
    if what == "kdv":
        p.add_argument("--i", type=int, required=True, help="Miura map index")
    if what in ("mkdv", "kdv"):
        p.add_argument("--dress", action="store_true", help="use the dressing instead of T^J")
    if what in ("mkdv", "wilson"):
        p.add_argument("--floor", type=int, default=None, help="dressing depth K (floor -K)")
    if what == "wilson":
        p.add_argument("--seed", type=int, default=None)
    if what == "bethe":
        p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify, what=what)


def build_parser():
    ap = argparse.ArgumentParser(prog="critflow", description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=None, help="write the report here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="multistep generation Y^J(c)")
    _family_args(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("mutate", help="mutations of KdV sets and mKdV tuples")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", default=None, help="KdV set")
    p.add_argument("--a", type=int, default=None, help="leading element to mutate at")
    p.add_argument("--tuple", default=None, help="mKdV tuple, members separated by ';'")
    p.add_argument("--i", type=int, default=None, help="tuple position")
    p.add_argument("--reduce", action="store_true", help="reduce to the empty set or tuple")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("schur", help="Schur polynomials and the pair identity")
    p.add_argument("kind", choices=["poly", "pair"])
    p.add_argument("--s", required=True, help="partition '(2,1)' or set '{-1,1,2,...}'")
    p.add_argument("--a1", type=int, default=None)
    p.add_argument("--a2", type=int, default=None)
    p.set_defaults(func=cmd_schur)

    p = sub.add_parser("tau", help="tau-functions of subspaces or generated tuples")
    p.add_argument("--space", default=None, help='JSON {"n": n, "basis": [[[deg, "q"], ...], ...]}')
    p.add_argument("--s", default=None, help="subspace W_S for a set or partition")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--seq", default=None)
    p.add_argument("--c", default="")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("verify", help="verification reports")
    vs = p.add_subparsers(dest="what", required=True)
    for what in VERIFIERS:
        _verify_args(vs.add_parser(what), what)
        _verify_args(sub.add_parser(f"verify-{what}", help=f"alias of 'verify {what}'"), what)
    return ap


MODULE_ERRORS = (UsageError, combin.CombinError, schur.SchurError, genpop.GenerationError,
                 genpop.MasterError, miura.MiuraError, kdv.KdVError, sato.SatoError, FloorError,
                 ExactAlgError)


def run(argv=None):
    """(exit code, report dict, output path)."""
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
        code = EXIT_OK if report.get("ok") else EXIT_FAIL
    except MODULE_ERRORS as exc:
        report = {"ok": False, "error": {"type": type(exc).__name__, "message": str(exc)}}
        if isinstance(exc, FloorError):
            report["error"]["required_floor"] = exc.required
        code = EXIT_ERROR
    return code, report, args.out


def main(argv=None):
    code, report, out = run(argv)
    text = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
