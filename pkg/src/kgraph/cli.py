"""``kgraph`` command-line interface.

Exit codes: 0 success, 1 replay could not confirm a schedule, 2 invalid input
or domain error, 3 resource cap exceeded, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import algebra
from .alignment import check_little_pullback, check_singly_aligned
from .algebra import kms_check, omega
from .census import enumerate_census
from .dixmier import audit_schedule, dixmier_average, replay
from .errors import CubicViolationError, DomainError, KGraphError, ResourceError, StructureError
from .io import (
    dumps,
    element_from_json,
    frac_str,
    graph_to_json,
    word_from_json,
    word_to_json,
)
from .lattice import classify_type, intrinsic_group, spectrum_generator
from .periodicity import check_periodicity

EX_OK, EX_REPLAY, EX_DOMAIN, EX_RESOURCE, EX_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _frac(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("eps must be positive")
    return value


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"expected JSON, got {text!r}") from exc


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise StructureError(f"{path} is not valid JSON: {exc}") from exc


def _graph(args):
    data = _read_json(args.graph)
    from .io import graph_from_json

    return graph_from_json(data)


def _globals(sub=False):
    p = argparse.ArgumentParser(add_help=False)
    d = argparse.SUPPRESS if sub else None
    p.add_argument("--max-terms", type=int, default=d, help="term budget (default: $KGRAPH_MAX_TERMS or 10^6)")
    p.add_argument("--periodicity-bound", type=int, default=argparse.SUPPRESS if sub else 4,
                   help="height bound for periodicity searches (default 4)")
    p.add_argument("--eps", type=_frac, default=argparse.SUPPRESS if sub else Fraction(1, 100),
                   help="target residual norm as p/q (default 1/100)")
    return p


# ----------------------------------------------------------------------
# subcommands


def cmd_validate(args):
    from .io import _theta_from_json
    from .graph import validate_kgraph

    m, theta = _theta_from_json(_read_json(args.graph))
    try:
        g = validate_kgraph(m, theta)
    except CubicViolationError as exc:
        return EX_DOMAIN, {
            "valid": False,
            "error": "CubicViolationError",
            "violations": [
                {"colours": [i + 1, j + 1, l + 1], "edges": [t1 + 1, t2 + 1, t3 + 1]}
                for i, j, l, t1, t2, t3 in exc.violations
            ],
        }
    return EX_OK, {"valid": True, "graph": graph_to_json(g)}


def cmd_normal_form(args):
    g = _graph(args)
    w = word_from_json(g, args.word)
    return EX_OK, {"normal_form": word_to_json(g, w), "degree": list(g.degree(w))}


def cmd_lambda_min(args):
    g = _graph(args)
    mu, nu = word_from_json(g, args.mu), word_from_json(g, args.nu)
    pairs = g.lambda_min(mu, nu)
    return EX_OK, {
        "mu": word_to_json(g, mu),
        "nu": word_to_json(g, nu),
        "count": len(pairs),
        "pairs": [{"xi": word_to_json(g, x), "eta": word_to_json(g, y)} for x, y in pairs],
    }


def cmd_lpb(args):
    g = _graph(args)
    res = check_little_pullback(g)
    out = {"lpb": res.holds, "witness": None}
    if res.witness:
        e, f, ext = res.witness
        out["witness"] = {
            "e": word_to_json(g, e),
            "f": word_to_json(g, f),
            "extensions": [{"xi": word_to_json(g, x), "eta": word_to_json(g, y)} for x, y in ext],
        }
    if args.maxdeg is not None:
        if len(args.maxdeg) != g.k:
            raise DomainError(f"--maxdeg needs {g.k} entries")
        out["singly_aligned"] = check_singly_aligned(g, args.maxdeg).holds
    return EX_OK, out


def cmd_periodicity(args):
    g = _graph(args)
    res = check_periodicity(g, args.periodicity_bound)
    out = {"status": res.status, "bound": res.bound, "candidates_checked": res.candidates_checked}
    if res.witness:
        out["witness"] = {
            "g": list(res.witness.g),
            "verified": res.witness.verified,
            "gamma": [
                {"u": word_to_json(g, u), "gamma_u": word_to_json(g, v)} for u, v in sorted(res.witness.gamma.items())
            ],
        }
    return EX_OK, out


def cmd_intrinsic_group(args):
    if args.m is None and args.graph is None:
        raise UsageError("intrinsic-group needs --m or --graph")
    m = args.m if args.m is not None else list(_graph(args).m)
    grp = intrinsic_group(m)
    spec = spectrum_generator(m)
    out = {
        "m": list(grp.m),
        "rank": grp.rank,
        "basis": [list(b) for b in grp.basis],
        "snf_diagonal": list(grp.snf_diagonal),
        "spectrum": spec.kind if spec.kind == "Dense" else {"Cyclic": {"base": spec.base, "exp": spec.exp}},
    }
    return EX_OK, out


def cmd_classify(args):
    return EX_OK, classify_type(_graph(args), args.periodicity_bound).to_json()


def cmd_kms_check(args):
    a = element_from_json(_read_json(args.a))
    b = element_from_json(_read_json(args.b))
    res = kms_check(a, b)
    out = {"ok": res.ok}
    if res.violation:
        na, nb, lhs, rhs = res.violation
        out["violation"] = {"deg_a": list(na), "deg_b": list(nb), "lhs": frac_str(lhs), "rhs": frac_str(rhs)}
    return EX_OK, out


def cmd_dixmier(args):
    a = element_from_json(_read_json(args.element))
    lam, sched = dixmier_average(a.graph, a, args.eps)
    doc = sched.to_json()
    if args.schedule_out:
        with open(args.schedule_out, "w") as fh:
            fh.write(dumps(doc) + "\n")
    out = {
        "scalar": frac_str(lam),
        "omega": frac_str(omega(a)),
        "residual_bound": frac_str(sched.residual_bound),
        "eps": frac_str(sched.eps),
        "steps": len(sched.steps),
        "audit": audit_schedule(sched),
    }
    if not args.schedule_out:
        out["schedule"] = doc
    return EX_OK, out


def cmd_census(args):
    m = args.m
    census = enumerate_census(args.k, m, args.periodicity_bound, workers=args.workers)
    if args.format == "csv":
        return EX_OK, census.to_csv()
    return EX_OK, census.to_json()


def cmd_replay(args):
    report = replay(_read_json(args.schedule))
    return (EX_OK if report.confirmed else EX_REPLAY), report.to_json()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kgraph", description=__doc__.splitlines()[0], parents=[_globals()])
    subs = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    common = _globals(sub=True)

    def add(name, fn, help_text):
        p = subs.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(func=fn)
        return p

    p = add("validate", cmd_validate, "check theta permutations and the cubic condition")
    p.add_argument("--graph", required=True)
    p = add("normal-form", cmd_normal_form, "colour-ordered normal form of an edge sequence")
    p.add_argument("--graph", required=True)
    p.add_argument("--word", required=True, type=_json_arg, help='JSON list of [colour, index], 1-based')
    p = add("lambda-min", cmd_lambda_min, "minimal common extensions of two words")
    p.add_argument("--graph", required=True)
    p.add_argument("--mu", required=True, type=_json_arg)
    p.add_argument("--nu", required=True, type=_json_arg)
    p = add("lpb", cmd_lpb, "little pull-back property (and optionally single alignment)")
    p.add_argument("--graph", required=True)
    p.add_argument("--maxdeg", type=_int_list)
    p = add("periodicity", cmd_periodicity, "bounded search for a periodicity witness")
    p.add_argument("--graph", required=True)
    p = add("intrinsic-group", cmd_intrinsic_group, "the lattice {g : m^g = 1} and the spectrum generator")
    p.add_argument("--m", type=_int_list)
    p.add_argument("--graph")
    p = add("classify", cmd_classify, "factor type report")
    p.add_argument("--graph", required=True)
    p = add("kms-check", cmd_kms_check, "check omega(AB) = m^d(B) omega(BA)")
    p.add_argument("--a", required=True, help="element file")
    p.add_argument("--b", required=True, help="element file")
    p = add("dixmier", cmd_dixmier, "Dixmier average with a certified, replayable schedule")
    p.add_argument("--element", required=True)
    p.add_argument("--schedule-out")
    p = add("census", cmd_census, "enumerate and classify all theta families")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=_int_list, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--workers", type=int, default=1)
    p = add("replay", cmd_replay, "re-execute a schedule file and re-verify its bound")
    p.add_argument("schedule")
    return parser


def _error(exc: Exception) -> dict:
    return {"error": type(exc).__name__, "message": str(exc)}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a subcommand is required")
    except UsageError as exc:
        print(f"kgraph: error: {exc}", file=sys.stderr)
        parser.print_help(sys.stderr)
        return EX_USAGE
    if args.max_terms is not None:
        if args.max_terms < 1:
            print("kgraph: error: --max-terms must be positive", file=sys.stderr)
            return EX_USAGE
        algebra.limits.max_terms = args.max_terms
    if args.periodicity_bound < 1:
        print("kgraph: error: --periodicity-bound must be at least 1", file=sys.stderr)
        return EX_USAGE
    try:
        code, out = args.func(args)
    except UsageError as exc:
        print(f"kgraph: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except ResourceError as exc:
        code, out = EX_RESOURCE, _error(exc)
    except (DomainError, KGraphError) as exc:
        code, out = EX_DOMAIN, _error(exc)
    stdout.write(out if isinstance(out, str) else dumps(out) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
