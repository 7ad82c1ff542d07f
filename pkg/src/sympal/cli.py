"""Command-line front end. Every run prints the resolved configuration next to
the result; JSON output uses sorted keys so identical runs are byte-identical.

Exit codes: 0 success, 1 usage or input errors, 2 domain errors (and failed
verification).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from sympal import __version__
from sympal.errors import SympalError
from sympal.fixtures import FIXTURE_DIR


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_json(path):
    p = Path(path)
    if not p.exists() and not p.is_absolute() and (FIXTURE_DIR / p).exists():
        p = FIXTURE_DIR / p
    try:
        return json.loads(p.read_text())
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _matgroup(args):
    from sympal import grouptool
    from sympal.ffield import parse_field
    from sympal.symplectic import Mat

    obj = _load_json(args.gens)
    F = parse_field(args.field or obj["field"])
    n = args.n or int(obj["n"])
    gens = [Mat.from_rows(F, rows) for rows in obj["generators"]]
    if any(g.n != n for g in gens):
        raise UsageError(f"generators are not {n}x{n}")
    return grouptool.closure(gens, cap=args.cap, field=F, n=n)


def cmd_huge(args):
    from sympal import grouptool

    return grouptool.huge_test(_matgroup(args)).to_json()


def cmd_classify(args):
    from sympal import grouptool

    G = _matgroup(args)
    out = grouptool.classify_projective_image(G).to_json()
    out["group_order"] = len(G)
    return out


def _rep(args):
    from sympal.twists import GroupRep

    return GroupRep.from_json(_load_json(args.rep))


def cmd_twists(args):
    from sympal import twists

    rep = _rep(args)
    an = twists.inner_twist_stabilizer(rep)
    out = an.to_json(rep.group)
    out["field"] = rep.L.descriptor()
    return out


def cmd_descend(args):
    from sympal import twists

    rep = _rep(args)
    return twists.descend_projective(rep, seed=args.seed).to_json(rep.group)


def _parse_digits(text):
    try:
        return [tuple(int(x) for x in block.split(",")) for block in text.split(";")]
    except ValueError as exc:
        raise UsageError(f"bad digit blocks {text!r}") from exc


def cmd_obstruct(args):
    from sympal import fundchar

    if args.shape:
        shape = fundchar.ShapeSpec.from_json({"ell": args.ell, "t": args.t, **_load_json(args.shape)})
    else:
        shape = fundchar.ShapeSpec.from_digits(args.ell, args.t, _parse_digits(args.digits))
    if shape.n != args.n:
        raise UsageError(f"blocks give dimension {shape.n}, not {args.n}")
    witness = fundchar.obstruction_witness(args.ell, args.n, shape)
    return {
        "shape": shape.to_json(),
        "obstructed": witness is None,
        "witness": None if witness is None else dict(zip("i j c x y m b".split(), witness)),
        "brute_force_twists": [list(h) for h in fundchar.brute_force_twists(shape)],
        "det_exponent": shape.det_exponent(),
    }


def cmd_period(args):
    from sympal import cyclo

    return cyclo.gauss_period(args.p, args.q).to_json()


def cmd_density(args):
    from sympal import cyclo

    pd = cyclo.gauss_period(args.p, args.q)
    rep = cyclo.density_estimate(pd, args.d, args.bound)
    out = rep.to_json()
    out["frequency_decimal"] = round(float(rep.frequency), 6)
    out["prediction_decimal"] = round(float(rep.prediction), 6)
    return out


def _system(args):
    from sympal.compat import MockSystem

    return MockSystem.from_json(_load_json(args.sys))


def cmd_system_analyze(args):
    from sympal import compat

    sys_ = _system(args)
    an = compat.global_inner_twists(sys_)
    out = an.to_json(sys_.group)
    out["trace_field_degree"] = compat.generated_field_degree(
        sys_.ring.N, [sys_.a_p(lab) for lab in sorted(sys_.frob)])
    if sys_.symplectic:
        out["multiplier_consistent"] = compat.multiplier_consistency(sys_)
        out["note"] = compat.MULTIPLIER_NOTE
    return out


def cmd_system_reduce(args):
    from sympal import compat

    sys_ = _system(args)
    lam, F = compat.residue_prime(sys_.ring, args.ell)
    out = compat.residual_field_match(sys_, args.ell, seed=args.seed).to_json()
    out["residue_field"] = F.descriptor()
    out["lambda_factor"] = list(lam.factor)
    return out


def cmd_verify(args):
    from sympal import acceptance

    results = acceptance.run_suite(args.suite, seed=args.seed, threads=args.threads)
    return {"suite": args.suite, "passed": all(r.passed for r in results),
            "criteria": [r.to_json() for r in results]}, results


COMMANDS = {
    "huge": cmd_huge,
    "classify": cmd_classify,
    "twists": cmd_twists,
    "descend": cmd_descend,
    "obstruct": cmd_obstruct,
    "period": cmd_period,
    "density": cmd_density,
    "system-analyze": cmd_system_analyze,
    "system-reduce": cmd_system_reduce,
    "verify": cmd_verify,
}


def _global_flags(suppress):
    p = argparse.ArgumentParser(add_help=False)
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=default(0), help="seed for randomized steps")
    p.add_argument("--threads", type=int, default=default(1), help="worker cap for group scans")
    p.add_argument("--output", choices=("json", "table"), default=default("json"))
    return p


def build_parser():
    from sympal.grouptool import DEFAULT_CAP

    parser = _Parser(prog="sympal", description="Inner twists and symplectic images over finite fields.",
                     parents=[_global_flags(False)])
    # the flags are also accepted after the subcommand, without resetting earlier values
    common = _global_flags(True)
    parser.add_argument("--version", action="version", version=f"sympal {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, helptext in (("huge", "test whether a generated matrix group is huge"),
                           ("classify", "classify the projective image of a generated matrix group")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--field", help="field descriptor p:k (defaults to the file's)")
        p.add_argument("--n", type=int, help="matrix size (defaults to the file's)")
        p.add_argument("--gens", required=True, help="JSON file with a generators list")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="closure size cap")

    for name, helptext in (("twists", "inner-twist stabilizer of a representation"),
                           ("descend", "projective model over the projective field")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--rep", required=True, help="representation JSON")

    p = sub.add_parser("obstruct", parents=[common], help="exponent obstruction for a tame shape")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--shape", help="shape JSON with a blocks list of digit lists")
    src.add_argument("--digits", help="blocks of base-ell digits, e.g. '1,0;2'")
    p.add_argument("--t", type=int, default=0, help="twist exponent of the cyclotomic character")

    p = sub.add_parser("period", parents=[common], help="Gauss period and minimal polynomial")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("density", parents=[common], help="residue-degree frequency among primes")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)

    p = sub.add_parser("system-analyze", parents=[common], help="global inner twists of a mock system")
    p.add_argument("--sys", required=True, help="system JSON")

    p = sub.add_parser("system-reduce", parents=[common], help="reduce a mock system and match fields")
    p.add_argument("--sys", required=True, help="system JSON")
    p.add_argument("--ell", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p.add_argument("--suite", choices=("quick", "full"), default="quick")
    return parser


def _config(args):
    return {k: v for k, v in sorted(vars(args).items())}


def _table(obj, prefix=""):
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            lines.extend(_table(v, f"{prefix}{k}."))
    elif isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        for i, v in enumerate(obj):
            lines.extend(_table(v, f"{prefix}{i}."))
    else:
        lines.append(f"{prefix[:-1]}: {json.dumps(obj)}")
    return lines


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"sympal: error: {exc}", file=sys.stderr)
        return 1
    except SympalError as exc:
        print(f"sympal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError) as exc:
        print(f"sympal: error: bad input: {exc}", file=sys.stderr)
        return 1
    code = 0
    if args.command == "verify":
        out, results = out
        code = 0 if out["passed"] else 2
    doc = {"command": args.command, "config": _config(args), "result": out}
    if args.output == "json":
        print(json.dumps(doc, sort_keys=True, indent=2))
    elif args.command == "verify":
        print("\n".join(r.line() for r in results))
    else:
        print("\n".join(_table(doc)))
    return code


if __name__ == "__main__":
    sys.exit(main())
