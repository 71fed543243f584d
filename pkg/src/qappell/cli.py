"""Command-line front door.

Subcommands::

    qappell eval    --kind phi1 --q 0.5 --a 0.3 --b 0.2 --bp 0.1 --c 0.7 --x 0.2 --y 0.1
    qappell check   --identity all --samples 50 --seed 42 --n 1 --n 2
    qappell expand  --identity thm2.1 --n 3 --q 0.5 --a 0.3 ...
    qappell catalog [--json] [--flagged]

Complex values are written ``re`` or ``re,im``. Exit codes: 0 success,
1 identity failure, 2 usage error, 3 evaluation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import catalog as cat
from .errors import QAppellError, UnknownIdentity
from .phi_series import PARAMS, EvalConfig, PhiKind, PhiSpec, eval_phi
from .recursions import MAX_N, ShiftRequest, TheoremId, recursion_rhs
from .relations import RelationId, contiguous_rhs
from .verifier import SampleDomain, run_suite, suite_passed

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_EVAL = 0, 1, 2, 3

PARAM_FLAGS = ("a", "ap", "b", "bp", "c", "cp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def complex_arg(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")


def _add_point_flags(p: argparse.ArgumentParser, with_kind: bool) -> None:
    if with_kind:
        p.add_argument("--kind", required=True, choices=[k.value for k in PhiKind])
    p.add_argument("--q", type=complex_arg, required=True)
    for name in PARAM_FLAGS:
        p.add_argument(f"--{name}", type=complex_arg)
    p.add_argument("--x", type=complex_arg, required=True)
    p.add_argument("--y", type=complex_arg, required=True)


def _add_eval_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=EvalConfig.tol)
    p.add_argument("--max-layers", type=int, default=EvalConfig.max_layers)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qappell", description="Evaluate q-Appell functions and verify their identities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate one function")
    _add_point_flags(p, with_kind=True)
    _add_eval_flags(p)

    p = sub.add_parser("check", help="verify identities on seeded random points")
    p.add_argument("--identity", action="append", required=True, help="identity ID or 'all' (repeatable)")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, action="append", help="recursion order (repeatable, default 1..4)")
    p.add_argument("--threshold", type=float, default=1e-8)
    _add_eval_flags(p)

    p = sub.add_parser("expand", help="print the right-hand side of an identity as a term list")
    p.add_argument("--identity", required=True)
    p.add_argument("--n", type=int, default=1)
    _add_point_flags(p, with_kind=False)

    p = sub.add_parser("catalog", help="list all identities")
    p.add_argument("--json", action="store_true")
    p.add_argument("--flagged", action="store_true", help="only identities with a discrepant printing")
    return parser


def _spec_from_flags(args: argparse.Namespace, kind: PhiKind) -> PhiSpec:
    num, den = PARAMS[kind]
    wanted = set(num) | set(den)
    given = {name for name in PARAM_FLAGS if getattr(args, name) is not None}
    if given != wanted:
        missing = sorted(wanted - given)
        extra = sorted(given - wanted)
        parts = []
        if missing:
            parts.append("missing " + ", ".join(f"--{m}" for m in missing))
        if extra:
            parts.append("unexpected " + ", ".join(f"--{e}" for e in extra))
        raise UsageError(f"{kind.value}: " + "; ".join(parts))
    values = {name: getattr(args, name) for name in wanted}
    return PhiSpec.build(kind, args.q, args.x, args.y, **values)


def _config(args: argparse.Namespace) -> EvalConfig:
    try:
        return EvalConfig(tol=args.tol, max_layers=args.max_layers)
    except QAppellError as exc:
        raise UsageError(str(exc)) from exc


def _dump(obj) -> None:
    sys.stdout.write(json.dumps(obj, allow_nan=False) + "\n")


def cmd_eval(args: argparse.Namespace) -> int:
    kind = PhiKind(args.kind)
    spec = _spec_from_flags(args, kind)
    cfg = _config(args)
    sv = eval_phi(spec, cfg)
    _dump({"value": [sv.value.real, sv.value.imag], "layers_used": sv.layers_used, "tail_bound": sv.tail_bound})
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    ids: list[str] = []
    for text in args.identity:
        ids.extend(cat.default_suite() if text.strip().lower() == "all" else [text])
    n_values = args.n or [1, 2, 3, 4]
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    if any(not 1 <= n <= MAX_N for n in n_values):
        raise UsageError(f"--n must lie in [1, {MAX_N}]")
    try:
        dom = SampleDomain(seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    reports = run_suite(ids, dom, args.samples, n_values, args.threshold, _config(args))
    _dump([r.to_dict() for r in reports])
    return EXIT_OK if suite_passed(reports) else EXIT_FAIL


def cmd_expand(args: argparse.Namespace) -> int:
    target = cat.resolve(args.identity)
    if isinstance(target, RelationId):
        tl = contiguous_rhs(target, _spec_from_flags(args, target.kind))
    elif isinstance(target, TheoremId):
        if not 0 <= args.n <= MAX_N:
            raise UsageError(f"--n must lie in [0, {MAX_N}]")
        tl = recursion_rhs(ShiftRequest(target, _spec_from_flags(args, target.kind), args.n))
    else:
        raise UsageError("cross-check IDs have no single expansion; expand each theorem instead")
    _dump(tl.to_json())
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    entries = [e for e in cat.catalog() if e.flagged or not args.flagged]
    if args.json:
        _dump([e.to_dict() for e in entries])
    else:
        width = max(len(e.id) for e in entries)
        for e in entries:
            flag = "  [flagged]" if e.flagged else ""
            print(f"{e.id:<{width}}  {e.paper_ref}{flag}")
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "expand": cmd_expand, "catalog": cmd_catalog}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, UnknownIdentity) as exc:
        sys.stderr.write(f"qappell {args.command}: {exc}\n")
        return EXIT_USAGE
    except QAppellError as exc:
        _dump({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
