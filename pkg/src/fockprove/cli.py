"""Command-line front end.

Exit status is 0 on success, 1 on usage errors and 2 on domain errors
(bad input files, parse failures, failed checks).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .errors import FockProveError
from .fock import load_state_spec, make_state
from .measurement import spectrum_diagonal, truncation_threshold
from .polynomial import NonnegPolynomial, enumerate_range, evaluate, parse_polynomial
from .prover import FormalSystem, prove_once, run_trials, trial_rng
from .unary import canonicalize, enumerate_set, frobenius_gap, parse_set_expr

USAGE_ERROR = 1
DOMAIN_ERROR = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=_nonneg, default=0)
    common.add_argument("--cutoff", type=_positive, default=4)
    common.add_argument("--bound", type=_nonneg, default=20)
    common.add_argument("--trials", type=_positive, default=1000)
    common.add_argument("--state", metavar="PATH")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")

    parser = _Parser(prog="fockprove", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("set", parents=[common], help="canonical form and members of a set expression")
    p.add_argument("expr")

    p = sub.add_parser("spectrum", parents=[common], help="truncated spectrum of F(N) vs range of F")
    p.add_argument("poly")
    p.add_argument("--modes", type=_nonneg, help="number of oscillators (default: from POLY)")

    p = sub.add_parser("measure", parents=[common], help="repeated measure-and-prove rounds")
    p.add_argument("poly")

    p = sub.add_parser("prove", parents=[common], help="one measure-and-prove round")
    p.add_argument("poly")
    return parser


def _join(values) -> str:
    return " ".join(map(str, values))


def cmd_set(args, out) -> int:
    form = canonicalize(parse_set_expr(args.expr))
    out.write(f"canonical: {form}\n")
    out.write(f"members: {_join(enumerate_set(form, args.bound))}\n")
    out.write(f"frobenius_gap: {frobenius_gap(form)}\n")
    return 0


def cmd_spectrum(args, out) -> int:
    poly = parse_polynomial(args.poly, args.modes)
    spectrum = spectrum_diagonal(poly, poly.k, args.cutoff)
    values = enumerate_range(poly, args.bound)
    threshold = truncation_threshold(poly, args.cutoff)
    limit = args.bound + 1 if threshold is None else min(threshold, args.bound + 1)
    agree = [v for v in spectrum if v < limit] == [v for v in values if v < limit]
    agree = agree and set(v for v in spectrum if v <= args.bound) <= set(values)
    out.write(f"polynomial: {poly}\n")
    out.write(f"spectrum: {_join(spectrum)}\n")
    out.write(f"range: {_join(values)}\n")
    out.write(f"threshold: {'none' if threshold is None else threshold}\n")
    out.write(f"agreement: {'OK' if agree else 'MISMATCH'}\n")
    return 0 if agree else DOMAIN_ERROR


def _system_and_state(args):
    if args.state is None:
        raise UsageError("--state is required")
    state = make_state(load_state_spec(args.state))
    poly = parse_polynomial(args.poly, state.k)
    return FormalSystem(poly, label=args.poly), state


def _verify(poly: NonnegPolynomial, m: int, proof) -> None:
    if evaluate(poly, proof) != m:
        raise FockProveError(f"proof {proof} does not verify theorem {m}")


def cmd_measure(args, out) -> int:
    system, state = _system_and_state(args)
    report = run_trials(system, state, args.trials, args.seed)
    for r in report.records:
        _verify(system.F, r.m, r.proof)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.writelines(r.to_json() + "\n" for r in report.records)
    if args.format == "json":
        out.write(json.dumps(report.to_json(args.out)) + "\n")
    else:
        out.write(report.histogram_tsv())
    return 0


def cmd_prove(args, out) -> int:
    system, state = _system_and_state(args)
    record = prove_once(system, state, trial_rng(args.seed, 0), args.seed, 0)
    _verify(system.F, record.m, record.proof)
    out.write(json.dumps({"theorem": record.m, "proof": list(record.proof), "p": record.p,
                          "seed": record.seed}) + "\n")
    return 0


COMMANDS = {"set": cmd_set, "spectrum": cmd_spectrum, "measure": cmd_measure, "prove": cmd_prove}


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"fockprove: usage error: {exc}\n")
        return USAGE_ERROR
    except (FockProveError, OSError, ValueError, KeyError, TypeError) as exc:
        err.write(f"fockprove: error: {exc}\n")
        return DOMAIN_ERROR


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
