"""Command-line front end: ``surfbu <subcommand> ...``.

Exit codes: 0 holds / verified, 1 fails / unknown, 2 depends on X or out of
scope, 3 computational error, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import List, Optional, Sequence, TextIO

from . import homz2, oracle, selftest
from .nilpotent import eval_word, nil_commutator, project_qbar
from .presentations import (
    b2_presentation,
    p2_presentation,
    q16_presentation,
    scott_relation_set,
    surface_group,
)
from .quat16 import ELEMENTS, mul_table, parse_q16, q16_order
from .words import WordSyntaxError, format_word, parse_word
from .wordsearch import DEFAULT_LIMITS, SearchLimits, derive_identity, verify_equality

EXIT_USAGE = 64
EXIT_ERROR = 3
OUTCOME_CODES = {oracle.HOLDS: 0, oracle.FAILS: 1, oracle.DEPENDS_ON_X: 2, oracle.OUT_OF_SCOPE: 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj, out: TextIO) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def parse_surface(text: str):
    """``S2`` is the orientable surface of genus 2, ``N3`` the nonorientable one."""
    m = re.fullmatch(r"\s*([SN])(\d+)\s*", text)
    if not m:
        raise UsageError(f"surface must look like S2 or N3, got {text!r}")
    kind = "orientable" if m.group(1) == "S" else "nonorientable"
    return surface_group(kind, int(m.group(2)))


def _word(text: str):
    try:
        return parse_word(text)
    except WordSyntaxError as exc:
        raise UsageError(str(exc)) from exc


def _read_case(path: str) -> oracle.CaseInput:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    try:
        return oracle.case_from_json(text)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad case file: {exc}") from exc


def _limits(args) -> SearchLimits:
    return SearchLimits(
        max_word_length=args.max_word_length,
        max_states=args.max_states,
        max_depth=args.max_depth,
        max_seconds=args.max_seconds,
    )


def _write_json(path: Optional[str], obj) -> None:
    if path:
        with open(path, "w") as fh:
            _dump(obj, fh)


# ---------------------------------------------------------------- handlers


def cmd_decide(args, out: TextIO) -> int:
    case = _read_case(args.input)
    verdict = oracle.decide(case, _limits(args))
    _write_json(args.certificate, verdict.to_dict())
    if args.format == "json":
        out.write(verdict.to_json() + "\n")
    else:
        out.write(f"outcome: {verdict.outcome}\n")
        out.write(f"rule: {verdict.citation}: {oracle.RULES[verdict.citation]}\n")
        for note in verdict.notes:
            out.write(f"note: {note}\n")
    return OUTCOME_CODES[verdict.outcome]


def cmd_verify_phi(args, out: TextIO) -> int:
    case = _read_case(args.input)
    try:
        cert = oracle.build_phi(case, _limits(args))
    except oracle.NoConstruction as exc:
        out.write(f"no factorisation: {exc}\n")
        return 2
    _write_json(args.certificate, cert.to_dict())
    if args.format == "json":
        _dump(cert.to_dict(), out)
    else:
        out.write(f"construction: {cert.construction}\n")
        for gen in cert.hom.source.alphabet:
            out.write(f"  {gen} -> {format_word(cert.hom.images[gen])}\n")
        for check in cert.hom.verification:
            out.write(f"  relator {check.label}: {check.status}\n")
        out.write(f"verified: {cert.verified}\n")
    return 0 if cert.verified else 1


def cmd_classify(args, out: TextIO) -> int:
    pres = parse_surface(args.surface)
    theta = homz2.parse_theta(pres, args.theta)
    rep, cls, cert = homz2.canonicalize(theta)
    body = {"class": cls, "theta": theta.to_dict(), "representative": rep.to_dict()}
    if args.certificate:
        body["moves"] = cert.to_list()
        body["moves_check"] = cert.check(rep, theta)
        _write_json(args.certificate, body)
    if args.format == "json":
        _dump(body, out)
    else:
        out.write(f"class: {cls}\nrepresentative: {rep}\n")
    return 0


def _nil_out(p, args, out: TextIO) -> None:
    if args.format == "json":
        _dump(p.to_dict(), out)
    else:
        out.write(f"u = {list(p.u)}\nc = {list(p.c)}\n")
        central = p.central_dict()
        out.write("central: " + (" ".join(f"{k}^{v}" for k, v in central.items()) or "trivial") + "\n")


def cmd_nil_eval(args, out: TextIO) -> int:
    _nil_out(eval_word(_word(args.word), args.genus), args, out)
    return 0


def cmd_nil_commutator(args, out: TextIO) -> int:
    _nil_out(nil_commutator(_word(args.left), _word(args.right), args.genus), args, out)
    return 0


def cmd_qbar_project(args, out: TextIO) -> int:
    q = project_qbar(eval_word(_word(args.word), args.genus))
    if args.format == "json":
        _dump(q.to_dict(), out)
    else:
        out.write(" ".join(f"{k}={v}" for k, v in q.to_dict().items()) + "\n")
    return 0


def _relations(name: str, genus: int):
    if name == "b2":
        return b2_presentation(genus)
    if name == "p2":
        return p2_presentation(genus)
    if name == "scott":
        return scott_relation_set(genus)
    if name == "q16":
        return q16_presentation()
    raise UsageError(f"unknown relation set {name!r}")


def cmd_search(args, out: TextIO) -> int:
    pres = _relations(args.relations, args.genus)
    if args.rhs is None:
        res = derive_identity(pres, _word(args.word), _limits(args))
    else:
        res = verify_equality(pres, _word(args.word), _word(args.rhs), _limits(args))
    if args.format == "json":
        _dump(res.to_dict(), out)
    else:
        out.write(f"{res.status}\n")
        if res.certificate is not None:
            out.write(f"steps: {len(res.certificate.steps)}\n")
        for k, v in sorted(res.diagnostics.items()):
            out.write(f"{k}: {v}\n")
    return 0 if res.verified else 1


def cmd_q16(args, out: TextIO) -> int:
    if args.op == "mul":
        if len(args.elements) < 1:
            raise UsageError("mul needs at least one element")
        acc = parse_q16(args.elements[0])
        for e in args.elements[1:]:
            acc = acc * parse_q16(e)
        out.write(f"{acc}\n")
    elif args.op == "order":
        if len(args.elements) != 1:
            raise UsageError("order takes exactly one element")
        out.write(f"{q16_order(parse_q16(args.elements[0]))}\n")
    else:
        names = [str(u) for u in ELEMENTS]
        width = max(len(n) for n in names)
        out.write(" " * width + " | " + " ".join(n.rjust(width) for n in names) + "\n")
        for name, row in zip(names, mul_table()):
            out.write(name.rjust(width) + " | " + " ".join(str(v).rjust(width) for v in row) + "\n")
    return 0


def cmd_show_presentation(args, out: TextIO) -> int:
    if args.relations == "surface":
        if not args.surface:
            raise UsageError("--surface is required for surface presentations")
        pres = parse_surface(args.surface)
    else:
        pres = _relations(args.relations, args.genus)
    out.write(pres.to_json() + "\n")
    return 0


def cmd_selftest(args, out: TextIO) -> int:
    rows = selftest.run(args.genus_max, args.seed)
    width = max(len(name) for name, _, _ in rows)
    out.write(f"{'check'.ljust(width)}  result\n")
    for name, ok, secs in rows:
        timing = f"  {secs:.2f}s" if args.timings else ""
        out.write(f"{name.ljust(width)}  {'PASS' if ok else 'FAIL'}{timing}\n")
    return 0 if all(ok for _, ok, _ in rows) else 1


# ----------------------------------------------------------------- parser


def _add_limits(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-word-length", type=int, default=DEFAULT_LIMITS.max_word_length)
    p.add_argument("--max-states", type=int, default=DEFAULT_LIMITS.max_states)
    p.add_argument("--max-depth", type=int, default=DEFAULT_LIMITS.max_depth)
    p.add_argument("--max-seconds", type=float, default=DEFAULT_LIMITS.max_seconds)


def _add_format(p: argparse.ArgumentParser, default: str = "text") -> None:
    p.add_argument("--format", choices=("text", "json"), default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="surfbu", description="Borsuk-Ulam decisions for free involutions over surface targets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decide", help="decide a case from a JSON file")
    p.add_argument("--input", required=True)
    p.add_argument("--certificate", help="write the verdict JSON here")
    _add_format(p, "json")
    _add_limits(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("verify-phi", help="build and verify the factorisation for a case")
    p.add_argument("--input", required=True)
    p.add_argument("--certificate")
    _add_format(p)
    _add_limits(p)
    p.set_defaults(func=cmd_verify_phi)

    p = sub.add_parser("classify", help="class of a surjection onto Z2")
    p.add_argument("--surface", required=True, help="S<h> or N<l>")
    p.add_argument("--theta", required=True, help="e.g. v=1,a1=1; omitted generators map to 0")
    p.add_argument("--certificate", help="write the move certificate JSON here")
    _add_format(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("nil-eval", help="normal form in the class-two quotient")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--word", required=True)
    _add_format(p)
    p.set_defaults(func=cmd_nil_eval)

    p = sub.add_parser("nil-commutator", help="commutator in the class-two quotient")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    _add_format(p)
    p.set_defaults(func=cmd_nil_commutator)

    p = sub.add_parser("qbar-project", help="mod-2 symmetrised image of a central word")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--word", required=True)
    _add_format(p)
    p.set_defaults(func=cmd_qbar_project)

    p = sub.add_parser("search", help="bounded word-problem search")
    p.add_argument("--relations", choices=("b2", "p2", "scott", "q16"), required=True)
    p.add_argument("--genus", type=int, default=1)
    p.add_argument("--word", required=True)
    p.add_argument("--rhs", help="check word = rhs instead of word = 1")
    _add_format(p)
    _add_limits(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("q16", help="arithmetic in the generalised quaternion group of order 16")
    p.add_argument("op", choices=("mul", "order", "table"))
    p.add_argument("elements", nargs="*")
    p.set_defaults(func=cmd_q16)

    p = sub.add_parser("show-presentation", help="print a presentation as JSON")
    p.add_argument("--relations", choices=("surface", "b2", "p2", "scott", "q16"), required=True)
    p.add_argument("--genus", type=int, default=1)
    p.add_argument("--surface", help="S<h> or N<l> when --relations surface")
    p.set_defaults(func=cmd_show_presentation)

    p = sub.add_parser("selftest", help="run the invariant suite")
    p.add_argument("--genus-max", type=int, default=3)
    p.add_argument("--seed", type=int, default=oracle.DEFAULT_SEED)
    p.add_argument("--timings", action="store_true", help="append wall-clock times (output no longer reproducible)")
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: Optional[Sequence[str]] = None, out: TextIO = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"surfbu: error: {exc}\n")
        return EXIT_USAGE
    except (oracle.InvalidCase, homz2.NotSurjective, homz2.NotWellDefined, ValueError, KeyError) as exc:
        sys.stderr.write(f"surfbu: error: {exc}\n")
        return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
