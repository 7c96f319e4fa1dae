"""Command-line front end.

Exit codes: 0 success, 1 no plan or failed check, 2 inconclusive (a budget
ran out), 64 usage error, 65 malformed domain file.
"""

from __future__ import annotations

import argparse
import sys

from .completion import CompletionConfig, complete
from .domainfile import _rule_line, emit, load_domain_file
from .domains import DOMAINS, make_domain
from .errors import (ArityMismatch, BudgetExhausted, DomainFileError, InvalidRule, RewriteError,
                     UnknownSymbol)
from .oracle import bfs_plan
from .planner import plan as make_plan
from .rewrite import RuleSet
from .synthesis import build_r0, build_r1, build_r2, is_action_support
from .terms import parse_term
from .theory import check_representation

__all__ = ["main", "run", "EXIT_OK", "EXIT_FAIL", "EXIT_INCONCLUSIVE", "EXIT_USAGE", "EXIT_PARSE"]

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sitrewrite", description="Situation-calculus planning by term rewriting.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("plan", help="plan from the file's start to its goal by completion")
    c.add_argument("file")
    c.add_argument("--trace", action="store_true", help="append the witnessing rewrite steps")
    c.add_argument("--no-optimize", action="store_true", help="skip plan optimization")
    c.add_argument("--grounding", choices=("auto", "never", "always"), default="auto")

    c = sub.add_parser("complete", help="run unfailing completion on the file's rules")
    c.add_argument("file")
    c.add_argument("--max-cps", type=int, default=CompletionConfig.max_cps)
    c.add_argument("--max-term-size", type=int, default=CompletionConfig.max_term_size)

    c = sub.add_parser("synth", help="synthesize a rewrite system from the theory")
    c.add_argument("file")
    c.add_argument("--level", type=int, choices=(0, 1, 2), required=True)

    c = sub.add_parser("oracle", help="shortest plan by breadth-first search")
    c.add_argument("file")

    c = sub.add_parser("check", help="check the five representation conditions")
    c.add_argument("file")

    c = sub.add_parser("domain", help="write a built-in domain file")
    c.add_argument("name", choices=DOMAINS)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--variant")
    c.add_argument("--positions", type=int)
    c.add_argument("--towers", type=int)
    c.add_argument("--bridge-slots", type=int)
    c.add_argument("--emit", required=True, help="output path, or - for standard output")

    c = sub.add_parser("check-support", help="decide whether a term is an action support")
    c.add_argument("file")
    c.add_argument("term")
    return p


def _load(path):
    try:
        return load_domain_file(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _needs_theory(df, path):
    if df.theory is None:
        raise DomainFileError(f"{path} has no 'domain:' line, so there is no theory")
    return df.theory, df.encoding


def _needs_ends(df, path):
    if df.start is None or df.goal is None:
        raise DomainFileError(f"{path} needs 'start:' and 'goal:' lines")
    enc = df.encoding
    return enc.sigma(df.start), enc.sigma(df.goal)


def _cmd_plan(args, out):
    df = _load(args.file)
    _needs_theory(df, args.file)
    start, goal = _needs_ends(df, args.file)
    try:
        p = make_plan(df.encoding, start, goal, optimize=not args.no_optimize,
                      grounding=args.grounding)
    except BudgetExhausted as exc:
        out.append(f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    if p is None:
        out.append("no_plan")
        return EXIT_FAIL
    out.extend(p.lines())
    if args.trace:
        out.extend(f"step {s}" for s in p.witness)
    return EXIT_OK


def _cmd_complete(args, out):
    df = _load(args.file)
    cfg = CompletionConfig(max_cps=args.max_cps, max_term_size=args.max_term_size)
    result = complete(list(df.rules.rules) + list(df.rules.equations), df.precedence, cfg)
    out.extend(f"rule {r.lhs} -> {r.rhs}" for r in result.rules)
    out.extend(f"equiv {e.lhs} <-> {e.rhs}" for e in result.equations)
    out.append(f"status {result.status}")
    for key in ("cps_generated", "cps_kept", "rewrite_ops"):
        out.append(f"{key} {int(result.stats[key])}")
    return EXIT_OK if result.saturated else EXIT_INCONCLUSIVE


def _cmd_synth(args, out):
    df = _load(args.file)
    theory, enc = _needs_theory(df, args.file)
    rules = build_r0(theory, enc) if args.level == 0 else build_r1(theory, enc)
    if args.level == 2:
        rules = build_r2(theory, enc, rules)
    out.extend(_rule_line(r) for r in rules.rules)
    out.extend(f"equiv {e.lhs} <-> {e.rhs}" for e in rules.equations)
    out.append(f"rule_count {len(rules.rules)}")
    return EXIT_OK


def _cmd_oracle(args, out):
    df = _load(args.file)
    _needs_theory(df, args.file)
    start, goal = _needs_ends(df, args.file)
    p = bfs_plan(df.theory, start, goal)
    if p is None:
        out.append("no_plan")
        return EXIT_FAIL
    out.extend(p.lines())
    return EXIT_OK


def _cmd_check(args, out):
    df = _load(args.file)
    theory, enc = _needs_theory(df, args.file)
    report = check_representation(theory, enc)
    out.extend(report.lines())
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_domain(args, out):
    try:
        theory, enc = make_domain(args.name, args.n, args.variant, positions=args.positions,
                                  towers=args.towers, bridge_slots=args.bridge_slots)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = emit(theory, enc)
    if args.emit == "-":
        out.append(text.rstrip("\n"))
    else:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.append(f"wrote {args.emit}")
    return EXIT_OK


def _cmd_check_support(args, out):
    df = _load(args.file)
    theory, enc = _needs_theory(df, args.file)
    t = parse_term(args.term, df.signature)
    res = is_action_support(theory, enc, t)
    out.append("true" if res.ok else "false")
    out.extend(f"certificate {c}" for c in res.certificates)
    if not res.ok and res.counterexample is not None:
        s, p = res.counterexample
        out.append(f"counterexample {s} at {'.'.join(map(str, p)) or 'root'}")
    return EXIT_OK if res.ok else EXIT_FAIL


_COMMANDS = {
    "plan": _cmd_plan, "complete": _cmd_complete, "synth": _cmd_synth, "oracle": _cmd_oracle,
    "check": _cmd_check, "domain": _cmd_domain, "check-support": _cmd_check_support,
}


def run(argv) -> tuple:
    """Run one command; returns ``(exit_status, output_lines)``."""
    out: list = []
    try:
        args = _parser().parse_args(list(argv))
        return _COMMANDS[args.command](args, out), out
    except UsageError as exc:
        return EXIT_USAGE, out + [f"error: {exc}"]
    except (DomainFileError, UnknownSymbol, ArityMismatch, InvalidRule) as exc:
        return EXIT_PARSE, out + [f"error: {exc}"]
    except BudgetExhausted as exc:
        return EXIT_INCONCLUSIVE, out + [f"inconclusive: {exc}"]
    except RewriteError as exc:
        return EXIT_FAIL, out + [f"error: {exc}"]


def main(argv=None) -> int:
    try:
        status, lines = run(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    stream = sys.stdout if status in (EXIT_OK, EXIT_FAIL) else sys.stderr
    for line in lines:
        print(line, file=stream)
    return status
