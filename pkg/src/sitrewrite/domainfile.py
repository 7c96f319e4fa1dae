"""Plain-text domain files.

A file names a built-in theory on its ``domain:`` line and then spells out
the encoding: signature, precedence, fluents, constraint, rules,
rearrangement equations and optionally a start and a goal term::

    domain: switches n=3 variant=basic
    signature: f/3 on/0 off/0
    prec: off > on > f
    fluents:
      switch1: off on
    chi: all
    states: enumerate
    rule action "turn_on({pos})" off -> on
    equiv g(?x,g(?y,?z)) <-> g(?y,g(?x,?z))
    start: f(off,off,on)
    goal: f(on,on,off)

Blank lines and lines starting with ``#`` are ignored.  The rules in the
file replace the built-in domain's rules.  A file without a ``domain:``
line has no theory; it can still be completed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ArityMismatch, DomainFileError, InvalidRule, MissingPrec, ParseError, UnknownSymbol
from .ordering import Precedence
from .rewrite import RewriteRule, RuleKind, RuleSet
from .terms import Signature, parse_term

__all__ = ["DomainFile", "parse_domain_file", "emit", "load_domain_file"]


@dataclass
class DomainFile:
    signature: Signature
    precedence: Precedence
    rules: RuleSet
    theory: object = None
    encoding: object = None
    start: object = None
    goal: object = None
    header: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.signature, self.precedence, self.rules, self.theory, self.encoding,
                     self.start, self.goal))


def _header_of(enc) -> str:
    name = enc.name.split("/")[0]
    parts = [f"domain: {name}"] + [f"{k}={v}" for k, v in enc.params.items()]
    return " ".join(parts)


def _rule_line(rule) -> str:
    if rule.label is not None:
        return f'rule action "{rule.label}" {rule.lhs} -> {rule.rhs}'
    return f"rule {rule.lhs} -> {rule.rhs}"


def emit(theory, enc, rules: RuleSet | None = None) -> str:
    """Render a theory and its encoding in the domain-file format."""
    rules = enc.rules if rules is None else rules
    lines = [_header_of(enc),
             "signature: " + " ".join(f"{s.name}/{s.arity}" for s in enc.signature),
             f"prec: {enc.precedence}",
             "fluents:"]
    for name, values in theory.fluents.items():
        lines.append(f"  {name}: " + " ".join(str(v) for v in values))
    lines.append(f"chi: {theory.chi_name}")
    lines.append("states: enumerate")
    lines.extend(_rule_line(r) for r in rules.rules)
    lines.extend(f"equiv {e.lhs} <-> {e.rhs}" for e in rules.equations)
    if enc.start is not None:
        lines.append(f"start: {enc.start}")
    if enc.goal is not None:
        lines.append(f"goal: {enc.goal}")
    return "\n".join(lines) + "\n"


_RULE = re.compile(r'^rule(?:\s+action\s+"(?P<label>[^"]*)")?\s+(?P<body>.*)$')
_SIG = re.compile(r"^(?P<name>[A-Za-z0-9_]+)/(?P<arity>\d+)$")


def _build_theory(header: dict, lineno: int):
    from .domains import DOMAINS, make_domain

    name = header.get("name")
    if name not in DOMAINS:
        raise ParseError(f"unknown domain {name!r}", lineno, 1)
    kw = {}
    try:
        n = int(header["n"])
        for key in ("positions", "towers", "bridge_slots"):
            if key in header:
                kw[key] = int(header[key])
    except (KeyError, ValueError):
        raise ParseError("domain line needs integer n=K and integer options", lineno, 1) from None
    if "variant" in header:
        kw["variant"] = header["variant"]
    try:
        return make_domain(name, n, **kw)
    except ValueError as exc:
        raise ParseError(str(exc), lineno, 1) from None


def parse_domain_file(text: str) -> DomainFile:
    """Parse a domain file; errors carry 1-based line and column."""
    header: dict = {}
    header_line = None
    signature = None
    prec = None
    fluents: dict = {}
    chi = None
    rule_lines, equiv_lines, ends = [], [], {}
    in_fluents = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip()
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        indented = line[:1].isspace()
        if in_fluents and indented:
            name, sep, values = stripped.partition(":")
            if not sep or not re.fullmatch(r"[A-Za-z0-9_]+", name.strip()) or not values.split():
                raise ParseError("expected '<fluent>: <value> <value> ...'", lineno,
                                 len(line) - len(line.lstrip()) + 1)
            fluents[name.strip()] = tuple(values.split())
            continue
        in_fluents = False
        col = len(line) - len(line.lstrip()) + 1
        key, _, rest = stripped.partition(":")
        if stripped.startswith("rule"):
            rule_lines.append((lineno, col, stripped))
        elif stripped.startswith("equiv"):
            equiv_lines.append((lineno, col, stripped))
        elif key == "domain":
            words = rest.split()
            if not words:
                raise ParseError("domain line names no domain", lineno, col)
            header = {"name": words[0]}
            for w in words[1:]:
                k, eq, v = w.partition("=")
                if not eq:
                    raise ParseError(f"expected key=value, got {w!r}", lineno, line.find(w) + 1)
                header[k] = v
            header_line = lineno
        elif key == "signature":
            signature = Signature()
            for w in rest.split():
                m = _SIG.match(w)
                if m is None:
                    raise ParseError(f"expected name/arity, got {w!r}", lineno, line.find(w) + 1)
                try:
                    signature.add(m.group("name"), int(m.group("arity")))
                except (ArityMismatch, ValueError) as exc:
                    raise ParseError(str(exc), lineno, line.find(w) + 1) from None
        elif key == "prec":
            try:
                prec = Precedence.parse(rest)
            except (ParseError, ValueError) as exc:
                raise ParseError(str(exc).split(": ", 1)[-1], lineno, col) from None
        elif key == "fluents":
            in_fluents = True
        elif key == "chi":
            chi = rest.strip()
            if chi != "all" and not chi.startswith("builtin:"):
                raise ParseError("chi must be 'all' or 'builtin:<name>'", lineno, col)
        elif key == "states":
            if rest.strip() != "enumerate":
                raise ParseError("only 'states: enumerate' is supported", lineno, col)
        elif key in ("start", "goal"):
            ends[key] = (lineno, line.index(":") + 2, rest)
        else:
            raise ParseError(f"unrecognized line {stripped!r}", lineno, col)

    if signature is None:
        raise ParseError("missing 'signature:' line", 1, 1)
    if prec is None:
        raise MissingPrec("missing 'prec:' line", 1, 1)
    missing = [s for s in signature.names() if s not in prec]
    extra = [s for s in prec.symbols if s not in signature]
    if missing or extra:
        raise MissingPrec(f"precedence must list every symbol once (missing {missing}, "
                          f"undeclared {extra})", None, None)

    def term(lineno, col, text):
        lead = len(text) - len(text.lstrip())
        return parse_term(text.strip(), signature, line=lineno, column_offset=col - 1 + lead)

    rules, equations = [], []
    for lineno, col, text in rule_lines:
        m = _RULE.match(text)
        if m is None or "->" not in m.group("body"):
            raise ParseError("expected 'rule <lhs> -> <rhs>'", lineno, col)
        body = m.group("body")
        body_col = col + m.start("body")
        left, right = body.split("->", 1)
        lhs = term(lineno, body_col, left)
        rhs = term(lineno, body_col + len(left) + 2, right)
        try:
            rules.append(RewriteRule(f"r{len(rules) + 1}", lhs, rhs, RuleKind.ACTION, m.group("label")))
        except InvalidRule as exc:
            raise InvalidRule(f"line {lineno}: {exc}") from None
    for lineno, col, text in equiv_lines:
        body = text[len("equiv"):]
        if "<->" not in body:
            raise ParseError("expected 'equiv <lhs> <-> <rhs>'", lineno, col)
        left, right = body.split("<->", 1)
        base = col + len("equiv")
        lhs = term(lineno, base, left)
        rhs = term(lineno, base + len(left) + 3, right)
        equations.append(RewriteRule(f"e{len(equations) + 1}", lhs, rhs, RuleKind.REARRANGEMENT))
    try:
        rule_set = RuleSet(rules, equations)
    except InvalidRule as exc:
        raise InvalidRule(str(exc)) from None

    out = DomainFile(signature, prec, rule_set, header=header)
    if header_line is not None:
        theory, enc = _build_theory(header, header_line)
        if fluents and {k: tuple(map(str, v)) for k, v in theory.fluents.items()} != fluents:
            raise ParseError(f"fluents differ from the built-in domain {header['name']!r}",
                             header_line, 1)
        if chi is not None and chi != theory.chi_name:
            raise ParseError(f"chi {chi!r} differs from the built-in domain's {theory.chi_name!r}",
                             header_line, 1)
        out.theory = theory
        out.encoding = enc.with_rules(rule_set, prec, signature)
    for key, (lineno, col, text) in ends.items():
        t = term(lineno, col, text)
        if out.encoding is not None and not out.encoding.in_T(t):
            raise ParseError(f"{key} term {t} encodes no state", lineno, col)
        setattr(out, key, t)
    if out.encoding is not None:
        out.encoding.start = out.start
        out.encoding.goal = out.goal
    return out


def load_domain_file(path) -> DomainFile:
    with open(path, encoding="utf-8") as fh:
        return parse_domain_file(fh.read())
