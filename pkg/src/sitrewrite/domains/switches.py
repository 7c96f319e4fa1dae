"""Light switches: ``n`` switches, each on or off."""

from __future__ import annotations

import itertools

from ..errors import SizeOutOfRange
from ..ordering import Precedence
from ..rewrite import RewriteRule, RuleSet
from ..terms import App, Signature, Var, const
from ..theory import ActionId, Encoding, GroundTheory

VARIANTS = ("basic", "indicator", "per_switch")
ON, OFF, TRUE, FALSE = const("on"), const("off"), const("true"), const("false")


def _theory(n: int, indicator: bool) -> GroundTheory:
    names = [f"switch{i}" for i in range(1, n + 1)]
    fluents = {p: ("off", "on") for p in names}
    if indicator:
        fluents["z"] = ("false", "true")
    actions = [ActionId(kind, (str(i),)) for i in range(1, n + 1) for kind in ("turn_on", "turn_off")]

    def do(a, s):
        p = f"switch{a.args[0]}"
        want = "on" if a.name == "turn_on" else "off"
        if s[p] == want:
            return None
        d = dict(s)
        d[p] = want
        if indicator:
            d["z"] = "true" if all(d[q] == "on" for q in names) else "false"
        return d

    chi = None
    if indicator:
        def chi(s):
            return (s["z"] == "true") == all(s[q] == "on" for q in names)
    name = f"switches-{'indicator' if indicator else 'basic'}{n}"
    return GroundTheory(fluents, actions, do, chi, name=name,
                        chi_name="builtin:switches_indicator" if indicator else "all")


def make_switches(n: int, variant: str = "basic"):
    """Switches theory and encoding; ``variant`` is basic, indicator or per_switch."""
    if not 1 <= n <= 12:
        raise SizeOutOfRange(f"switches needs 1 <= n <= 12, got {n}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown switches variant {variant!r}; expected one of {VARIANTS}")
    indicator = variant == "indicator"
    theory = _theory(n, indicator)
    names = [f"switch{i}" for i in range(1, n + 1)]
    val = {"on": ON, "off": OFF}

    if variant == "basic":
        sig = Signature([("f", n), ("on", 0), ("off", 0)])
        prec = Precedence(["off", "on", "f"])
        rules = RuleSet([
            RewriteRule("turn_on", OFF, ON, label="turn_on({pos})"),
            RewriteRule("turn_off", ON, OFF, label="turn_off({pos})"),
        ])

        def decode(t):
            if t.is_var or t.head != "f" or len(t.args) != n:
                return None
            if any(a not in (ON, OFF) for a in t.args):
                return None
            return {p: a.head for p, a in zip(names, t.args)}

        def construct(s):
            return App("f", [val[s[p]] for p in names])

    elif variant == "per_switch":
        gs = [f"g{i}" for i in range(1, n + 1)]
        sig = Signature([("f", n), ("on", 0), ("off", 0)] + [(g, 1) for g in gs])
        prec = Precedence(["off", "on", "f"] + gs)
        rules = []
        for i, g in enumerate(gs, 1):
            rules.append(RewriteRule(f"turn_on{i}", App(g, [OFF]), App(g, [ON]), label=f"turn_on({i})"))
            rules.append(RewriteRule(f"turn_off{i}", App(g, [ON]), App(g, [OFF]), label=f"turn_off({i})"))
        rules = RuleSet(rules)

        def decode(t):
            if t.is_var or t.head != "f" or len(t.args) != n:
                return None
            out = {}
            for p, g, a in zip(names, gs, t.args):
                if a.is_var or a.head != g or a.args[0] not in (ON, OFF):
                    return None
                out[p] = a.args[0].head
            return out

        def construct(s):
            return App("f", [App(g, [val[s[p]]]) for g, p in zip(gs, names)])

    else:
        sig = Signature([("f", n + 1), ("on", 0), ("off", 0), ("true", 0), ("false", 0)])
        prec = Precedence(["f", "on", "off", "true", "false"])
        xs = [Var(f"x{i}") for i in range(1, n + 1)]
        z = Var("z")
        rules = []

        def row(i, a, rest=None):
            args = list(rest if rest is not None else xs)
            args[i] = a
            return args

        for i in range(n):
            rules.append(RewriteRule(f"off{i + 1}", App("f", row(i, ON) + [z]),
                                     App("f", row(i, OFF) + [FALSE]), label=f"turn_off({i + 1})"))
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                base = list(xs)
                base[j] = OFF
                rules.append(RewriteRule(f"on{i + 1}_{j + 1}", App("f", row(i, OFF, base) + [FALSE]),
                                         App("f", row(i, ON, base) + [FALSE]), label=f"turn_on({i + 1})"))
        for i in range(n):
            ons = [ON] * n
            rules.append(RewriteRule(f"on{i + 1}_all", App("f", row(i, OFF, ons) + [FALSE]),
                                     App("f", ons + [TRUE]), label=f"turn_on({i + 1})"))
        rules = RuleSet(rules)

        def decode(t):
            if t.is_var or t.head != "f" or len(t.args) != n + 1:
                return None
            if any(a not in (ON, OFF) for a in t.args[:n]) or t.args[n] not in (TRUE, FALSE):
                return None
            out = {p: a.head for p, a in zip(names, t.args)}
            out["z"] = t.args[n].head
            return out

        def construct(s):
            return App("f", [val[s[p]] for p in names] + [const(s["z"])])

    def enumerate_terms():
        for s in theory.states():
            yield construct(s)

    start = {p: "off" for p in names}
    start[names[-1]] = "on"
    goal = {p: "on" for p in names}
    goal[names[-1]] = "off"
    if n == 1:
        goal = {names[0]: "off"}
    if indicator:
        for d in (start, goal):
            d["z"] = "true" if all(d[p] == "on" for p in names) else "false"
    enc = Encoding(f"switches/{variant}", sig, prec, rules, theory, decode, enumerate_terms,
                   construct, invertible=True,
                   start=construct(theory.assignment(start)), goal=construct(theory.assignment(goal)),
                   params={"n": n, "variant": variant})
    return theory, enc
