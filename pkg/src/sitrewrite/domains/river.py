"""Crossing a river over a bridge with single-person slots.

The state term is ``f(L, b1, ..., bB, R)``: ``L`` and ``R`` are the bank
lists, each ``b_i`` a bridge slot holding at most one person.  Lists are
built from ``g(person, rest)`` and ``bot``.  Reordering a bank list is a
rearrangement; moving a list head to an adjacent location is an action.
"""

from __future__ import annotations

import itertools

from ..errors import SizeOutOfRange
from ..ordering import Precedence
from ..rewrite import RewriteRule, RuleKind, RuleSet
from ..terms import App, Signature, Var, const
from ..theory import ActionId, Encoding, GroundTheory

BOT = const("bot")


def locations(bridge_slots: int) -> list:
    return ["left"] + [f"bridge{i}" for i in range(1, bridge_slots + 1)] + ["right"]


def make_list(people) -> App:
    t = BOT
    for p in reversed(list(people)):
        t = App("g", [const(str(p)), t])
    return t


def read_list(t, k):
    out = []
    while t != BOT:
        if t.is_var or t.head != "g" or len(t.args) != 2:
            return None
        p, t = t.args
        if p.is_var or p.args or not p.head.isdigit() or not 1 <= int(p.head) <= k:
            return None
        out.append(int(p.head))
    return out


def make_river(people: int, bridge_slots: int = 3):
    """River-crossing theory and encoding for ``people`` persons."""
    k = people
    if not 1 <= k <= 5:
        raise SizeOutOfRange(f"river needs 1 <= people <= 5, got {k}")
    if not 1 <= bridge_slots <= 5:
        raise SizeOutOfRange(f"river needs 1 <= bridge_slots <= 5, got {bridge_slots}")
    locs = locations(bridge_slots)
    nslots = len(locs)
    persons = [f"person{i}" for i in range(1, k + 1)]
    fluents = {p: tuple(locs) for p in persons}
    actions = []
    for p in range(1, k + 1):
        for i in range(nslots - 1):
            actions.append(ActionId("move", (f"person{p}", locs[i], locs[i + 1])))
            actions.append(ActionId("move", (f"person{p}", locs[i + 1], locs[i])))

    def chi(s):
        on_bridge = [v for v in s.values() if v.startswith("bridge")]
        return len(on_bridge) == len(set(on_bridge))

    def do(a, s):
        who, src, dst = a.args
        if s[who] != src:
            return None
        if dst.startswith("bridge") and any(v == dst for v in s.values()):
            return None
        return s.updated(**{who: dst})

    theory = GroundTheory(fluents, actions, do, chi, name=f"river{k}",
                          chi_name="builtin:river")

    sig = Signature([("f", nslots), ("g", 2), ("bot", 0)] + [(str(i), 0) for i in range(1, k + 1)])
    prec = Precedence(["f", "g"] + [str(i) for i in range(k, 0, -1)] + ["bot"])

    slots = [Var(f"s{i}") for i in range(nslots)]
    p, a = Var("p"), Var("a")
    rules = []

    def bridge(i):
        return 0 < i < nslots - 1

    for i in range(nslots - 1):
        for src, dst in ((i, i + 1), (i + 1, i)):
            lhs = list(slots)
            rhs = list(slots)
            if bridge(src):
                lhs[src], rhs[src] = App("g", [p, BOT]), BOT
            else:
                lhs[src], rhs[src] = App("g", [p, a]), a
            if bridge(dst):
                lhs[dst], rhs[dst] = BOT, App("g", [p, BOT])
            else:
                rhs[dst] = App("g", [p, slots[dst]])
            label = f"move(person{{p}},{locs[src]},{locs[dst]})"
            rules.append(RewriteRule(f"{locs[src]}_{locs[dst]}", App("f", lhs), App("f", rhs),
                                     label=label))
    x, y, z = Var("x"), Var("y"), Var("z")
    swap = RewriteRule("swap", App("g", [x, App("g", [y, z])]), App("g", [y, App("g", [x, z])]),
                       kind=RuleKind.REARRANGEMENT)
    rule_set = RuleSet(rules, [swap])

    def decode(t):
        if t.is_var or t.head != "f" or len(t.args) != nslots:
            return None
        out = {}
        for loc, sub in zip(locs, t.args):
            lst = read_list(sub, k)
            if lst is None:
                return None
            for q in lst:
                if f"person{q}" in out:
                    return None
                out[f"person{q}"] = loc
        return out if len(out) == k else None

    def groups(s):
        return [[q for q in range(1, k + 1) if s[f"person{q}"] == loc] for loc in locs]

    def construct(s):
        return App("f", [make_list(g) for g in groups(s)])

    def enumerate_terms():
        for s in theory.states():
            gs = groups(s)
            for left in itertools.permutations(gs[0]):
                for right in itertools.permutations(gs[-1]):
                    yield App("f", [make_list(left)] + [make_list(g) for g in gs[1:-1]]
                              + [make_list(right)])

    everyone = list(range(1, k + 1))
    start = App("f", [make_list(everyone)] + [BOT] * (nslots - 1))
    goal = App("f", [BOT] * (nslots - 1) + [make_list(everyone)])
    enc = Encoding("river", sig, prec, rule_set, theory, decode, enumerate_terms, construct,
                   invertible=True, start=start, goal=goal,
                   params={"n": k, "bridge_slots": bridge_slots})
    return theory, enc
