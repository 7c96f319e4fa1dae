"""Blocks world: towers of blocks standing at fixed positions.

The state term is a list ``f(t(S1,p1), f(t(S2,p2), ... bot))`` of towers;
each ``S`` lists blocks top first with ``g(block, rest)`` and ``bot``.
Exchanging adjacent towers is a rearrangement; moving the top block of a
tower onto the next tower (or back) is an action.
"""

from __future__ import annotations

import itertools

from ..errors import SizeOutOfRange
from ..ordering import Precedence
from ..rewrite import RewriteRule, RuleKind, RuleSet
from ..terms import App, Signature, Var, const
from ..theory import ActionId, Encoding, GroundTheory

BOT = const("bot")


def stack_term(blocks) -> App:
    t = BOT
    for b in reversed(list(blocks)):
        t = App("g", [const(b), t])
    return t


def towers_term(towers) -> App:
    """``towers`` is a sequence of (position, blocks-top-first)."""
    t = BOT
    for pos, blocks in reversed(list(towers)):
        t = App("f", [App("t", [stack_term(blocks), const(pos)]), t])
    return t


def make_blocks(blocks: int, positions: int):
    """Blocks-world theory and encoding with ``blocks`` blocks and ``positions`` places."""
    b, m = blocks, positions
    if not 1 <= b <= 4:
        raise SizeOutOfRange(f"blocks needs 1 <= blocks <= 4, got {b}")
    if not 1 <= m <= 3:
        raise SizeOutOfRange(f"blocks needs 1 <= positions <= 3, got {m}")
    names = [f"b{i}" for i in range(1, b + 1)]
    places = [f"p{i}" for i in range(1, m + 1)]
    fluents = {f"on_{x}": tuple(n for n in names if n != x) + tuple(places) for x in names}

    def stacks(s):
        """position -> blocks top first, or None when not well formed."""
        below = {x: s[f"on_{x}"] for x in names}
        above = {}
        for x, y in below.items():
            if y in above:
                return None
            above[y] = x
        out = {}
        seen = set()
        for p in places:
            col = []
            cur = above.get(p)
            while cur is not None:
                if cur in seen:
                    return None
                seen.add(cur)
                col.append(cur)
                cur = above.get(cur)
            out[p] = list(reversed(col))
        return out if len(seen) == b else None

    def chi(s):
        return stacks(s) is not None

    actions = [ActionId("move", (x, p)) for x in names for p in places]

    def do(a, s):
        x, p = a.args
        st = stacks(s)
        if st is None:
            return None
        src = next(q for q in places if x in st[q])
        if src == p or st[src][0] != x:
            return None
        return s.updated(**{f"on_{x}": st[p][0] if st[p] else p})

    theory = GroundTheory(fluents, actions, do, chi, name=f"blocks{b}x{m}",
                          chi_name="builtin:blocks")

    sig = Signature([("f", 2), ("t", 2), ("g", 2), ("bot", 0)] + [(n, 0) for n in names]
                    + [(p, 0) for p in places])
    prec = Precedence(["f", "t", "g"] + list(reversed(names)) + list(reversed(places)) + ["bot"])

    b1, s1, s2, x1, x2, z = (Var(v) for v in ("b1", "s1", "s2", "x1", "x2", "z"))
    t1, t2, x = Var("t1"), Var("t2"), Var("x")

    def tw(s, p):
        return App("t", [s, p])

    def pair(u, v):
        return App("f", [u, App("f", [v, z])])

    fwd = RewriteRule("move_down", pair(tw(App("g", [b1, s1]), x1), tw(s2, x2)),
                      pair(tw(s1, x1), tw(App("g", [b1, s2]), x2)), label="move({b1},{x2})")
    back = RewriteRule("move_up", pair(tw(s1, x1), tw(App("g", [b1, s2]), x2)),
                       pair(tw(App("g", [b1, s1]), x1), tw(s2, x2)), label="move({b1},{x1})")
    exch = RewriteRule("exchange", App("f", [t1, App("f", [t2, x])]),
                       App("f", [t2, App("f", [t1, x])]), kind=RuleKind.REARRANGEMENT)
    rule_set = RuleSet([fwd, back], [exch])

    def decode(t):
        seen_pos = set()
        on = {}
        while t != BOT:
            if t.is_var or t.head != "f" or len(t.args) != 2:
                return None
            tower, t = t.args
            if tower.is_var or tower.head != "t" or len(tower.args) != 2:
                return None
            lst, pos = tower.args
            if pos.is_var or pos.args or pos.head not in places or pos.head in seen_pos:
                return None
            seen_pos.add(pos.head)
            col = []
            while lst != BOT:
                if lst.is_var or lst.head != "g" or len(lst.args) != 2:
                    return None
                blk, lst = lst.args
                if blk.is_var or blk.args or blk.head not in names:
                    return None
                col.append(blk.head)
            for upper, lower in zip(col, col[1:] + [pos.head]):
                if f"on_{upper}" in on:
                    return None
                on[f"on_{upper}"] = lower
        if seen_pos != set(places) or len(on) != b:
            return None
        return {f"on_{n}": on[f"on_{n}"] for n in names}

    def construct(s):
        st = stacks(s)
        return None if st is None else towers_term([(p, st[p]) for p in places])

    def enumerate_terms():
        for s in theory.states():
            st = stacks(s)
            for order in itertools.permutations(places):
                yield towers_term([(p, st[p]) for p in order])

    start = towers_term([(p, names if i == 0 else []) for i, p in enumerate(places)])
    # moving the blocks one by one reverses the stack
    goal = towers_term([(p, names[::-1] if i == m - 1 else []) for i, p in enumerate(places)])
    enc = Encoding("blocks", sig, prec, rule_set, theory, decode, enumerate_terms, construct,
                   invertible=True, start=start, goal=goal,
                   params={"n": b, "positions": m})
    return theory, enc
