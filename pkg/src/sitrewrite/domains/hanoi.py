"""Towers of Hanoi with three pegs.

``disk1`` is the largest disk.  A disk may move when no smaller disk sits on
its source or target peg.  The nested shape ``f(x1, f(x2, ... f(xn, bot)))``
lets rules act on the subterm describing the smaller disks.
"""

from __future__ import annotations

import itertools

from ..errors import SizeOutOfRange
from ..ordering import Precedence
from ..rewrite import RewriteRule, RuleSet
from ..terms import App, Signature, Var, const
from ..theory import ActionId, Encoding, GroundTheory

PEGS = (1, 2, 3)
BOT = const("bot")
SHAPES = ("nested", "flat")


def peg(i: int) -> App:
    return const(str(i))


def nested(pegs) -> App:
    t = BOT
    for p in reversed(list(pegs)):
        t = App("f", [peg(p), t])
    return t


def flat(pegs) -> App:
    return App("f", [peg(p) for p in pegs])


def legal(n: int, pegs: tuple, d: int, src: int, dst: int) -> bool:
    """May disk ``d`` (1 = largest) move from ``src`` to ``dst``?"""
    if src == dst or pegs[d - 1] != src:
        return False
    return all(pegs[e] not in (src, dst) for e in range(d, n))


def _move_pairs():
    # unordered peg pairs (i, k) with the remaining peg j
    for i, k in ((1, 2), (1, 3), (2, 3)):
        yield i, 6 - i - k, k


def _decode_nested(t, n):
    out = []
    for _ in range(n):
        if t.is_var or t.head != "f" or len(t.args) != 2:
            return None
        x, t = t.args
        if x.is_var or x.args or x.head not in ("1", "2", "3"):
            return None
        out.append(int(x.head))
    return out if t == BOT else None


def _decode_flat(t, n):
    if t.is_var or t.head != "f" or len(t.args) != n:
        return None
    out = []
    for x in t.args:
        if x.is_var or x.args or x.head not in ("1", "2", "3"):
            return None
        out.append(int(x.head))
    return out


def hanoi_rules(n: int, shape: str) -> list:
    """Both directions of every move rule, smallest disk first."""
    rules = []
    for d in range(n, 0, -1):
        below = n - d  # number of smaller disks
        for i, j, k in _move_pairs():
            if shape == "nested":
                tail = nested([j] * below) if d < n else BOT
                a = App("f", [peg(i), tail])
                b = App("f", [peg(k), tail])
            else:
                pre = [Var(f"x{e}") for e in range(1, d)]
                smaller = [peg(j)] * below
                a = App("f", pre + [peg(i)] + smaller)
                b = App("f", pre + [peg(k)] + smaller)
            rules.append(RewriteRule(f"d{d}_{i}{k}", a, b))
            rules.append(RewriteRule(f"d{d}_{k}{i}", b, a))
    return rules


def _single(n: int, shape: str):
    fluents = {f"disk{d}": PEGS for d in range(1, n + 1)}
    actions = [ActionId("move", (f"disk{d}", str(a), str(b)))
               for d in range(1, n + 1) for a in PEGS for b in PEGS if a != b]

    def do(act, s):
        d = int(act.args[0][4:])
        src, dst = int(act.args[1]), int(act.args[2])
        pegs = tuple(s[f"disk{e}"] for e in range(1, n + 1))
        if not legal(n, pegs, d, src, dst):
            return None
        return s.updated(**{f"disk{d}": dst})

    theory = GroundTheory(fluents, actions, do, name=f"hanoi{n}")
    return theory


def make_hanoi(n: int, shape: str = "nested", towers: int | None = None):
    """Hanoi theory and encoding for ``n`` disks.

    With ``towers=m`` the state is ``g(t1, ..., tm)`` of independent nested
    instances; fluents become ``t<i>_disk<d>``.
    """
    if not 1 <= n <= 8:
        raise SizeOutOfRange(f"hanoi needs 1 <= n <= 8, got {n}")
    if shape not in SHAPES:
        raise ValueError(f"unknown hanoi shape {shape!r}; expected one of {SHAPES}")
    if towers is not None:
        return _make_towers(n, towers)
    theory = _single(n, shape)
    disks = [f"disk{d}" for d in range(1, n + 1)]
    build = nested if shape == "nested" else flat
    dec = _decode_nested if shape == "nested" else _decode_flat
    if shape == "nested":
        sig = Signature([("f", 2), ("bot", 0), ("1", 0), ("2", 0), ("3", 0)])
    else:
        sig = Signature([("f", n), ("1", 0), ("2", 0), ("3", 0)])
    prec = Precedence(["3", "2", "1", "f"] + (["bot"] if shape == "nested" else []))

    def decode(t):
        pegs = dec(t, n)
        return None if pegs is None else dict(zip(disks, pegs))

    def construct(s):
        return build([s[d] for d in disks])

    def enumerate_terms():
        for pegs in itertools.product(PEGS, repeat=n):
            yield build(pegs)

    enc = Encoding(f"hanoi/{shape}", sig, prec, RuleSet(hanoi_rules(n, shape)), theory,
                   decode, enumerate_terms, construct, invertible=True,
                   start=build([1] * n), goal=build([3] * n),
                   params={"n": n, "variant": shape})
    return theory, enc


def _make_towers(n: int, m: int):
    if not 1 <= m <= 4:
        raise SizeOutOfRange(f"hanoi towers needs 1 <= m <= 4, got {m}")
    fl = [[f"t{i}_disk{d}" for d in range(1, n + 1)] for i in range(1, m + 1)]
    fluents = {p: PEGS for row in fl for p in row}
    actions = [ActionId("move", (f"t{i}", f"disk{d}", str(a), str(b)))
               for i in range(1, m + 1) for d in range(1, n + 1)
               for a in PEGS for b in PEGS if a != b]

    def do(act, s):
        i = int(act.args[0][1:])
        d = int(act.args[1][4:])
        src, dst = int(act.args[2]), int(act.args[3])
        pegs = tuple(s[p] for p in fl[i - 1])
        if not legal(n, pegs, d, src, dst):
            return None
        return s.updated(**{fl[i - 1][d - 1]: dst})

    theory = GroundTheory(fluents, actions, do, name=f"hanoi{n}x{m}")
    sig = Signature([("g", m), ("f", 2), ("bot", 0), ("1", 0), ("2", 0), ("3", 0)])
    prec = Precedence(["3", "2", "1", "g", "f", "bot"])

    def decode(t):
        if t.is_var or t.head != "g" or len(t.args) != m:
            return None
        out = {}
        for row, sub in zip(fl, t.args):
            pegs = _decode_nested(sub, n)
            if pegs is None:
                return None
            out.update(zip(row, pegs))
        return out

    def construct(s):
        return App("g", [nested([s[p] for p in row]) for row in fl])

    def enumerate_terms():
        for s in theory.states():
            yield construct(s)

    enc = Encoding("hanoi/towers", sig, prec, RuleSet(hanoi_rules(n, "nested")), theory,
                   decode, enumerate_terms, construct, invertible=True,
                   start=App("g", [nested([1] * n)] * m), goal=App("g", [nested([3] * n)] * m),
                   params={"n": n, "variant": "nested", "towers": m})
    return theory, enc
