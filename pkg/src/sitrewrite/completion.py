"""Critical pairs and unfailing (ordered) completion with derivation tracking.

Every equation the procedure ever creates is archived with a derivation: a
chain of links ``(item_id, forward, position)`` that rewrites its left side
into its right side using older items.  Input equations have no chain.
Derivations survive inter-reduction, so any step made with a completed rule
can later be expanded into steps of the input system (see :func:`expand`).
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BudgetExhausted, InconsistentStep
from .ordering import Order, Precedence, lpo_compare, lpo_greater
from .rewrite import RewriteStep, Rewriter, replay
from .terms import (App, Var, apply_subst, match_lhs, positions, rename_apart, replace_at,
                    subterm_at, subterms, unify, variables)

__all__ = [
    "Equation", "CompletionConfig", "CompletionResult", "ProofTrace",
    "critical_pairs", "complete", "join", "expand", "cost_trend",
]


@dataclass(frozen=True, eq=False)
class Equation:
    """An equation ``left = right``; as a rule it reads ``lhs -> rhs``.

    ``origin`` is ``("input",)``, ``("cp", parent_a, parent_b, position)``
    or ``("simplified", parent)``.  ``links`` is the derivation chain.
    """
    id: int
    lhs: object
    rhs: object
    origin: tuple = ("input",)
    links: tuple = ()
    source: object = None

    @property
    def left(self):
        return self.lhs

    @property
    def right(self):
        return self.rhs

    @property
    def is_input(self):
        return self.origin[0] == "input"

    @property
    def weight(self):
        return self.lhs.size + self.rhs.size

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"

    def __repr__(self):
        return f"Equation({self.id}, {self.lhs}, {self.rhs}, {self.origin[0]})"


@dataclass(frozen=True)
class CompletionConfig:
    max_cps: int = 20_000
    max_term_size: int = 100
    max_rewrite_ops: int = 2_000_000
    max_generated: int | None = None

    def __post_init__(self):
        if self.max_cps <= 0 or self.max_term_size <= 0 or self.max_rewrite_ops <= 0:
            raise ValueError("completion limits must be positive")
        if self.max_generated is not None and self.max_generated <= 0:
            raise ValueError("completion limits must be positive")


@dataclass
class CompletionResult:
    rules: list
    equations: list
    prec: Precedence
    status: str
    stats: dict
    archive: dict = field(repr=False, default_factory=dict)

    @property
    def saturated(self):
        return self.status == "saturated"

    def rewriter(self) -> Rewriter:
        return Rewriter(self.prec, self.rules, self.equations)

    def rule_pairs(self) -> set:
        return {(r.lhs, r.rhs) for r in self.rules}


@dataclass
class ProofTrace:
    """A valley proof ``start =>* meet <=* goal``."""
    start: object
    goal: object
    meet: object
    left: list
    right: list
    archive: dict | None = field(default=None, repr=False)

    def replays(self) -> bool:
        try:
            return (replay(self.start, self.left) == self.meet
                    and replay(self.goal, self.right) == self.meet)
        except InconsistentStep:
            return False


# ---------------------------------------------------------------------------
# critical pairs

def _directions(item, prec, oriented):
    """(lhs, rhs, forward) pairs usable for overlapping."""
    if oriented:
        return [(item.lhs, item.rhs, True)]
    out = []
    for l, r, fwd in ((item.lhs, item.rhs, True), (item.rhs, item.lhs, False)):
        if l.is_var or variables(r) - variables(l):
            continue
        if prec is not None and lpo_compare(prec, l, r) in (Order.LESS, Order.EQUAL):
            continue
        out.append((l, r, fwd))
    return out


def _orientation_ok(prec, oriented, l, r):
    if oriented or prec is None:
        return True
    return lpo_compare(prec, l, r) not in (Order.LESS, Order.EQUAL)


def _overlaps(a, a_oriented, b, b_oriented, prec, skip_root):
    """Overlaps of a's left side into non-variable positions of b's left side."""
    out = []
    for al, ar, afwd in _directions(a, prec, a_oriented):
        for bl0, br0, bfwd in _directions(b, prec, b_oriented):
            taken = variables(al) | variables(ar)
            pair = rename_apart(App("=", (bl0, br0)), taken)
            bl, br = pair.args
            for p in positions(bl):
                if skip_root and not p:
                    continue
                sub = subterm_at(bl, p)
                if sub.is_var:
                    continue
                if not al.is_var and (sub.head != al.head or len(sub.args) != len(al.args)):
                    continue
                theta = unify(al, sub)
                if theta is None:
                    continue
                alt, art = apply_subst(al, theta), apply_subst(ar, theta)
                blt, brt = apply_subst(bl, theta), apply_subst(br, theta)
                if not _orientation_ok(prec, a_oriented, alt, art):
                    continue
                if not _orientation_ok(prec, b_oriented, blt, brt):
                    continue
                peak = blt
                s = replace_at(peak, p, art)
                t = brt
                links = ((a.id, not afwd, p), (b.id, bfwd, ()))
                out.append((s, t, peak, p, links))
    return out


_cp_ids = itertools.count(1_000_000_000)


def critical_pairs(r1, r2, prec: Precedence | None = None, *, r1_oriented: bool = True,
                   r2_oriented: bool = True) -> list[Equation]:
    """Critical pairs between two rules or equations.

    Overlaps r1's left side into non-variable positions of r2's left side and
    symmetrically; the root overlap is reported once.  Equations (not
    oriented) are used in each direction whose instance is not increasing
    under ``prec``.  The resulting equations carry the peak derivation.
    """
    raw = _overlaps(r1, r1_oriented, r2, r2_oriented, prec, skip_root=False)
    if r2 is not r1:
        raw += _overlaps(r2, r2_oriented, r1, r1_oriented, prec, skip_root=True)
    out = []
    for s, t, peak, p, links in raw:
        out.append(Equation(next(_cp_ids), s, t, ("cp", r1.id, r2.id, p), links))
    return out


# ---------------------------------------------------------------------------
# completion

def _canon(l, r):
    """Variant-invariant key of an unordered pair."""
    def rn(pair):
        names = {}
        def walk(t):
            if t.is_var:
                if t.name not in names:
                    names[t.name] = Var(f"v{len(names)}")
                return names[t.name]
            if t.ground:
                return t
            return App(t.head, [walk(a) for a in t.args])
        return (walk(pair[0]), walk(pair[1]))
    a, b = rn((l, r)), rn((r, l))
    return min(a, b, key=lambda x: (str(x[0]), str(x[1])))


class _Completion:
    def __init__(self, prec: Precedence, cfg: CompletionConfig):
        self.prec = prec
        self.cfg = cfg
        self.archive: dict[int, Equation] = {}
        self.ids = itertools.count()
        self.rw = Rewriter(prec)
        self.rules: dict[int, Equation] = {}
        self.equations: dict[int, Equation] = {}
        self.pending: list = []
        self.active_keys: set = set()
        self.incomplete = False
        self.stats = {"cps_generated": 0, "cps_kept": 0, "rewrite_ops": 0,
                      "processed": 0, "rules": 0, "equations": 0}
        self._subterm_cache: dict = {}

    def new(self, lhs, rhs, origin, links=(), source=None) -> Equation:
        e = Equation(next(self.ids), lhs, rhs, origin, tuple(links), source)
        self.archive[e.id] = e
        return e

    def push(self, e: Equation):
        heapq.heappush(self.pending, (e.weight, e.id))

    def add_input(self, lhs, rhs, source=None):
        e = self.new(lhs, rhs, ("input",), source=source)
        self.push(e)
        return e

    def _norm(self, t):
        nf, steps = self.rw.normalize(t, budget=None)
        self.stats["rewrite_ops"] += len(steps)
        return nf, steps

    @staticmethod
    def _links(steps):
        return [(s.rule.id, s.forward, s.position) for s in steps]

    @staticmethod
    def _back(steps):
        return [(s.rule.id, not s.forward, s.position) for s in reversed(steps)]

    def _subterm_set(self, t):
        hit = self._subterm_cache.get(t)
        if hit is None:
            hit = frozenset(subterms(t))
            if len(self._subterm_cache) > 200_000:
                self._subterm_cache.clear()
            self._subterm_cache[t] = hit
        return hit

    def _reducible_by(self, single: Rewriter, item: Equation, oriented: bool, t) -> bool:
        if oriented and item.lhs.ground:
            return item.lhs in self._subterm_set(t)
        return single.reducible(t)

    def run(self):
        cfg = self.cfg
        while self.pending:
            if (self.stats["processed"] >= cfg.max_cps or self.stats["rewrite_ops"] > cfg.max_rewrite_ops
                    or (cfg.max_generated is not None
                        and self.stats["cps_generated"] > cfg.max_generated)):
                self.incomplete = True
                return
            _, eid = heapq.heappop(self.pending)
            eq = self.archive[eid]
            self.stats["processed"] += 1
            s, s_steps = self._norm(eq.lhs)
            t, t_steps = self._norm(eq.rhs)
            if s == t:
                continue
            if s.size > cfg.max_term_size or t.size > cfg.max_term_size:
                self.incomplete = True
                continue
            key = _canon(s, t)
            if key in self.active_keys:
                continue
            if s_steps or t_steps:
                links = self._back(s_steps) + [(eq.id, True, ())] + self._links(t_steps)
                d = self.new(s, t, ("simplified", eq.id), links)
            else:
                d = eq
            o = lpo_compare(self.prec, s, t)
            if o is Order.GREATER:
                item, oriented = d, True
            elif o is Order.LESS:
                item = self.new(t, s, ("simplified", d.id), [(d.id, False, ())])
                oriented = True
            else:
                item, oriented = d, False
            if eq.origin[0] == "cp":
                self.stats["cps_kept"] += 1
            self.activate(item, oriented, key)

    def activate(self, item: Equation, oriented: bool, key):
        single = Rewriter(self.prec)
        if oriented:
            single.add_rule(item)
            self.rw.add_rule(item)
        else:
            single.add_equation(item)
            self.rw.add_equation(item)
        # inter-reduce existing rules and equations with the newcomer
        for rid, r in list(self.rules.items()):
            if self._reducible_by(single, item, oriented, r.lhs):
                self._retire(rid, r, True)
                self.push(r)
            elif self._reducible_by(single, item, oriented, r.rhs):
                self._retire(rid, r, True)
                nf, steps = self._norm(r.rhs)
                nr = self.new(r.lhs, nf, ("simplified", r.id), [(r.id, True, ())] + self._links(steps))
                self.rules[nr.id] = nr
                self.rw.add_rule(nr)
                self.active_keys.add(_canon(nr.lhs, nr.rhs))
        for qid, q in list(self.equations.items()):
            if qid != item.id and (single.reducible(q.lhs) or single.reducible(q.rhs)):
                self._retire(qid, q, False)
                self.push(q)
        if oriented:
            self.rules[item.id] = item
        else:
            self.equations[item.id] = item
        self.active_keys.add(key)
        # critical pairs with every active item, itself included
        partners = [(r, True) for r in self.rules.values()] + \
                   [(q, False) for q in self.equations.values()]
        for other, o_oriented in partners:
            if oriented and o_oriented and item.lhs.ground and other.lhs.ground:
                # ground left sides overlap only by containment, removed above
                continue
            for s, t, peak, p, links in self._cps(item, oriented, other, o_oriented):
                self.stats["cps_generated"] += 1
                if s == t:
                    continue
                cp = self.new(s, t, ("cp", item.id, other.id, p), links)
                self.push(cp)

    def _cps(self, a, a_or, b, b_or):
        out = _overlaps(a, a_or, b, b_or, self.prec, skip_root=False)
        if a is not b:
            out += _overlaps(b, b_or, a, a_or, self.prec, skip_root=True)
        return out

    def _retire(self, iid, item, oriented):
        self.rw.remove(iid)
        if oriented:
            del self.rules[iid]
        else:
            del self.equations[iid]
        self.active_keys.discard(_canon(item.lhs, item.rhs))

    def result(self) -> CompletionResult:
        status = "budget-exhausted" if (self.incomplete or self.pending) else "saturated"
        stats = dict(self.stats)
        stats["rules"] = len(self.rules)
        stats["equations"] = len(self.equations)
        return CompletionResult(list(self.rules.values()), list(self.equations.values()),
                                self.prec, status, stats, self.archive)


def complete(inputs: Iterable, prec: Precedence, cfg: CompletionConfig | None = None) -> CompletionResult:
    """Run unfailing completion on ``inputs``.

    ``inputs`` holds :class:`Equation` objects, rewrite rules, or plain
    ``(left, right)`` pairs.  The result's status is ``"saturated"`` when every
    critical pair was joined, else ``"budget-exhausted"`` (partial result).
    """
    cfg = cfg or CompletionConfig()
    c = _Completion(prec, cfg)
    for item in inputs:
        if isinstance(item, tuple):
            c.add_input(item[0], item[1])
        else:
            c.add_input(item.lhs, item.rhs, source=item)
    c.run()
    return c.result()


def join(result: CompletionResult, prec: Precedence | None, s, t,
         budget: int = 100_000, rewriter: Rewriter | None = None) -> ProofTrace | None:
    """Valley proof of ``s`` and ``t`` by ordered rewriting, or None."""
    if prec is not None and prec != result.prec:
        raise ValueError("join must use the precedence the system was completed with")
    rw = rewriter or result.rewriter()
    u, left = rw.normalize(s, budget)
    v, right = rw.normalize(t, budget)
    if u != v:
        return None
    return ProofTrace(s, t, u, left, right, result.archive)


# ---------------------------------------------------------------------------
# derivation expansion

def expand(archive: dict, item_id: int, forward: bool, position: tuple, term,
           base: Callable) -> tuple:
    """Expand one step of a derived item into steps of input items.

    ``base(item, forward, position, term)`` performs a single input-item
    step on the ground ``term`` and returns ``(new_term, step)``; it decides
    how variables that only the target side mentions get bound.  Returns
    ``(final_term, steps)``.
    """
    out = []
    stack = [iter([(item_id, forward, position)])]
    while stack:
        try:
            iid, fwd, pos = next(stack[-1])
        except StopIteration:
            stack.pop()
            continue
        item = archive[iid]
        if item.is_input:
            term, step = base(item, fwd, pos, term)
            out.append(step)
            continue
        links = item.links if fwd else [(i, not f, q) for (i, f, q) in reversed(item.links)]
        stack.append(iter([(i, f, pos + q) for (i, f, q) in links]))
    return term, out


def cost_trend(ns: Sequence[int], ops: Sequence[float], max_degree: int = 3) -> dict:
    """Least-squares polynomial fit of rewrite-operation counts against size."""
    x = np.asarray(ns, dtype=float)
    y = np.asarray(ops, dtype=float)
    deg = min(max_degree, len(x) - 1)
    coef = np.polyfit(x, y, deg)
    pred = np.polyval(coef, x)
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return {"degree": deg, "coefficients": coef.tolist(), "r2": r2}
