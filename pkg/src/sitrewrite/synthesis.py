"""Building rewrite systems from a theory, and structural checks on terms.

Three constructions are provided: whole-term ground rules (``build_r0``),
rules on minimal action supports (``build_r1``), and non-ground rules lifted
from ground ones by least general generalization (``build_r2``).

Contexts are taken from the finite term set: every subterm occurrence of a
member term gives a context (the member with a hole at that position) and
the slot language of a context is the set of subterms that fill it to a
member.  All checks quantify over these contexts.
"""

from __future__ import annotations

import functools
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .ordering import lpo_compare, Order
from .rewrite import RewriteRule, RuleSet
from .terms import (HOLE, App, Var, apply_subst, match_lhs, positions, replace_at,
                    subterm_at, variables)
from .theory import ActionId, Encoding, GroundTheory

__all__ = [
    "SupportCertificate", "SupportResult", "CheckResult", "TermIndex", "term_index",
    "is_action_support", "build_r0", "build_r1", "build_r2", "r1_choices", "lgg",
    "check_f_limited", "check_f_expressive", "check_weakly_f_expressive",
    "check_action_f_limited", "check_uniform", "contexts_at", "fluent_subsets",
    "sufficient_condition_check", "necessary_condition_check",
]


@dataclass(frozen=True)
class SupportCertificate:
    """Context ``context`` filled with ``support`` becomes ``term``; replacing the
    support by ``replacement`` performs ``action``."""
    support: object
    context: object
    replacement: object
    action: ActionId
    term: object

    def __str__(self):
        return (f"context={self.context} rule={self.support} -> {self.replacement} "
                f"action={self.action}")


@dataclass
class SupportResult:
    ok: bool
    certificates: list = field(default_factory=list)
    counterexample: object = None

    def __bool__(self):
        return self.ok


@dataclass
class CheckResult:
    ok: bool
    witness: object = None
    checked: int = 0

    def __bool__(self):
        return self.ok


class TermIndex:
    """Subterm occurrences and slot languages over a finite set of terms."""

    def __init__(self, enc: Encoding, sample: Iterable | None = None):
        self.enc = enc
        self.sample = tuple(enc.terms() if sample is None else sample)
        self.occurrences = defaultdict(list)   # subterm -> [(term, position, context)]
        self.slots: dict = {}                  # context -> {filler: filled term}
        self.position: dict = {}               # context -> hole position
        for s in self.sample:
            for p in positions(s):
                sub = subterm_at(s, p)
                ctx = replace_at(s, p, HOLE)
                self.occurrences[sub].append((s, p, ctx))
                self.slots.setdefault(ctx, {})[sub] = s
                self.position[ctx] = p

    def fill(self, ctx, t):
        """The member ``ctx[t]``, or None when it is not in the set."""
        return self.slots.get(ctx, {}).get(t)

    def language(self, ctx) -> tuple:
        return tuple(self.slots.get(ctx, {}))

    def contexts(self) -> list:
        return list(self.slots)


def term_index(enc: Encoding, sample=None) -> TermIndex:
    if sample is not None:
        return TermIndex(enc, sample)
    hit = enc.cache.get("term-index")
    if hit is None:
        hit = enc.cache["term-index"] = TermIndex(enc)
    return hit


def contexts_at(enc: Encoding, position: tuple) -> list:
    """All contexts whose hole sits at ``position``."""
    idx = term_index(enc)
    return [c for c, p in idx.position.items() if p == tuple(position)]


def fluent_subsets(theory: GroundTheory) -> list:
    names = list(theory.fluents)
    return [frozenset(c) for k in range(len(names) + 1) for c in itertools.combinations(names, k)]


# ---------------------------------------------------------------------------
# action supports and the three constructions

def is_action_support(theory: GroundTheory, enc: Encoding, t, sample=None) -> SupportResult:
    """Does every context of ``t`` admit a replacement performing some action?"""
    idx = term_index(enc, sample)
    certs = []
    for s, p, ctx in idx.occurrences.get(t, ()):
        state = enc.sigma(s)
        found = None
        for t2, filled in idx.slots[ctx].items():
            target = enc.sigma(filled)
            for a, nxt in theory.transitions(state):
                if nxt == target:
                    found = SupportCertificate(t, ctx, t2, a, s)
                    break
            if found:
                break
        if found is None:
            return SupportResult(False, certs, (s, p))
        certs.append(found)
    return SupportResult(True, certs)


def _preferred(enc: Encoding, state):
    t = enc.find_term(state)
    return t if t is not None else enc.preimages()[state][0]


def build_r0(theory: GroundTheory, enc: Encoding, sample=None) -> RuleSet:
    """One whole-term ground rule per member term and executable action."""
    sample = tuple(enc.terms() if sample is None else sample)
    rules = []
    for s in sample:
        for a, nxt in theory.transitions(enc.sigma(s)):
            rules.append(RewriteRule(f"a0_{len(rules) + 1}", s, _preferred(enc, nxt), label=str(a)))
    return RuleSet(rules, enc.rules.equations)


def _ground_order(enc: Encoding):
    prec = enc.precedence

    def cmp(a, b):
        if a == b:
            return 0
        if prec.covers(_symbols(a)) and prec.covers(_symbols(b)):
            o = lpo_compare(prec, a, b)
            if o is Order.LESS:
                return -1
            if o is Order.GREATER:
                return 1
        return -1 if (a.size, str(a)) < (b.size, str(b)) else 1
    return functools.cmp_to_key(cmp)


def _symbols(t):
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if not u.is_var:
            out.add(u.head)
            stack.extend(u.args)
    return out


@dataclass(frozen=True)
class R1Choice:
    term: object
    action: ActionId
    position: tuple
    support: object
    replacement: object


def r1_choices(theory: GroundTheory, enc: Encoding, sample=None) -> list:
    """For each member term and executable action, the chosen minimal-support rule.

    Candidates are tried by (support size, position); replacements in
    increasing term order.  A pair ``t -> t'`` qualifies only if it acts as
    an action rule wherever ``t`` occurs in the term set.
    """
    key = ("r1-choices", sample is None)
    if sample is None and key in enc.cache:
        return enc.cache[key]
    idx = term_index(enc, sample)
    order = _ground_order(enc)
    valid: dict = {}

    def rule_ok(t, t2):
        hit = valid.get((t, t2))
        if hit is None:
            hit = True
            for s, p, ctx in idx.occurrences[t]:
                filled = idx.fill(ctx, t2)
                if filled is None:
                    hit = False
                    break
                target = enc.sigma(filled)
                if not any(nxt == target for _, nxt in theory.transitions(enc.sigma(s))):
                    hit = False
                    break
            valid[(t, t2)] = hit
        return hit

    out = []
    for s in idx.sample:
        cands = sorted(positions(s), key=lambda p: (subterm_at(s, p).size, p))
        for a, nxt in theory.transitions(enc.sigma(s)):
            chosen = None
            for p in cands:
                t = subterm_at(s, p)
                ctx = replace_at(s, p, HOLE)
                fillers = sorted((f for f, m in idx.slots[ctx].items() if enc.sigma(m) == nxt),
                                 key=order)
                for t2 in fillers:
                    if rule_ok(t, t2):
                        chosen = R1Choice(s, a, p, t, t2)
                        break
                if chosen:
                    break
            if chosen is not None:
                out.append(chosen)
    if sample is None:
        enc.cache[key] = out
    return out


def build_r1(theory: GroundTheory, enc: Encoding, sample=None) -> RuleSet:
    """Deduplicated minimal-support action rules plus the encoding's rearrangements."""
    rules, seen = [], set()
    for c in r1_choices(theory, enc, sample):
        if (c.support, c.replacement) not in seen:
            seen.add((c.support, c.replacement))
            rules.append(RewriteRule(f"a1_{len(rules) + 1}", c.support, c.replacement))
    return RuleSet(rules, enc.rules.equations)


def lgg(a, b, table: dict | None = None):
    """Least general generalization; ``table`` shares variables across calls."""
    table = {} if table is None else table
    if a == b:
        return a
    if not a.is_var and not b.is_var and a.head == b.head and len(a.args) == len(b.args):
        return App(a.head, [lgg(x, y, table) for x, y in zip(a.args, b.args)])
    v = table.get((a, b))
    if v is None:
        v = table[(a, b)] = Var(f"_g{len(table)}")
    return v


def _canonical(l, r):
    names = {}

    def walk(t):
        if t.is_var:
            if t.name not in names:
                names[t.name] = Var(f"x{len(names) + 1}")
            return names[t.name]
        if t.ground:
            return t
        return App(t.head, [walk(u) for u in t.args])
    return walk(l), walk(r)


def _diff(a, b, pos=()):
    if a == b:
        return []
    if not a.is_var and not b.is_var and a.head == b.head and len(a.args) == len(b.args):
        out = []
        for i, (x, y) in enumerate(zip(a.args, b.args), 1):
            out.extend(_diff(x, y, pos + (i,)))
        return out
    return [pos]


def build_r2(theory: GroundTheory, enc: Encoding, r1: RuleSet, sample=None) -> RuleSet:
    """Lift ground action rules to non-ground ones.

    Rules that change the same positions are merged greedily by joint least
    general generalization of their two sides.  A lift is kept only if each
    of its instances occurring in the term set is one of the input rules.
    """
    idx = term_index(enc, sample)
    ground = {(r.lhs, r.rhs) for r in r1.rules}
    labels = defaultdict(set)
    for r in r1.rules:
        labels[(r.lhs, r.rhs)].add(r.label)
    by_head = defaultdict(list)
    for sub, occ in idx.occurrences.items():
        if not sub.is_var:
            by_head[sub.head].append(sub)

    def valid(l, r):
        if variables(r) - variables(l):
            return False
        for sub in by_head.get(l.head, ()):
            theta = match_lhs(l, sub)
            if theta is not None and (sub, apply_subst(r, theta)) not in ground:
                return False
        return True

    groups = defaultdict(list)
    for r in r1.rules:
        key = (r.lhs.head if not r.lhs.is_var else None, tuple(_diff(r.lhs, r.rhs)))
        groups[key].append(r)
    lifted = []
    for key in groups:
        current = []  # [lhs, rhs, members]
        for r in groups[key]:
            for entry in current:
                table = {}
                l = lgg(entry[0], r.lhs, table)
                rr = lgg(entry[1], r.rhs, table)
                if valid(l, rr):
                    entry[0], entry[1] = l, rr
                    entry[2].append(r)
                    break
            else:
                current.append([r.lhs, r.rhs, [r]])
        lifted.extend(current)
    rules = []
    for l, r, members in lifted:
        l, r = _canonical(l, r)
        labs = set().union(*(labels[(m.lhs, m.rhs)] for m in members))
        label = labs.pop() if len(labs) == 1 else None
        rules.append(RewriteRule(f"a2_{len(rules) + 1}", l, r, label=label))
    return RuleSet(rules, r1.equations)


# ---------------------------------------------------------------------------
# fluent-subset conditions

def _scope(idx: TermIndex, terms, contexts):
    terms = list(dict.fromkeys(terms))
    ctxs = idx.contexts() if contexts is None else list(contexts)
    for ctx in ctxs:
        members = [t for t in terms if idx.fill(ctx, t) is not None]
        if members:
            yield ctx, members


def _outside(theory, fprime):
    return [p for p in theory.fluents if p not in fprime]


def check_f_limited(enc: Encoding, terms, fprime, contexts=None) -> CheckResult:
    """Filling any context with different members of ``terms`` only changes fluents in ``fprime``."""
    idx = term_index(enc)
    out = _outside(enc.theory, fprime)
    n = 0
    for ctx, members in _scope(idx, terms, contexts):
        base = enc.sigma(idx.fill(ctx, members[0]))
        for t in members[1:]:
            n += 1
            s = enc.sigma(idx.fill(ctx, t))
            for p in out:
                if s[p] != base[p]:
                    return CheckResult(False, (ctx, members[0], t, p), n)
    return CheckResult(True, None, n)


def _by_projection(theory, fluents):
    key = ("projection", tuple(fluents))
    cache = theory.__dict__.setdefault("_proj_cache", {})
    hit = cache.get(key)
    if hit is None:
        hit = defaultdict(set)
        for s in theory.states():
            hit[tuple(s[p] for p in fluents)].add(s)
        cache[key] = hit
    return hit


def check_f_expressive(enc: Encoding, terms, fprime, contexts=None) -> CheckResult:
    """Every state agreeing with a filled context outside ``fprime`` is reached by some member."""
    idx = term_index(enc)
    theory = enc.theory
    out = _outside(theory, fprime)
    groups = _by_projection(theory, out)
    n = 0
    for ctx, members in _scope(idx, terms, contexts):
        reached = {enc.sigma(idx.fill(ctx, t)) for t in members}
        for t in members:
            s1 = enc.sigma(idx.fill(ctx, t))
            for s in groups[tuple(s1[p] for p in out)]:
                n += 1
                if s not in reached:
                    return CheckResult(False, (ctx, t, s), n)
    return CheckResult(True, None, n)


def check_weakly_f_expressive(enc: Encoding, terms, fprime, contexts=None) -> CheckResult:
    """Some context has two members agreeing outside ``fprime`` and differing inside it."""
    idx = term_index(enc)
    theory = enc.theory
    out = _outside(theory, fprime)
    inside = [p for p in theory.fluents if p in fprime]
    n = 0
    for ctx, members in _scope(idx, terms, contexts):
        states = [(t, enc.sigma(idx.fill(ctx, t))) for t in members]
        for (t1, s1), (t2, s2) in itertools.combinations(states, 2):
            n += 1
            if all(s1[p] == s2[p] for p in out) and any(s1[p] != s2[p] for p in inside):
                return CheckResult(True, (ctx, t1, t2), n)
    return CheckResult(False, None, n)


def check_action_f_limited(theory: GroundTheory, action: ActionId, fprime) -> CheckResult:
    """``action`` changes no fluent outside ``fprime`` and depends only on fluents in it.

    Executability counts as part of the effect: if two states agree on
    ``fprime`` but the action runs in only one of them, the check fails.
    """
    fprime = frozenset(fprime)
    out = _outside(theory, fprime)
    inside = [p for p in theory.fluents if p in fprime]
    seen: dict = {}
    n = 0
    for s in theory.states():
        n += 1
        nxt = theory.do(action, s)
        if nxt is not None:
            for p in out:
                if nxt[p] != s[p]:
                    return CheckResult(False, ("changes", s, p), n)
        key = tuple(s[p] for p in inside)
        effect = None if nxt is None else tuple(nxt[p] for p in inside)
        if key in seen:
            other, other_effect = seen[key]
            if other_effect != effect:
                return CheckResult(False, ("depends", other, s), n)
        else:
            seen[key] = (s, effect)
    return CheckResult(True, None, n)


def check_uniform(enc: Encoding, t) -> CheckResult:
    """All contexts holding ``t`` have the same slot language."""
    idx = term_index(enc)
    langs = {}
    for s, p, ctx in idx.occurrences.get(t, ()):
        lang = frozenset(idx.slots[ctx])
        if langs and lang not in langs:
            first = next(iter(langs.values()))
            return CheckResult(False, (first, ctx), len(langs) + 1)
        langs.setdefault(lang, ctx)
    return CheckResult(True, None, len(langs))


# ---------------------------------------------------------------------------
# exhaustive checks of the sufficient and necessary conditions

def sufficient_condition_check(theory: GroundTheory, enc: Encoding, subsets=None) -> dict:
    """Wherever a slot language is limited and expressive for some fluent subset,
    every action limited to that subset has a replacement term in the slot."""
    idx = term_index(enc)
    subsets = fluent_subsets(theory) if subsets is None else [frozenset(f) for f in subsets]
    act_ok = {(a, f): bool(check_action_f_limited(theory, a, f))
              for a in theory.actions for f in subsets}
    report = {"contexts": 0, "premises": 0, "instances": 0, "constructed": 0, "failures": []}
    for ctx in idx.contexts():
        lang = idx.language(ctx)
        report["contexts"] += 1
        for f in subsets:
            if not (check_f_limited(enc, lang, f, [ctx]) and check_f_expressive(enc, lang, f, [ctx])):
                continue
            report["premises"] += 1
            by_state = {enc.sigma(idx.fill(ctx, t)): t for t in lang}
            for a in theory.actions:
                if not act_ok[(a, f)]:
                    continue
                for t in lang:
                    nxt = theory.do(a, enc.sigma(idx.fill(ctx, t)))
                    if nxt is None:
                        continue
                    report["instances"] += 1
                    if nxt in by_state:
                        report["constructed"] += 1
                    else:
                        report["failures"].append((ctx, sorted(f), str(a), t))
    report["ok"] = not report["failures"]
    return report


def necessary_condition_check(theory: GroundTheory, enc: Encoding, subsets=None) -> dict:
    """Every chosen minimal-support rule that changes a fluent of a subset
    to which its action is limited sits in a weakly expressive slot."""
    idx = term_index(enc)
    subsets = fluent_subsets(theory) if subsets is None else [frozenset(f) for f in subsets]
    act_ok: dict = {}
    report = {"rules": 0, "instances": 0, "failures": []}
    for c in r1_choices(theory, enc):
        report["rules"] += 1
        ctx = replace_at(c.term, c.position, HOLE)
        before = enc.sigma(c.term)
        after = enc.sigma(idx.fill(ctx, c.replacement))
        for f in subsets:
            if (c.action, f) not in act_ok:
                act_ok[(c.action, f)] = bool(check_action_f_limited(theory, c.action, f))
            if not act_ok[(c.action, f)]:
                continue
            if not any(before[p] != after[p] for p in f):
                continue
            report["instances"] += 1
            if not check_weakly_f_expressive(enc, idx.language(ctx), f, [ctx]):
                report["failures"].append((c.term, str(c.action), sorted(f)))
    report["ok"] = not report["failures"]
    return report
