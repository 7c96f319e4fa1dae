"""Rewrite rules, the one-step relation, normalization and ordered rewriting.

A :class:`RuleSet` holds oriented rules and unoriented equations.  Oriented
rules rewrite left to right; equations rewrite in whichever direction the
reduction ordering decreases on the instance at hand (ordered rewriting).
Every step taken is recorded as a :class:`RewriteStep` so that traces can be
replayed and checked.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import BudgetExhausted, InconsistentStep, InvalidPosition, InvalidRule
from .ordering import Precedence, lpo_greater
from .terms import (App, apply_subst, match_lhs, positions, replace_at, subterm_at,
                    variables)

__all__ = [
    "RuleKind", "RewriteRule", "RuleSet", "RewriteStep", "Rewriter",
    "applicable_steps", "successors", "make_step", "apply_step", "normalize",
    "ordered_step", "replay", "decrease_monitor",
]


class RuleKind(enum.Enum):
    ACTION = "action"
    REARRANGEMENT = "rearrangement"


@dataclass(frozen=True)
class RewriteRule:
    id: str
    lhs: object
    rhs: object
    kind: RuleKind = RuleKind.ACTION
    label: str | None = None

    def __post_init__(self):
        extra = variables(self.rhs) - variables(self.lhs)
        if extra:
            raise InvalidRule(f"rule {self.id}: variables {sorted(extra)} of the right-hand side "
                              "do not occur on the left")
        if self.lhs.is_var:
            raise InvalidRule(f"rule {self.id}: left-hand side is a variable")

    def label_for(self, position: tuple, theta: Mapping) -> str | None:
        """Fill the label template with ``{pos}`` and bound variable names."""
        if self.label is None:
            return None
        names = {k: str(v) for k, v in theta.items()}
        return self.label.format(pos=".".join(str(i) for i in position), **names)

    def inverse(self, id: str | None = None) -> "RewriteRule":
        return RewriteRule(id or f"{self.id}~", self.rhs, self.lhs, self.kind)

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}"


class RuleSet:
    """Oriented rules plus unoriented (rearrangement) equations."""

    def __init__(self, rules: Iterable[RewriteRule] = (), equations: Iterable[RewriteRule] = ()):
        self.rules = tuple(rules)
        self.equations = tuple(equations)
        self._by_id = {}
        for r in self.rules + self.equations:
            if r.id in self._by_id:
                raise ValueError(f"duplicate rule id {r.id!r}")
            self._by_id[r.id] = r
        for e in self.equations:
            extra = variables(e.lhs) ^ variables(e.rhs)
            if extra or e.rhs.is_var:
                raise InvalidRule(f"equation {e.id}: both sides must have the same variables "
                                  "and neither may be a variable")
        self._order = {r.id: i for i, r in enumerate(self.rules + self.equations)}

    def __iter__(self):
        return iter(self.rules + self.equations)

    def __len__(self):
        return len(self.rules) + len(self.equations)

    def __getitem__(self, rid: str) -> RewriteRule:
        return self._by_id[rid]

    def __contains__(self, rid):
        return rid in self._by_id

    def order(self, rid: str) -> int:
        return self._order[rid]

    def action_rules(self) -> tuple:
        return tuple(r for r in self.rules if r.kind is RuleKind.ACTION)

    def is_equation(self, rid: str) -> bool:
        return self._by_id[rid] in self.equations

    def replace(self, rules=None, equations=None) -> "RuleSet":
        return RuleSet(self.rules if rules is None else rules,
                       self.equations if equations is None else equations)

    def __repr__(self):
        return f"RuleSet({len(self.rules)} rules, {len(self.equations)} equations)"


@dataclass(frozen=True, eq=False)
class RewriteStep:
    """One application of ``rule`` (or its reverse) at ``position``."""
    rule: object
    position: tuple
    subst: Mapping
    before: object
    after: object
    forward: bool = True

    @property
    def rule_id(self):
        return self.rule.id

    @property
    def lhs(self):
        return self.rule.lhs if self.forward else self.rule.rhs

    @property
    def rhs(self):
        return self.rule.rhs if self.forward else self.rule.lhs

    @property
    def kind(self):
        return getattr(self.rule, "kind", None)

    def reversed(self) -> "RewriteStep":
        return RewriteStep(self.rule, self.position, self.subst, self.after, self.before,
                           not self.forward)

    def __eq__(self, other):
        return (isinstance(other, RewriteStep) and self.rule_id == other.rule_id
                and self.position == other.position and self.before == other.before
                and self.after == other.after and self.forward == other.forward)

    def __hash__(self):
        return hash((self.rule_id, self.position, self.before, self.after, self.forward))

    def __str__(self):
        arrow = "->" if self.forward else "<-"
        pos = ".".join(map(str, self.position)) or "root"
        return f"{self.before} => {self.after}  [{self.rule_id} {arrow} @{pos}]"


class _DecreaseMonitor:
    """Optional runtime check that every ordered step decreases the LPO."""

    def __init__(self):
        self.enabled = False
        self.checked = 0

    def check(self, prec, before, after):
        if self.enabled:
            self.checked += 1
            if not lpo_greater(prec, before, after):
                raise AssertionError(f"non-decreasing rewrite step {before} => {after}")


decrease_monitor = _DecreaseMonitor()


def make_step(rule, term, position: tuple, forward: bool = True) -> RewriteStep:
    """Build the step applying ``rule`` at ``position`` of ``term``."""
    lhs, rhs = (rule.lhs, rule.rhs) if forward else (rule.rhs, rule.lhs)
    try:
        sub = subterm_at(term, position)
    except InvalidPosition as exc:
        raise InconsistentStep(str(exc)) from None
    theta = match_lhs(lhs, sub)
    if theta is None:
        raise InconsistentStep(f"{lhs} does not match {sub} at {list(position)}")
    if variables(rhs) - theta.keys():
        raise InconsistentStep(f"{rhs} has variables unbound by the match")
    after = replace_at(term, position, apply_subst(rhs, theta))
    return RewriteStep(rule, tuple(position), theta, term, after, forward)


def apply_step(step: RewriteStep):
    """Return ``step.after`` after re-checking the step's consistency."""
    try:
        sub = subterm_at(step.before, step.position)
    except InvalidPosition as exc:
        raise InconsistentStep(str(exc)) from None
    if apply_subst(step.lhs, step.subst) != sub:
        raise InconsistentStep(f"{step.lhs} under {dict(step.subst)} is not the subterm {sub}")
    expected = replace_at(step.before, step.position, apply_subst(step.rhs, step.subst))
    if expected != step.after:
        raise InconsistentStep(f"step result {step.after} differs from {expected}")
    return step.after


def replay(start, steps: Sequence[RewriteStep]):
    """Apply ``steps`` in order from ``start`` and return the final term."""
    t = start
    for s in steps:
        if s.before != t:
            raise InconsistentStep(f"step starts at {s.before}, trace is at {t}")
        t = apply_step(s)
    return t


def _sorted_positions(t):
    return sorted(positions(t))


def applicable_steps(R: RuleSet, t, include_equations: bool = False) -> list[RewriteStep]:
    """All redexes of ``t``, ordered by rule then position.

    With ``include_equations`` the rearrangement equations contribute steps in
    both directions (forward first).
    """
    out = []
    ps = _sorted_positions(t)
    subs = [(p, subterm_at(t, p)) for p in ps]
    dirs = [(r, True) for r in R.rules]
    if include_equations:
        for e in R.equations:
            dirs.append((e, True))
            dirs.append((e, False))
    for rule, fwd in dirs:
        lhs, rhs = (rule.lhs, rule.rhs) if fwd else (rule.rhs, rule.lhs)
        for p, sub in subs:
            if not lhs.is_var and (sub.is_var or sub.head != lhs.head):
                continue
            theta = match_lhs(lhs, sub)
            if theta is None:
                continue
            after = replace_at(t, p, apply_subst(rhs, theta))
            out.append(RewriteStep(rule, p, theta, t, after, fwd))
    return out


def successors(R: RuleSet, t) -> list[RewriteStep]:
    """One-step successors of ``t`` under all rules and both equation directions."""
    return applicable_steps(R, t, include_equations=True)


class _Entry:
    __slots__ = ("seq", "obj", "forward", "lhs", "rhs", "oriented", "usable")

    def __init__(self, seq, obj, forward, lhs, rhs, oriented):
        self.seq = seq
        self.obj = obj
        self.forward = forward
        self.lhs = lhs
        self.rhs = rhs
        self.oriented = oriented
        # a direction whose target has extra variables cannot rewrite
        self.usable = not (variables(rhs) - variables(lhs))


class Rewriter:
    """Indexed rewriting engine over oriented rules and ordered equations.

    Items are any objects with ``id``, ``lhs`` and ``rhs``.  Redexes are
    searched leftmost-innermost; among rules matching at the same position
    the earliest-added one wins.
    """

    def __init__(self, prec: Precedence | None, rules=(), equations=()):
        self.prec = prec
        self._seq = 0
        self._entries: dict = {}
        self._ground: dict = {}
        self._by_head: dict = {}
        self._wild: list = []
        self._irreducible: set = set()
        for r in rules:
            self.add_rule(r)
        for e in equations:
            self.add_equation(e)

    def __len__(self):
        return len(self._entries)

    def _add(self, entry):
        lhs = entry.lhs
        if lhs.is_var:
            self._wild.append(entry)
        elif lhs.ground:
            self._ground.setdefault(lhs, []).append(entry)
        else:
            self._by_head.setdefault(lhs.head, []).append(entry)
        self._irreducible.clear()

    def add_rule(self, rule):
        self._seq += 1
        e = _Entry(self._seq, rule, True, rule.lhs, rule.rhs, True)
        self._entries[rule.id] = [e]
        self._add(e)

    def add_equation(self, eq):
        if self.prec is None:
            raise ValueError("ordered rewriting with equations needs a precedence")
        self._seq += 1
        a = _Entry(self._seq, eq, True, eq.lhs, eq.rhs, False)
        b = _Entry(self._seq, eq, False, eq.rhs, eq.lhs, False)
        self._entries[eq.id] = [a, b]
        self._add(a)
        self._add(b)

    def remove(self, item_id):
        for e in self._entries.pop(item_id, ()):
            lhs = e.lhs
            if lhs.is_var:
                bucket = self._wild
            elif lhs.ground:
                bucket = self._ground[lhs]
            else:
                bucket = self._by_head[lhs.head]
            bucket.remove(e)
        # removal cannot make anything reducible, so the cache stays valid

    def items(self):
        return [es[0].obj for es in self._entries.values()]

    def _try(self, e, t):
        if not e.usable:
            return None
        theta = match_lhs(e.lhs, t)
        if theta is None:
            return None
        res = apply_subst(e.rhs, theta)
        if not e.oriented and not lpo_greater(self.prec, t, res):
            return None
        return theta, res

    def root_step(self, t):
        """Best (entry, theta, result) rewriting ``t`` at the root, or None."""
        if t.is_var:
            buckets = (self._wild,)
        else:
            buckets = (self._ground.get(t, ()), self._by_head.get(t.head, ()), self._wild)
        best = None
        for bucket in buckets:
            for e in bucket:
                if best is not None and e.seq >= best[0].seq:
                    break
                r = self._try(e, t)
                if r is not None:
                    best = (e, r[0], r[1])
                    break
        return best

    def find_redex(self, t, pos=()):
        """Leftmost-innermost redex as (position, entry, theta, result)."""
        if t in self._irreducible:
            return None
        for i, a in enumerate(t.args, 1):
            r = self.find_redex(a, pos + (i,))
            if r is not None:
                return r
        r = self.root_step(t)
        if r is None:
            self._irreducible.add(t)
            return None
        return (pos,) + r

    def reducible(self, t) -> bool:
        return self.find_redex(t) is not None

    def step(self, t):
        r = self.find_redex(t)
        if r is None:
            return None
        pos, e, theta, res = r
        after = replace_at(t, pos, res)
        if self.prec is not None:
            decrease_monitor.check(self.prec, t, after)
        return RewriteStep(e.obj, pos, theta, t, after, e.forward)

    def normalize(self, t, budget: int | None = 100_000):
        steps = []
        while True:
            s = self.step(t)
            if s is None:
                return t, steps
            if budget is not None and len(steps) >= budget:
                raise BudgetExhausted(f"normalization exceeded {budget} steps", partial=(t, steps))
            steps.append(s)
            t = s.after


def ordered_step(equations: Iterable, prec: Precedence, t) -> RewriteStep | None:
    """First step using an equation instance that decreases under ``prec``."""
    rw = Rewriter(prec, equations=equations)
    return rw.step(t)


def normalize(R: RuleSet, prec: Precedence, t, budget: int = 10_000):
    """Normal form of ``t`` under the oriented rules and ordered equations.

    Returns ``(normal_form, trace)``.  Every oriented rule must decrease
    under ``prec``; this is checked up front.
    """
    for r in R.rules:
        if not lpo_greater(prec, r.lhs, r.rhs):
            raise ValueError(f"rule {r.id} ({r}) does not decrease under {prec}")
    rw = Rewriter(prec, R.rules, R.equations)
    return rw.normalize(t, budget)
