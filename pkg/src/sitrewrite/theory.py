"""Finite situation-calculus theories and their term encodings.

A :class:`GroundTheory` is an explicit finite structure: fluents with value
domains, a constraint ``chi`` on fluent assignments, and a partial ``do``
function.  States are identified with the fluent assignments that satisfy
``chi``, so an action's effect depends on the fluents alone.

An :class:`Encoding` maps ground terms to states.  It carries the rewrite
rules (action rules plus rearrangement equations) and the procedures that
read fluents off a term, build a term for a given assignment, and label a
rewrite step with the action it performs.
"""

from __future__ import annotations

import itertools
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .errors import ConstraintViolated, NoAction, TermNotInT
from .ordering import Precedence
from .rewrite import RewriteStep, RuleKind, RuleSet, successors
from .terms import Signature

__all__ = [
    "ActionId", "FluentAssignment", "GroundTheory", "Encoding", "AxiomResult",
    "RepresentationReport", "check_representation", "check_invertible", "label_action",
    "phi_hat", "chi_hat", "find_term", "is_rearrangement",
]


@dataclass(frozen=True, order=True)
class ActionId:
    """An action name with its parameter values, e.g. ``move(disk2,1,3)``."""
    name: str
    args: tuple = ()

    def __str__(self):
        return f"{self.name}({','.join(map(str, self.args))})"

    @classmethod
    def parse(cls, text: str) -> "ActionId":
        m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*", text)
        if not m:
            raise ValueError(f"malformed action {text!r}")
        args = m.group(2)
        parts = tuple(a.strip() for a in args.split(",")) if args and args.strip() else ()
        return cls(m.group(1), parts)


class FluentAssignment(Mapping):
    """Immutable, hashable map from fluent names to values."""

    __slots__ = ("_d", "_h")

    def __init__(self, items: Mapping | Iterable = ()):
        d = dict(items)
        object.__setattr__(self, "_d", d)
        object.__setattr__(self, "_h", hash(frozenset(d.items())))

    def __setattr__(self, key, value):
        raise AttributeError("FluentAssignment is immutable")

    def __getitem__(self, key):
        return self._d[key]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if isinstance(other, FluentAssignment):
            return self._h == other._h and self._d == other._d
        if isinstance(other, Mapping):
            return self._d == dict(other)
        return NotImplemented

    def updated(self, **changes) -> "FluentAssignment":
        d = dict(self._d)
        d.update(changes)
        return FluentAssignment(d)

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self._d.items())
        return f"{{{inner}}}"


class GroundTheory:
    """Finite theory: fluents, constraint, actions and a partial ``do``.

    ``do(action, state)`` returns the successor assignment or None when the
    action is not executable in ``state``.  Results violating ``chi`` are
    treated as undefined, which keeps ``do`` closed over the state set.
    """

    def __init__(self, fluents: Mapping[str, Iterable], actions: Iterable[ActionId],
                 do: Callable, chi: Callable | None = None, name: str = "theory",
                 chi_name: str = "all"):
        self.name = name
        self.fluents = {p: tuple(vals) for p, vals in fluents.items()}
        self.actions = tuple(sorted(actions))
        self._do = do
        self._chi = chi
        self.chi_name = chi_name
        self._states = None
        self._trans: dict = {}
        self._chi_cache: dict = {}

    def chi(self, assignment: Mapping) -> bool:
        if isinstance(assignment, FluentAssignment):
            hit = self._chi_cache.get(assignment)
            if hit is None:
                hit = self._chi_cache[assignment] = self._chi_uncached(assignment)
            return hit
        return self._chi_uncached(assignment)

    def _chi_uncached(self, assignment: Mapping) -> bool:
        if set(assignment) != set(self.fluents):
            return False
        for p, v in assignment.items():
            if v not in self.fluents[p]:
                return False
        return True if self._chi is None else bool(self._chi(assignment))

    def assignment(self, values: Mapping | None = None, **kw) -> FluentAssignment:
        """Build a total assignment in fluent order; raises if not total or out of domain."""
        d = dict(values or {}, **kw)
        missing = set(self.fluents) - set(d)
        extra = set(d) - set(self.fluents)
        if missing or extra:
            raise ValueError(f"assignment must be total over the fluents "
                             f"(missing {sorted(missing)}, unknown {sorted(extra)})")
        for p, v in d.items():
            if v not in self.fluents[p]:
                raise ValueError(f"value {v!r} outside the domain of fluent {p}")
        return FluentAssignment((p, d[p]) for p in self.fluents)

    def states(self) -> list:
        if self._states is None:
            names = list(self.fluents)
            out = []
            for combo in itertools.product(*(self.fluents[p] for p in names)):
                a = FluentAssignment(zip(names, combo))
                if self._chi is None or self._chi(a):
                    out.append(a)
            self._states = out
        return self._states

    def is_state(self, s: Mapping) -> bool:
        return self.chi(s)

    def do(self, action: ActionId, state: FluentAssignment):
        """Successor of ``state`` under ``action``, or None when undefined."""
        if not self.is_state(state):
            return None
        nxt = self._do(action, state)
        if nxt is None:
            return None
        nxt = nxt if isinstance(nxt, FluentAssignment) else FluentAssignment(nxt)
        return nxt if self.is_state(nxt) else None

    def transitions(self, state: FluentAssignment) -> tuple:
        """All ``(action, successor)`` pairs from ``state`` in action order."""
        hit = self._trans.get(state)
        if hit is None:
            hit = []
            for a in self.actions:
                nxt = self.do(a, state)
                if nxt is not None:
                    hit.append((a, nxt))
            hit = tuple(hit)
            self._trans[state] = hit
        return hit

    def actions_between(self, s: FluentAssignment, t: FluentAssignment) -> list:
        return [a for a, nxt in self.transitions(s) if nxt == t]

    def require_state(self, s: Mapping) -> FluentAssignment:
        if not self.chi(s):
            raise ConstraintViolated(f"{dict(s)} violates the fluent constraint of {self.name}")
        return s if isinstance(s, FluentAssignment) else self.assignment(s)

    def __repr__(self):
        return f"GroundTheory({self.name!r}, {len(self.fluents)} fluents, {len(self.actions)} actions)"


def is_rearrangement(rule_set: RuleSet, step: RewriteStep) -> bool:
    return (step.kind is RuleKind.REARRANGEMENT or
            (step.rule.id in rule_set and rule_set.is_equation(step.rule.id)))


class Encoding:
    """Term encoding of a :class:`GroundTheory`.

    ``decode(t)`` reads a fluent assignment off a well-formed ground term (or
    returns None); membership in the term set requires a decodable term whose
    assignment satisfies the theory's constraint.  ``enumerate_terms`` yields
    every member of the (finite) term set; ``construct`` builds one member
    for a given state.
    """

    def __init__(self, name: str, signature: Signature, precedence: Precedence,
                 rules: RuleSet, theory: GroundTheory, decode: Callable,
                 enumerate_terms: Callable, construct: Callable | None = None,
                 invertible: bool = True, start=None, goal=None, params: Mapping | None = None):
        self.name = name
        self.signature = signature
        self.precedence = precedence
        self.rules = rules
        self.theory = theory
        self._decode = decode
        self._enumerate = enumerate_terms
        self._construct = construct
        self.invertible = invertible
        self.start = start
        self.goal = goal
        self.params = dict(params or {})
        self._terms = None
        self._sigma: dict = {}
        self.cache: dict = {}

    # -- the term set -----------------------------------------------------

    def decode(self, t):
        if not t.ground:
            return None
        hit = self._sigma.get(t, False)
        if hit is False:
            raw = self._decode(t)
            hit = None if raw is None else FluentAssignment(raw)
            self._sigma[t] = hit
        return hit

    def in_T(self, t) -> bool:
        a = self.decode(t)
        return a is not None and self.theory.chi(a)

    def terms(self) -> tuple:
        """Every member of the term set, in a fixed order."""
        if self._terms is None:
            self._terms = tuple(t for t in self._enumerate() if self.in_T(t))
        return self._terms

    # -- sigma, fluents and constraint --------------------------------------

    def sigma(self, t) -> FluentAssignment:
        a = self.decode(t)
        if a is None or not self.theory.chi(a):
            raise TermNotInT(f"{t} does not encode a state of {self.theory.name}")
        return a

    def phi_hat(self, p: str, t):
        return self.sigma(t)[p]

    def chi_hat(self, t) -> bool:
        a = self.decode(t)
        return a is not None and self.theory.chi(a)

    def find_term(self, want: Mapping):
        if not self.theory.chi(want):
            return None
        want = FluentAssignment(want)
        if self._construct is not None:
            t = self._construct(want)
            if t is not None and self.in_T(t) and self.sigma(t) == want:
                return t
        for t in self.terms():
            if self.sigma(t) == want:
                return t
        return None

    def preimages(self) -> dict:
        """State -> list of terms encoding it."""
        hit = self.cache.get("preimages")
        if hit is None:
            hit = defaultdict(list)
            for t in self.terms():
                hit[self.sigma(t)].append(t)
            hit = dict(hit)
            self.cache["preimages"] = hit
        return hit

    def with_rules(self, rules: RuleSet, precedence: Precedence | None = None,
                   signature: Signature | None = None) -> "Encoding":
        enc = Encoding(self.name, signature or self.signature, precedence or self.precedence,
                       rules, self.theory, self._decode, self._enumerate, self._construct,
                       self.invertible, self.start, self.goal, self.params)
        enc._terms = self._terms
        enc._sigma = self._sigma
        return enc

    def __repr__(self):
        return f"Encoding({self.name!r}, {self.rules!r})"


# module-level spellings of the encoding operations

def phi_hat(enc: Encoding, p: str, t):
    return enc.phi_hat(p, t)


def chi_hat(enc: Encoding, t) -> bool:
    return enc.chi_hat(t)


def find_term(enc: Encoding, want: Mapping):
    return enc.find_term(want)


def label_action(enc: Encoding, step: RewriteStep) -> ActionId:
    """The action performed by an action-rule step between terms of the term set.

    A rule's label template is tried first; otherwise the theory's actions
    are searched for one mapping the source state to the target state.
    """
    if is_rearrangement(enc.rules, step):
        raise NoAction(f"rearrangement step {step} performs no action")
    s = enc.sigma(step.before)
    t = enc.sigma(step.after)
    label = None
    rule = step.rule
    if getattr(rule, "label", None) and step.forward:
        try:
            label = ActionId.parse(rule.label_for(step.position, step.subst))
        except (KeyError, ValueError, IndexError):
            label = None
    if label is not None and enc.theory.do(label, s) == t:
        return label
    for a, nxt in enc.theory.transitions(s):
        if nxt == t:
            return a
    raise NoAction(f"no action takes {s} to {t} (step {step})")


# ---------------------------------------------------------------------------
# representation axioms

AXIOMS = (
    (1, "surjectivity"),
    (2, "closure"),
    (3, "rearrangement-equivalence"),
    (4, "action-soundness"),
    (5, "action-completeness"),
)


@dataclass
class AxiomResult:
    number: int
    name: str
    passed: bool
    witness: object = None
    checked: int = 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"eq{self.number} {self.name} {status}"
        if not self.passed and self.witness is not None:
            out += f" witness: {self.witness}"
        return out


@dataclass
class RepresentationReport:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, number: int) -> AxiomResult:
        for r in self.results:
            if r.number == number:
                return r
        raise KeyError(number)

    def lines(self) -> list:
        return [r.line() for r in self.results]


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        root = x
        while p != root:
            root = p
            p = self.parent.setdefault(root, root)
        while x != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _step_table(enc: Encoding, sample) -> dict:
    key = ("steps", id(enc.rules), len(sample))
    hit = enc.cache.get(key)
    if hit is None:
        hit = {}
        for s in sample:
            es, acts = [], []
            for st in successors(enc.rules, s):
                (es if is_rearrangement(enc.rules, st) else acts).append(st)
            hit[s] = (es, acts)
        enc.cache[key] = hit
    return hit


def check_representation(theory: GroundTheory, enc: Encoding, sample=None) -> RepresentationReport:
    """Check the five representation axioms exhaustively over ``sample``.

    The rearrangement axiom is read transitively: two members of the term
    set denote the same state iff rearrangement steps connect them.
    """
    sample = tuple(enc.terms() if sample is None else sample)
    report = RepresentationReport()
    table = _step_table(enc, sample)

    # (1) every state has a preimage in the sample
    covered = {}
    for t in sample:
        if enc.in_T(t):
            covered.setdefault(enc.sigma(t), t)
    missing = next((s for s in theory.states() if s not in covered), None)
    report.results.append(AxiomResult(1, "surjectivity", missing is None, missing,
                                      len(theory.states())))

    # (2) one-step successors stay in the term set
    bad, n = None, 0
    for s in sample:
        es, acts = table[s]
        for st in es + acts:
            n += 1
            if not (enc.in_T(st.after) and enc.chi_hat(st.after)):
                bad = st
                break
        if bad:
            break
    report.results.append(AxiomResult(2, "closure", bad is None, bad, n))

    # (3) rearrangement steps connect exactly the terms with equal sigma
    uf = _UnionFind()
    bad, n = None, 0
    for s in sample:
        uf.find(s)
        for st in table[s][0]:
            n += 1
            if enc.in_T(st.after) and enc.sigma(st.after) != enc.sigma(s):
                bad = ("state-changing rearrangement", st)
            uf.union(s, st.after)
    if bad is None:
        groups = defaultdict(set)
        for t in sample:
            groups[enc.sigma(t)].add(uf.find(t))
        for state, roots in groups.items():
            if len(roots) > 1:
                bad = ("unconnected preimages", state)
                break
    report.results.append(AxiomResult(3, "rearrangement-equivalence", bad is None, bad, n))

    # (4) every action step performs some action
    bad, n = None, 0
    for s in sample:
        for st in table[s][1]:
            n += 1
            if not enc.in_T(st.after):
                bad = st
                break
            targets = {nxt for _, nxt in theory.transitions(enc.sigma(s))}
            if enc.sigma(st.after) not in targets:
                bad = st
                break
        if bad:
            break
    report.results.append(AxiomResult(4, "action-soundness", bad is None, bad, n))

    # (5) every transition is realized by E* ; A ; E*
    reach = defaultdict(set)
    for s in sample:
        for st in table[s][1]:
            reach[uf.find(s)].add(uf.find(st.after))
    pre = defaultdict(list)
    for t in sample:
        pre[enc.sigma(t)].append(t)
    bad, n = None, 0
    for state in theory.states():
        for a, nxt in theory.transitions(state):
            for s in pre.get(state, ()):
                for t in pre.get(nxt, ()):
                    n += 1
                    if uf.find(t) not in reach[uf.find(s)]:
                        bad = (str(a), str(s), str(t))
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    report.results.append(AxiomResult(5, "action-completeness", bad is None, bad, n))
    return report


def check_invertible(enc: Encoding, sample=None):
    """Every ground action step s => t has an action step t => s.

    Returns ``(ok, witness_step_or_None, count_checked)``.
    """
    sample = tuple(enc.terms() if sample is None else sample)
    table = _step_table(enc, sample)
    n = 0
    for s in sample:
        for st in table[s][1]:
            n += 1
            back = table.get(st.after)
            back_acts = back[1] if back is not None else [
                x for x in successors(enc.rules, st.after) if not is_rearrangement(enc.rules, x)]
            if not any(x.after == s for x in back_acts):
                return False, st, n
    return True, None, n
