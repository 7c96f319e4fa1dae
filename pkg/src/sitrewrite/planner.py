"""Planning by completion.

Start and goal states are turned into terms, the completed system rewrites
both to a common term, and the resulting valley proof is turned back into a
sequence of ground terms of the encoding, each step of which is a step of
the domain's own rules.  Action steps are labelled with actions; steps of
rearrangement equations contribute nothing to the plan.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

from .completion import CompletionConfig, CompletionResult, ProofTrace, complete, expand, join
from .errors import (BudgetExhausted, InconsistentStep, InvalidPosition, NoAction,
                     NonInvertible, TermNotInT)
from .rewrite import RewriteStep, apply_step, successors
from .terms import apply_subst, match_lhs, subterm_at
from .theory import ActionId, Encoding, FluentAssignment, GroundTheory, is_rearrangement, label_action

__all__ = ["Plan", "plan", "extract_plan", "optimize_plan", "validate_plan",
           "completion_system", "GROUNDING_MODES"]

GROUNDING_MODES = ("auto", "never", "always")


@dataclass(frozen=True)
class Plan:
    """Actions plus (when available) the rewrite steps that realize them."""
    actions: tuple = ()
    witness: tuple = ()
    start: object = None
    goal: object = None

    def __len__(self):
        return len(self.actions)

    def lines(self) -> list:
        return [f"action {a}" for a in self.actions] + [f"plan_length {len(self.actions)}"]


def validate_plan(theory: GroundTheory, start: Mapping, plan) -> FluentAssignment | None:
    """Final state after executing ``plan`` from ``start``, or None if it is invalid."""
    actions = plan.actions if isinstance(plan, Plan) else tuple(plan)
    s = start if isinstance(start, FluentAssignment) else FluentAssignment(start)
    if not theory.is_state(s):
        return None
    for a in actions:
        s = theory.do(a, s)
        if s is None:
            return None
    return s


# ---------------------------------------------------------------------------
# completed systems

@dataclass
class _System:
    result: CompletionResult
    rewriter: object
    mode: str
    normal: dict

    @property
    def saturated(self):
        return self.result.saturated

    def normalize(self, t, budget):
        hit = self.normal.get(t)
        if hit is None:
            hit = self.rewriter.normalize(t, budget)
            self.normal[t] = hit
        return hit

    def join(self, s, t, budget=100_000) -> ProofTrace | None:
        u, left = self.normalize(s, budget)
        v, right = self.normalize(t, budget)
        if u != v:
            return None
        return ProofTrace(s, t, u, list(left), list(right), self.result.archive)


def _rule_inputs(enc: Encoding) -> list:
    """Domain rules as completion inputs, one per unordered pair."""
    from .completion import _canon
    seen, out = set(), []
    for r in list(enc.rules.rules) + list(enc.rules.equations):
        key = _canon(r.lhs, r.rhs)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def _ground_inputs(enc: Encoding) -> list:
    """Whole-term instances of every domain step between members of the term set."""
    seen, out = set(), []
    for s in enc.terms():
        for st in _steps_from(enc, s):
            key = frozenset((s, st.after))
            if key not in seen and s != st.after:
                seen.add(key)
                out.append((s, st.after))
    return out


def completion_system(enc: Encoding, cfg: CompletionConfig | None = None, mode: str = "rules") -> _System:
    """Complete the domain rules (``mode="rules"``) or their whole-term ground
    instances over the term set (``mode="ground"``); cached on the encoding."""
    cfg = cfg or CompletionConfig()
    key = ("system", mode, cfg, id(enc.rules), enc.precedence)
    hit = enc.cache.get(key)
    if hit is None:
        inputs = _rule_inputs(enc) if mode == "rules" else _ground_inputs(enc)
        res = complete(inputs, enc.precedence, cfg)
        hit = _System(res, res.rewriter(), mode, {})
        enc.cache[key] = hit
    return hit


# ---------------------------------------------------------------------------
# extraction

def _steps_from(enc: Encoding, t) -> list:
    memo = enc.cache.setdefault(("succ", id(enc.rules)), {})
    hit = memo.get(t)
    if hit is None:
        hit = memo[t] = successors(enc.rules, t)
    return hit


def _domain_step(enc: Encoding, term, pos: tuple, target) -> RewriteStep:
    """A step of the domain rules at or below ``pos`` whose result there matches ``target``."""
    n = len(pos)
    for st in _steps_from(enc, term):
        if st.position[:n] != pos:
            continue
        if match_lhs(target, subterm_at(st.after, pos)) is not None:
            return st
    raise NonInvertible(f"no domain rule rewrites {subterm_at(term, pos)} to {target} "
                        f"at position {list(pos)} of {term}")


def _base(enc: Encoding):
    def base(item, forward, pos, term):
        l, r = (item.lhs, item.rhs) if forward else (item.rhs, item.lhs)
        try:
            theta = match_lhs(l, subterm_at(term, pos))
        except InvalidPosition as exc:
            raise InconsistentStep(str(exc)) from None
        if theta is None:
            raise InconsistentStep(f"{l} does not match at {list(pos)} of {term}")
        st = _domain_step(enc, term, pos, apply_subst(r, theta))
        return st.after, st
    return base


def _expand_leg(enc: Encoding, start, steps, archive) -> list:
    out = []
    term = start
    base = _base(enc)
    for st in steps:
        if st.before != term:
            raise InconsistentStep(f"trace step starts at {st.before}, expected {term}")
        if archive is not None and hasattr(st.rule, "links"):
            end, sub = expand(archive, st.rule.id, st.forward, st.position, term, base)
            if end != st.after:
                raise InconsistentStep(f"expansion reached {end}, expected {st.after}")
            out.extend(sub)
            term = end
        else:
            apply_step(st)
            out.append(st)
            term = st.after
    return out


def _reverse_leg(enc: Encoding, steps) -> list:
    """Run a leg backwards, realizing every reversed step with a domain rule."""
    out = []
    for st in reversed(steps):
        out.append(_domain_step(enc, st.after, st.position, subterm_at(st.before, st.position)))
    return out


def extract_plan(enc: Encoding, trace: ProofTrace) -> Plan:
    """Turn a valley proof into a plan from ``trace.start`` to ``trace.goal``.

    The start leg is used as is; the goal leg is reversed with inverse rule
    steps.  Every intermediate term must encode a state.
    """
    left = _expand_leg(enc, trace.start, trace.left, trace.archive)
    right = _expand_leg(enc, trace.goal, trace.right, trace.archive)
    witness = left + _reverse_leg(enc, right)
    actions = []
    for st in witness:
        if not enc.in_T(st.before) or not enc.in_T(st.after):
            bad = st.before if not enc.in_T(st.before) else st.after
            raise TermNotInT(f"witness term {bad} does not encode a state")
        if is_rearrangement(enc.rules, st):
            continue
        actions.append(label_action(enc, st))
    return Plan(tuple(actions), tuple(witness), trace.start, trace.goal)


# ---------------------------------------------------------------------------
# planning

def plan(enc: Encoding, start: Mapping, goal: Mapping, cfg: CompletionConfig | None = None,
         *, optimize: bool = True, grounding: str = "auto", budget: int = 100_000,
         probe: int = 2000):
    """Plan from ``start`` to ``goal``; returns a :class:`Plan` or None (no plan).

    ``grounding`` selects the completed system: ``"never"`` completes the
    domain rules themselves, ``"always"`` completes their whole-term ground
    instances over the term set, and ``"auto"`` tries the first and falls
    back to the second when the first does not saturate (its critical-pair
    generation is capped at ``probe``) or yields a proof that leaves the
    term set.  None is returned only from a saturated
    system; otherwise :class:`BudgetExhausted` signals an inconclusive run.
    """
    if grounding not in GROUNDING_MODES:
        raise ValueError(f"grounding must be one of {GROUNDING_MODES}")
    theory = enc.theory
    start = theory.require_state(start)
    goal = theory.require_state(goal)
    s, t = enc.find_term(start), enc.find_term(goal)
    modes = {"auto": ("rules", "ground"), "never": ("rules",), "always": ("ground",)}[grounding]
    reason = "no completed system was conclusive"
    for mode in modes:
        mode_cfg = cfg or CompletionConfig()
        if grounding == "auto" and mode == "rules":
            mode_cfg = replace(mode_cfg, max_generated=min(probe, mode_cfg.max_generated or probe))
        system = completion_system(enc, mode_cfg, mode)
        trace = system.join(s, t, budget)
        if trace is None:
            if system.saturated:
                return None
            reason = f"completion of the {mode} system did not saturate"
            continue
        try:
            p = extract_plan(enc, trace)
        except (NonInvertible, NoAction, InconsistentStep, TermNotInT) as exc:
            reason = f"proof from the {mode} system could not be replayed: {exc}"
            continue
        if validate_plan(theory, start, p) != goal:
            reason = f"proof from the {mode} system gave an invalid plan"
            continue
        return optimize_plan(theory, p, enc) if optimize else p
    raise BudgetExhausted(f"inconclusive: {reason}")


# ---------------------------------------------------------------------------
# optimization

def _trajectory(theory, start, actions):
    states = [start]
    for a in actions:
        nxt = theory.do(a, states[-1])
        if nxt is None:
            return None
        states.append(nxt)
    return states


def _drop_cycles(theory, start, actions):
    states = _trajectory(theory, start, actions)
    first = {}
    for i, s in enumerate(states):
        if s in first:
            j = first[s]
            return actions[:j] + actions[i:], True
        first[s] = i
    return actions, False


def _commute_cancel(theory, start, actions):
    """Move a later action next to an earlier one when that makes them cancel."""
    states = _trajectory(theory, start, actions)
    final = states[-1]
    for j in range(1, len(actions)):
        for i in range(j - 1, -1, -1):
            cand = actions[:i + 1] + (actions[j],) + actions[i + 1:j] + actions[j + 1:]
            traj = _trajectory(theory, start, cand)
            if traj is None or traj[-1] != final:
                continue
            if traj[i + 2] == traj[i]:
                return cand[:i] + cand[i + 2:], True
    return actions, False


def _shortcut(theory, start, actions):
    """Replace a run of two or more actions by one action with the same effect."""
    states = _trajectory(theory, start, actions)
    n = len(actions)
    for length in range(n, 1, -1):
        for i in range(0, n - length + 1):
            target = states[i + length]
            for a, nxt in theory.transitions(states[i]):
                if nxt == target:
                    return actions[:i] + (a,) + actions[i + length:], True
    return actions, False


def _rebuild_witness(enc: Encoding, start_term, actions, goal_term):
    """Rewrite steps realizing ``actions`` from ``start_term``, ending at ``goal_term``."""
    from collections import deque
    theory = enc.theory

    def e_reach(t):
        # terms reachable with rearrangement steps, with their paths
        paths = {t: []}
        queue = deque([t])
        while queue:
            u = queue.popleft()
            for st in _steps_from(enc, u):
                if is_rearrangement(enc.rules, st) and st.after not in paths:
                    paths[st.after] = paths[u] + [st]
                    queue.append(st.after)
        return paths

    term = start_term
    out = []
    for a in actions:
        want = theory.do(a, enc.sigma(term))
        found = None
        for u, path in e_reach(term).items():
            for st in _steps_from(enc, u):
                if not is_rearrangement(enc.rules, st) and enc.in_T(st.after) \
                        and enc.sigma(st.after) == want:
                    found = path + [st]
                    break
            if found:
                break
        if found is None:
            return None
        out.extend(found)
        term = found[-1].after
    tail = e_reach(term).get(goal_term)
    if tail is None:
        return None
    return out + tail


def optimize_plan(theory: GroundTheory, plan: Plan, enc: Encoding | None = None, *,
                  start: Mapping | None = None) -> Plan:
    """Shorten a valid plan without changing its endpoints.

    State cycles are cut out, an action that can be moved back next to an
    earlier action it undoes is removed together with it, and a run of
    actions whose net effect is a single action is replaced by that action;
    repeated until nothing changes.  With ``enc`` the rewrite witness is rebuilt for the
    shorter plan.  The start state is ``start`` if given, else read off
    ``plan.start`` (a state, or a term when ``enc`` is given).
    """
    if start is None:
        if enc is not None and plan.start is not None:
            start = enc.sigma(plan.start)
        elif isinstance(plan.start, Mapping):
            start = plan.start
        else:
            raise ValueError("optimize_plan needs a start state")
    if not isinstance(start, FluentAssignment):
        start = FluentAssignment(start)
    actions = tuple(plan.actions)
    if _trajectory(theory, start, actions) is None:
        raise ValueError("optimize_plan needs a valid plan")
    changed = True
    while changed:
        actions, c1 = _drop_cycles(theory, start, actions)
        actions, c2 = _commute_cancel(theory, start, actions)
        actions, c3 = _shortcut(theory, start, actions)
        changed = c1 or c2 or c3
    if actions == tuple(plan.actions):
        return plan
    witness = ()
    if enc is not None and plan.start is not None and plan.goal is not None:
        w = _rebuild_witness(enc, plan.start, actions, plan.goal)
        witness = tuple(w) if w is not None else ()
    return Plan(actions, witness, plan.start, plan.goal)
