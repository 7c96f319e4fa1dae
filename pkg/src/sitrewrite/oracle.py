"""Breadth-first search over a theory's state graph.

This is the reference planner: exhaustive, exact, and independent of the
rewriting machinery.
"""

from __future__ import annotations

from collections import deque
from typing import Mapping

from .theory import FluentAssignment, GroundTheory

__all__ = ["bfs_plan", "reachable_states"]


def _state(theory: GroundTheory, s: Mapping) -> FluentAssignment:
    return s if isinstance(s, FluentAssignment) else theory.assignment(s)


def bfs_plan(theory: GroundTheory, start: Mapping, goal: Mapping):
    """Shortest action sequence from ``start`` to ``goal``, or None if unreachable.

    Successors are expanded in sorted action order, so the answer is
    reproducible.  Returns a :class:`~sitrewrite.planner.Plan` without a
    rewrite witness.
    """
    from .planner import Plan

    start, goal = _state(theory, start), _state(theory, goal)
    if not (theory.is_state(start) and theory.is_state(goal)):
        return None
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if s == goal:
            actions = []
            while parent[s] is not None:
                s, a = parent[s]
                actions.append(a)
            return Plan(tuple(reversed(actions)))
        for a, nxt in theory.transitions(s):
            if nxt not in parent:
                parent[nxt] = (s, a)
                queue.append(nxt)
    return None


def reachable_states(theory: GroundTheory, start: Mapping) -> set:
    start = _state(theory, start)
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for _, nxt in theory.transitions(s):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen
