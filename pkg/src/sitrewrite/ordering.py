"""Lexicographic path ordering over a total symbol precedence."""

from __future__ import annotations

import enum
import re
from typing import Iterable

from .errors import ParseError, UnknownSymbol
from .terms import variables

__all__ = ["Order", "Precedence", "lpo_compare", "lpo_greater", "orient"]


class Order(enum.Enum):
    GREATER = ">"
    LESS = "<"
    EQUAL = "="
    INCOMPARABLE = "?"


class Precedence:
    """Strict total order on symbols, given from greatest to least."""

    def __init__(self, symbols: Iterable[str]):
        symbols = list(symbols)
        if len(set(symbols)) != len(symbols):
            dup = sorted({s for s in symbols if symbols.count(s) > 1})
            raise ValueError(f"symbols listed more than once in precedence: {dup}")
        self.symbols = tuple(symbols)
        n = len(symbols)
        self._rank = {s: n - i for i, s in enumerate(symbols)}
        self._gt: dict = {}

    @classmethod
    def parse(cls, text: str) -> "Precedence":
        """Parse ``a > b > c`` (an optional leading ``prec:`` is accepted)."""
        text = text.strip()
        if text.startswith("prec:"):
            text = text[5:]
        parts = [p.strip() for p in text.split(">")]
        if not all(re.fullmatch(r"[A-Za-z0-9_]+", p) for p in parts):
            raise ParseError(f"malformed precedence {text!r}")
        return cls(parts)

    def rank(self, name: str) -> int:
        try:
            return self._rank[name]
        except KeyError:
            raise UnknownSymbol(f"symbol {name!r} missing from precedence") from None

    def __contains__(self, name):
        return name in self._rank

    def covers(self, names: Iterable[str]) -> bool:
        return all(n in self._rank for n in names)

    def __eq__(self, other):
        return isinstance(other, Precedence) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __str__(self):
        return " > ".join(self.symbols)

    def __repr__(self):
        return f"Precedence({list(self.symbols)!r})"


def _gt(prec: Precedence, s, t) -> bool:
    if s.is_var or s == t:
        return False
    if t.is_var:
        return t.name in variables(s)
    key = (s, t)
    cache = prec._gt
    hit = cache.get(key)
    if hit is not None:
        return hit
    result = _gt_uncached(prec, s, t)
    if len(cache) > 500_000:
        cache.clear()
    cache[key] = result
    return result


def _gt_uncached(prec, s, t) -> bool:
    rs, rt = prec.rank(s.head), prec.rank(t.head)
    # when the head wins, some s_i >= t would already imply s > t_j for all j
    if rs > rt:
        return all(_gt(prec, s, tj) for tj in t.args)
    if rs == rt:
        # same symbol, hence same arity
        for i, (si, ti) in enumerate(zip(s.args, t.args)):
            if si != ti:
                if _gt(prec, si, ti) and all(_gt(prec, s, tj) for tj in t.args[i + 1:]):
                    return True
                break
    return any(si == t or _gt(prec, si, t) for si in s.args)


def lpo_greater(prec: Precedence, s, t) -> bool:
    """s >_lpo t."""
    return _gt(prec, s, t)


def lpo_compare(prec: Precedence, s, t) -> Order:
    if s == t:
        return Order.EQUAL
    if _gt(prec, s, t):
        return Order.GREATER
    if _gt(prec, t, s):
        return Order.LESS
    return Order.INCOMPARABLE


def orient(prec: Precedence, l, r):
    """Return ``(lhs, rhs)`` with lhs > rhs, or None when unorientable."""
    o = lpo_compare(prec, l, r)
    if o is Order.GREATER:
        return l, r
    if o is Order.LESS:
        return r, l
    return None
