"""First-order terms, positions, substitutions, matching and unification.

Terms are immutable and hashable.  A variable is a :class:`Var`; everything
else is an :class:`App` of a function symbol to a tuple of arguments
(constants are applications with no arguments).  Positions are tuples of
1-based argument indices, the empty tuple being the root.

The external syntax is::

    term := IDENT | '?' IDENT | IDENT '(' term (',' term)* ')'

with ``IDENT = [A-Za-z0-9_]+``; whitespace is ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import ArityMismatch, InvalidPosition, ParseError, UnknownSymbol

__all__ = [
    "Symbol", "Signature", "Term", "Var", "App", "Position", "Substitution",
    "HOLE", "const", "parse_term", "size", "variables", "is_ground",
    "positions", "subterms", "subterm_at", "replace_at", "apply_subst",
    "match_lhs", "unify", "rename_apart", "compose",
]

Position = tuple  # tuple[int, ...], 1-based, () is the root
Substitution = Mapping  # Mapping[str, Term]


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int

    def __post_init__(self):
        if not self.name:
            raise ValueError("symbol name must be nonempty")
        if self.arity < 0:
            raise ValueError("arity must be non-negative")


class Var:
    __slots__ = ("name", "_hash")
    is_var = True

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash(("?", name)))

    def __setattr__(self, key, value):
        raise AttributeError("terms are immutable")

    def __eq__(self, other):
        return other.__class__ is Var and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.name!r})"

    def __str__(self):
        return "?" + self.name

    @property
    def args(self):
        return ()

    @property
    def size(self):
        return 1

    @property
    def ground(self):
        return False

    def __reduce__(self):
        return (Var, (self.name,))


class App:
    __slots__ = ("head", "args", "_hash", "size", "ground")
    is_var = False

    def __init__(self, head: str, args: Iterable[Term] = ()):
        args = tuple(args)
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "_hash", hash((head, args)))
        object.__setattr__(self, "size", 1 + sum(a.size for a in args))
        object.__setattr__(self, "ground", all(a.ground for a in args))

    def __setattr__(self, key, value):
        raise AttributeError("terms are immutable")

    def __eq__(self, other):
        if self is other:
            return True
        return (other.__class__ is App and self._hash == other._hash
                and self.head == other.head and self.args == other.args)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"App({self.head!r}, {self.args!r})"

    def __str__(self):
        if not self.args:
            return self.head
        return f"{self.head}({','.join(str(a) for a in self.args)})"

    @property
    def arity(self):
        return len(self.args)

    def __reduce__(self):
        return (App, (self.head, self.args))


Term = (Var, App)  # for isinstance checks

#: Placeholder used to mark the hole of a context.
HOLE = App("[]")


def const(name: str) -> App:
    return App(name)


class Signature:
    """A finite set of function symbols with fixed arities."""

    def __init__(self, symbols: Iterable[Symbol | tuple] = (), max_arity: int | None = None):
        self._symbols: dict[str, Symbol] = {}
        self.max_arity = max_arity
        for s in symbols:
            if not isinstance(s, Symbol):
                s = Symbol(*s)
            self.add(s.name, s.arity)

    def add(self, name: str, arity: int) -> Symbol:
        old = self._symbols.get(name)
        if old is not None:
            if old.arity != arity:
                raise ArityMismatch(f"symbol {name} declared with arity {old.arity} and {arity}")
            return old
        if self.max_arity is not None and arity > self.max_arity:
            raise ArityMismatch(f"symbol {name} exceeds maximum arity {self.max_arity}")
        sym = Symbol(name, arity)
        self._symbols[name] = sym
        return sym

    def __contains__(self, name):
        return name in self._symbols

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._symbols.values())

    def __len__(self):
        return len(self._symbols)

    def __eq__(self, other):
        return isinstance(other, Signature) and self._symbols == other._symbols

    def names(self) -> list[str]:
        return list(self._symbols)

    def arity(self, name: str) -> int:
        try:
            return self._symbols[name].arity
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {name!r}") from None

    def make(self, name: str, *args) -> App:
        if self.arity(name) != len(args):
            raise ArityMismatch(f"{name} expects {self.arity(name)} arguments, got {len(args)}")
        return App(name, args)

    def check(self, t) -> None:
        """Raise unless every symbol of ``t`` is declared with the right arity."""
        if t.is_var:
            return
        if self.arity(t.head) != len(t.args):
            raise ArityMismatch(f"{t.head} expects {self.arity(t.head)} arguments, got {len(t.args)}")
        for a in t.args:
            self.check(a)

    @classmethod
    def of_terms(cls, terms: Iterable) -> "Signature":
        sig = cls()
        for t in terms:
            for s in subterms(t):
                if not s.is_var:
                    sig.add(s.head, len(s.args))
        return sig

    def __str__(self):
        return " ".join(f"{s.name}/{s.arity}" for s in self)

    def __repr__(self):
        return f"Signature({str(self)!r})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z0-9_]+)|(?P<punct>[?(),]))")


def parse_term(text: str, signature: Signature | None = None, *, line: int | None = None,
               column_offset: int = 0):
    """Parse the ASCII term syntax; arity and symbol checks need ``signature``."""
    pos = 0
    n = len(text)

    def error(msg, at):
        raise ParseError(msg, line, column_offset + at + 1)

    def peek():
        m = _TOKEN.match(text, pos)
        return m

    def term():
        nonlocal pos
        m = peek()
        if m is None:
            error("expected a term", pos)
        start = m.start("ident") if m.group("ident") else m.start("punct")
        if m.group("punct") == "?":
            pos = m.end()
            m2 = peek()
            if m2 is None or not m2.group("ident"):
                error("expected a variable name after '?'", pos)
            pos = m2.end()
            return Var(m2.group("ident"))
        if not m.group("ident"):
            error(f"unexpected {m.group('punct')!r}", start)
        name = m.group("ident")
        pos = m.end()
        args = []
        m = peek()
        if m is not None and m.group("punct") == "(":
            pos = m.end()
            while True:
                args.append(term())
                m = peek()
                if m is None:
                    error("unterminated argument list", n)
                if m.group("punct") == ",":
                    pos = m.end()
                    continue
                if m.group("punct") == ")":
                    pos = m.end()
                    break
                error("expected ',' or ')'", m.start())
        if signature is not None:
            if name not in signature:
                raise UnknownSymbol(f"unknown symbol {name!r}"
                                    + (f" at line {line}" if line is not None else ""))
            if signature.arity(name) != len(args):
                raise ArityMismatch(f"{name} expects {signature.arity(name)} arguments, "
                                    f"got {len(args)}" + (f" at line {line}" if line is not None else ""))
        return App(name, args)

    t = term()
    if text[pos:].strip():
        error("trailing input", pos + len(text[pos:]) - len(text[pos:].lstrip()))
    return t


# ---------------------------------------------------------------------------
# structure

def size(t) -> int:
    return t.size


def is_ground(t) -> bool:
    return t.ground


def variables(t) -> set[str]:
    if t.is_var:
        return {t.name}
    if t.ground:
        return set()
    out: set[str] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if s.is_var:
            out.add(s.name)
        elif not s.ground:
            stack.extend(s.args)
    return out


def positions(t) -> list[tuple]:
    """All positions of ``t`` in pre-order (root first, then left to right)."""
    out = []

    def walk(s, p):
        out.append(p)
        for i, a in enumerate(s.args, 1):
            walk(a, p + (i,))

    walk(t, ())
    return out


def subterms(t) -> Iterator:
    """Yield every subterm occurrence (with repetition) in pre-order."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        stack.extend(reversed(s.args))


def subterm_at(t, p: tuple):
    for depth, i in enumerate(p):
        if t.is_var or not 1 <= i <= len(t.args):
            raise InvalidPosition(f"position {list(p)} invalid at depth {depth}")
        t = t.args[i - 1]
    return t


def replace_at(t, p: tuple, u):
    if not p:
        return u
    i = p[0]
    if t.is_var or not 1 <= i <= len(t.args):
        raise InvalidPosition(f"position {list(p)} invalid")
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], u)
    return App(t.head, args)


# ---------------------------------------------------------------------------
# substitutions

def apply_subst(t, theta: Mapping):
    if not theta or t.ground:
        return t
    if t.is_var:
        return theta.get(t.name, t)
    return App(t.head, [apply_subst(a, theta) for a in t.args])


def compose(theta: Mapping, phi: Mapping) -> dict:
    """Substitution equal to applying ``theta`` then ``phi``."""
    out = {x: apply_subst(s, phi) for x, s in theta.items()}
    for x, s in phi.items():
        out.setdefault(x, s)
    return {x: s for x, s in out.items() if not (s.is_var and s.name == x)}


def match_lhs(pattern, subject, theta: Mapping | None = None):
    """Return the substitution θ with pattern·θ == subject, or None.

    Variables of ``subject`` are treated as rigid constants, so this also
    serves as one-sided matching on non-ground terms.
    """
    out = dict(theta) if theta else {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if p.is_var:
            bound = out.get(p.name)
            if bound is None:
                out[p.name] = s
            elif bound != s:
                return None
            continue
        if p.ground:
            if p != s:
                return None
            continue
        if s.is_var or p.head != s.head or len(p.args) != len(s.args):
            return None
        stack.extend(zip(p.args, s.args))
    return out


def _occurs(name, t, theta):
    stack = [t]
    while stack:
        s = stack.pop()
        if s.is_var:
            if s.name == name:
                return True
            b = theta.get(s.name)
            if b is not None:
                stack.append(b)
        elif not s.ground:
            stack.extend(s.args)
    return False


def _walk(t, theta):
    while t.is_var and t.name in theta:
        t = theta[t.name]
    return t


def unify(s, t):
    """Most general unifier of ``s`` and ``t`` (idempotent), or None."""
    theta: dict = {}
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a = _walk(a, theta)
        b = _walk(b, theta)
        if a is b or a == b:
            continue
        if a.is_var:
            if _occurs(a.name, b, theta):
                return None
            theta[a.name] = b
        elif b.is_var:
            if _occurs(b.name, a, theta):
                return None
            theta[b.name] = a
        elif a.head != b.head or len(a.args) != len(b.args):
            return None
        else:
            stack.extend(zip(a.args, b.args))
    # resolve the triangular form into an idempotent substitution
    resolved: dict = {}

    def full(u):
        if u.is_var:
            if u.name in resolved:
                return resolved[u.name]
            if u.name in theta:
                r = full(theta[u.name])
                resolved[u.name] = r
                return r
            return u
        if u.ground:
            return u
        return App(u.head, [full(a) for a in u.args])

    return {x: full(theta[x]) for x in theta}


def rename_apart(t, taken: Iterable[str]):
    """A variant of ``t`` none of whose variables is in ``taken``."""
    taken = set(taken)
    vs = variables(t)
    clash = sorted(vs & taken)
    if not clash:
        return t
    avoid = taken | vs
    theta = {}
    for x in clash:
        i = 0
        while f"{x}{i}" in avoid:
            i += 1
        fresh = f"{x}{i}"
        avoid.add(fresh)
        theta[x] = Var(fresh)
    return apply_subst(t, theta)
