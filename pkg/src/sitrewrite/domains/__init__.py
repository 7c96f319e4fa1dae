"""Built-in theories and encodings, parameterized by size."""

from __future__ import annotations

from .blocks import make_blocks
from .hanoi import make_hanoi
from .river import make_river
from .switches import make_switches

__all__ = ["make_switches", "make_hanoi", "make_river", "make_blocks", "make_domain", "DOMAINS"]

DOMAINS = ("switches", "hanoi", "river", "blocks")


def make_domain(name: str, n: int, variant: str | None = None, positions: int | None = None,
                towers: int | None = None, bridge_slots: int | None = None):
    """Build a domain by name; returns ``(theory, encoding)``."""
    if name == "switches":
        return make_switches(n, variant or "basic")
    if name == "hanoi":
        return make_hanoi(n, variant or "nested", towers=towers)
    if name == "river":
        return make_river(n, 3 if bridge_slots is None else bridge_slots)
    if name == "blocks":
        return make_blocks(n, 2 if positions is None else positions)
    raise ValueError(f"unknown domain {name!r}; expected one of {DOMAINS}")
