"""Finitely supported patterns and their translation/overlap algebra."""

from __future__ import annotations

from typing import Any, Iterable, Mapping, Sequence

from .errors import PatternConflict, SupportError
from .groups import Group


class Pattern:
    """A map from a finite subset of a group to symbols.

    The translate ``g.p`` has support ``gF`` and value ``p(g^-1 t)`` at ``t``.
    Equality includes the support, so the empty pattern only equals itself.
    """

    __slots__ = ("group", "cells", "_hash")

    def __init__(self, group: Group, cells: Mapping | Iterable[tuple]):
        items = cells.items() if isinstance(cells, Mapping) else cells
        self.group = group
        self.cells = dict(sorted(((group.check(g), v) for g, v in items), key=lambda kv: group.key(kv[0])))
        self._hash = None

    @classmethod
    def from_values(cls, group: Group, support: Sequence, values: Sequence) -> "Pattern":
        if len(support) != len(values):
            raise SupportError("support and values differ in length")
        if len(set(support)) != len(support):
            raise SupportError("support has duplicates")
        return cls(group, zip(support, values))

    @property
    def support(self) -> tuple:
        return tuple(self.cells)

    @property
    def values(self) -> tuple:
        return tuple(self.cells.values())

    def __getitem__(self, g):
        return self.cells[g]

    def get(self, g, default=None):
        return self.cells.get(g, default)

    def __contains__(self, g) -> bool:
        return g in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def items(self):
        return self.cells.items()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pattern):
            return NotImplemented
        return self.group == other.group and self.cells == other.cells

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.cells.items()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{self.group.format(g)}: {v!r}" for g, v in self.cells.items())
        return f"Pattern({{{body}}})"

    # algebra, delegating to the module-level functions
    def translate(self, g) -> "Pattern":
        return translate(g, self)

    def restrict(self, F: Iterable) -> "Pattern":
        return restrict(self, F)

    def __or__(self, other: "Pattern") -> "Pattern":
        return concat(self, other)

    def __le__(self, other: "Pattern") -> bool:
        return is_subpattern(self, other)

    # serialization
    def to_json(self, alphabet: Sequence) -> dict:
        index = {a: i for i, a in enumerate(alphabet)}
        return {
            "support": [self.group.element_to_json(g) for g in self.cells],
            "values": [index[v] for v in self.cells.values()],
        }

    @classmethod
    def from_json(cls, group: Group, alphabet: Sequence, doc: Mapping) -> "Pattern":
        support = [group.element_from_json(x) for x in doc["support"]]
        values = doc["values"]
        for v in values:
            if not isinstance(v, int) or not 0 <= v < len(alphabet):
                raise SupportError(f"symbol index {v!r} out of range for alphabet of size {len(alphabet)}")
        return cls.from_values(group, support, [alphabet[v] for v in values])


def translate(g, p: Pattern) -> Pattern:
    grp = p.group
    grp.check(g)
    return Pattern(grp, ((grp._mul(g, h), v) for h, v in p.cells.items()))


def concat(p: Pattern, q: Pattern) -> Pattern:
    if p.group != q.group:
        raise SupportError("patterns live on different groups")
    cells = dict(p.cells)
    for h, v in q.cells.items():
        if h in cells and cells[h] != v:
            raise PatternConflict(h, cells[h], v)
        cells[h] = v
    return Pattern(p.group, cells)


def overlap_witness(p: Pattern, g) -> Any:
    """First ``h`` in ``F ∩ gF`` with ``p(h) != p(g^-1 h)``, or ``None`` if ``p`` is g-overlapping."""
    grp = p.group
    ginv = grp.inv(grp.check(g))
    cells = p.cells
    for h, v in cells.items():
        src = grp._mul(ginv, h)
        if src in cells and cells[src] != v:
            return h
    return None


def is_g_overlapping(p: Pattern, g) -> bool:
    """True iff ``p`` agrees with ``g.p`` on the common support (vacuously true when it is empty)."""
    return overlap_witness(p, g) is None


def restrict(p: Pattern, F: Iterable) -> Pattern:
    F = tuple(F)
    missing = [g for g in F if g not in p.cells]
    if missing:
        raise SupportError(f"{missing[0]!r} is not in the support")
    return Pattern(p.group, ((g, p.cells[g]) for g in F))


def is_subpattern(p: Pattern, q: Pattern) -> bool:
    return p.group == q.group and all(h in q.cells and q.cells[h] == v for h, v in p.cells.items())
