"""Finitely generated groups with canonical element forms and word metrics.

Elements are plain hashable Python values, one representation per kind:

* ``Integers``: ``int``
* ``Lattice(d)``: ``tuple`` of ``d`` ints
* ``FreeGroup(k)``: reduced word as a tuple of nonzero ints, ``i+1`` for the
  generator ``a_i`` and ``-(i+1)`` for its inverse; serialized as letters
  (``"aB"`` is ``a b^-1``)
* ``FiniteGroup``: index into the multiplication table
* ``DirectProduct``: pair ``(left, right)``

Finite subsets are tuples sorted by ``group.key`` with no duplicates.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .errors import BudgetExceeded, GroupError

DEFAULT_BUDGET = int(os.environ.get("SHIFTAUT_BUDGET", "2000000"))

INFINITE = math.inf


def _budget(budget: int | None) -> int:
    return DEFAULT_BUDGET if budget is None else budget


class Group:
    """Common interface. Subclasses are frozen dataclasses, so equal specs compare equal."""

    kind: str = ""
    generators: tuple = ()

    # -- element arithmetic -------------------------------------------------
    @property
    def identity(self):
        raise NotImplementedError

    def _mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def contains(self, g) -> bool:
        raise NotImplementedError

    def key(self, g):
        """Sort key defining the canonical order of elements."""
        return g

    def check(self, g):
        if not self.contains(g):
            raise GroupError(f"{g!r} is not an element of {self}")
        return g

    def mul(self, g, h):
        self.check(g)
        self.check(h)
        return self._mul(g, h)

    def prod(self, *elements):
        out = self.identity
        for g in elements:
            out = self._mul(out, g)
        return out

    def power(self, g, n: int):
        base = g if n >= 0 else self.inv(g)
        out = self.identity
        for _ in range(abs(n)):
            out = self._mul(out, base)
        return out

    # -- metric -----------------------------------------------------------
    def uses_standard_generators(self) -> bool:
        return tuple(self.generators) == tuple(self.default_generators())

    def default_generators(self) -> tuple:
        raise NotImplementedError

    def word_length(self, g) -> int:
        self.check(g)
        if self.uses_standard_generators():
            return self._standard_length(g)
        return _bfs_word_length(self, g)

    def _standard_length(self, g) -> int:
        return _bfs_word_length(self, g)

    def sphere_sizes(self, r: int, budget: int | None = None) -> list[int]:
        """Sizes of the spheres of radius 0..r (exact integers, no enumeration when a formula exists)."""
        if self.uses_standard_generators():
            sizes = self._standard_spheres(r)
            if sizes is not None:
                return sizes
        return _bfs_sphere_sizes(self, r, budget)

    def _standard_spheres(self, r: int) -> list[int] | None:
        return None

    def ball_size(self, r: int, budget: int | None = None) -> int:
        if r < 0:
            return 0
        return sum(self.sphere_sizes(r, budget))

    @property
    def is_finite(self) -> bool:
        return False

    def diameter(self) -> float:
        return INFINITE

    def is_central(self, g) -> bool:
        raise NotImplementedError

    # -- serialization ------------------------------------------------------
    def params(self) -> dict:
        return {}

    def element_to_json(self, g) -> Any:
        return g

    def element_from_json(self, obj) -> Any:
        return self.check(obj)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params(),
            "generators": [self.element_to_json(s) for s in self.generators],
        }

    def format(self, g) -> str:
        return json.dumps(self.element_to_json(g))

    def _validate_generators(self):
        gens = tuple(self.generators)
        for s in gens:
            self.check(s)
        if len(set(gens)) != len(gens):
            raise GroupError("generating set has duplicates")
        if set(self.inv(s) for s in gens) != set(gens):
            raise GroupError("generating set is not symmetric")
        if self.identity in gens:
            raise GroupError("generating set must not contain the identity")


def _bfs_spheres(group: Group, r: int, budget: int | None):
    cap = _budget(budget)
    seen = {group.identity}
    frontier = [group.identity]
    spheres = [frontier]
    for _ in range(r):
        nxt = []
        for g in frontier:
            for s in group.generators:
                h = group._mul(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > cap:
                        raise BudgetExceeded("ball", f">{cap}", cap)
        if not nxt:
            break
        spheres.append(nxt)
        frontier = nxt
    return spheres


def _bfs_sphere_sizes(group: Group, r: int, budget: int | None) -> list[int]:
    sizes = [len(s) for s in _bfs_spheres(group, r, budget)]
    return sizes + [0] * (r + 1 - len(sizes))


def _bfs_word_length(group: Group, g, budget: int | None = None) -> int:
    if g == group.identity:
        return 0
    cap = _budget(budget)
    seen = {group.identity}
    frontier = [group.identity]
    n = 0
    while frontier:
        n += 1
        nxt = []
        for x in frontier:
            for s in group.generators:
                h = group._mul(x, s)
                if h == g:
                    return n
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        if len(seen) > cap:
            raise BudgetExceeded("word length search", f">{cap}", cap)
        frontier = nxt
    raise GroupError(f"{g!r} is not reachable from the generators")


def _convolve(a: list[int], b: list[int], r: int) -> list[int]:
    out = [0] * (r + 1)
    for i, x in enumerate(a[: r + 1]):
        if x:
            for j, y in enumerate(b[: r + 1 - i]):
                out[i + j] += x * y
    return out


@dataclass(frozen=True)
class Integers(Group):
    generators: tuple = (1, -1)
    kind = "integers"

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        self._validate_generators()
        if math.gcd(*[abs(s) for s in self.generators]) != 1:
            raise GroupError("generators do not generate the integers")

    def default_generators(self):
        return (1, -1)

    @property
    def identity(self):
        return 0

    def _mul(self, g, h):
        return g + h

    def inv(self, g):
        return -g

    def contains(self, g):
        return isinstance(g, int) and not isinstance(g, bool)

    def _standard_length(self, g):
        return abs(g)

    def _standard_spheres(self, r):
        return [1] + [2] * r

    def is_central(self, g):
        self.check(g)
        return True

    def __repr__(self):
        return "Integers()" if self.uses_standard_generators() else f"Integers({self.generators})"


@dataclass(frozen=True)
class Lattice(Group):
    d: int = 2
    generators: tuple = ()
    kind = "lattice"

    def __post_init__(self):
        if self.d < 1:
            raise GroupError("lattice dimension must be positive")
        gens = tuple(tuple(s) for s in self.generators) or self.default_generators()
        object.__setattr__(self, "generators", gens)
        self._validate_generators()
        if gens != self.default_generators():
            reach = {tuple(x) for x in _flatten(_bfs_spheres(self, 2 * self.d + 4, 10**6))}
            for e in self.default_generators():
                if e not in reach:
                    raise GroupError("generators do not generate the lattice (checked to bounded radius)")

    def default_generators(self):
        out = []
        for i in range(self.d):
            for sign in (1, -1):
                v = [0] * self.d
                v[i] = sign
                out.append(tuple(v))
        return tuple(out)

    @property
    def identity(self):
        return (0,) * self.d

    def _mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def contains(self, g):
        return (
            isinstance(g, tuple)
            and len(g) == self.d
            and all(isinstance(a, int) and not isinstance(a, bool) for a in g)
        )

    def _standard_length(self, g):
        return sum(abs(a) for a in g)

    def _standard_spheres(self, r):
        line = [1] + [2] * r
        out = line
        for _ in range(self.d - 1):
            out = _convolve(out, line, r)
        return out

    def is_central(self, g):
        self.check(g)
        return True

    def params(self):
        return {"d": self.d}

    def element_to_json(self, g):
        return list(g)

    def element_from_json(self, obj):
        return self.check(tuple(obj) if isinstance(obj, list) else obj)

    def __repr__(self):
        return f"Lattice({self.d})"


def _flatten(spheres):
    for s in spheres:
        yield from s


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class FreeGroup(Group):
    k: int = 2
    generators: tuple = ()
    kind = "free"

    def __post_init__(self):
        if not 0 <= self.k <= len(_LETTERS):
            raise GroupError("free group rank must be between 0 and 26")
        gens = tuple(tuple(s) for s in self.generators) or self.default_generators()
        object.__setattr__(self, "generators", gens)
        self._validate_generators()

    def default_generators(self):
        out = []
        for i in range(1, self.k + 1):
            out += [(i,), (-i,)]
        return tuple(out)

    @property
    def identity(self):
        return ()

    def _mul(self, g, h):
        # cancel the longest suffix of g against the prefix of h
        i = 0
        n = min(len(g), len(h))
        while i < n and g[len(g) - 1 - i] == -h[i]:
            i += 1
        return g[: len(g) - i] + h[i:]

    def inv(self, g):
        return tuple(-c for c in reversed(g))

    def contains(self, g):
        if not isinstance(g, tuple):
            return False
        for i, c in enumerate(g):
            if not isinstance(c, int) or isinstance(c, bool) or c == 0 or abs(c) > self.k:
                return False
            if i and g[i - 1] == -c:
                return False
        return True

    def key(self, g):
        return (len(g), tuple((abs(c), c < 0) for c in g))

    def letter(self, i: int, sign: int = 1):
        """Generator ``a_i`` (0-based) or its inverse."""
        return ((i + 1) * sign,)

    def _standard_length(self, g):
        return len(g)

    def _standard_spheres(self, r):
        if self.k == 0:
            return [1] + [0] * r
        return [1] + [2 * self.k * (2 * self.k - 1) ** (n - 1) for n in range(1, r + 1)]

    def diameter(self):
        return 0 if self.k == 0 else INFINITE

    @property
    def is_finite(self):
        return self.k == 0

    def is_central(self, g):
        self.check(g)
        return self.k <= 1 or g == ()

    def params(self):
        return {"k": self.k}

    def element_to_json(self, g):
        return "".join(
            _LETTERS[abs(c) - 1] if c > 0 else _LETTERS[abs(c) - 1].upper() for c in g
        )

    def element_from_json(self, obj):
        if not isinstance(obj, str):
            raise GroupError(f"free group elements serialize as letter strings, got {obj!r}")
        if obj in ("", "1"):
            return ()
        word = ()
        for ch in obj:
            idx = _LETTERS.find(ch.lower())
            if idx < 0 or idx >= self.k:
                raise GroupError(f"letter {ch!r} is not a generator of F_{self.k}")
            word = self._mul(word, ((idx + 1) if ch.islower() else -(idx + 1),))
        return word

    def format(self, g):
        return self.element_to_json(g) or "1"

    def __repr__(self):
        return f"FreeGroup({self.k})"


@dataclass(frozen=True)
class FiniteGroup(Group):
    """Group given by a multiplication table ``table[g][h] = gh`` over ``0..n-1``."""

    table: tuple = ()
    generators: tuple = ()
    kind = "finite-table"

    def __post_init__(self):
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", table)
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise GroupError("multiplication table must be a nonempty square")
        if any(not 0 <= x < n for row in table for x in row):
            raise GroupError("multiplication table entries out of range")
        ident = [e for e in range(n) if table[e] == tuple(range(n))
                 and all(table[g][e] == g for g in range(n))]
        if not ident:
            raise GroupError("no identity element in table")
        object.__setattr__(self, "_e", ident[0])
        inverses = []
        for g in range(n):
            cands = [h for h in range(n) if table[g][h] == ident[0] and table[h][g] == ident[0]]
            if not cands:
                raise GroupError(f"element {g} has no inverse")
            inverses.append(cands[0])
        object.__setattr__(self, "_inverses", tuple(inverses))
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise GroupError(f"table is not associative at ({a},{b},{c})")
        gens = tuple(self.generators) or self.default_generators()
        object.__setattr__(self, "generators", gens)
        self._validate_generators()
        if self.ball_size(n) != n:
            raise GroupError("generators do not generate the group")

    @property
    def n(self) -> int:
        return len(self.table)

    def default_generators(self):
        return tuple(g for g in range(len(self.table)) if g != self._e)

    @property
    def identity(self):
        return self._e

    def _mul(self, g, h):
        return self.table[g][h]

    def inv(self, g):
        return self._inverses[g]

    def contains(self, g):
        return isinstance(g, int) and not isinstance(g, bool) and 0 <= g < len(self.table)

    @property
    def is_finite(self):
        return True

    def elements(self) -> tuple:
        return tuple(range(self.n))

    def _lengths(self) -> dict:
        cached = self.__dict__.get("_length_cache")
        if cached is None:
            cached = {}
            for n, sphere in enumerate(_bfs_spheres(self, self.n, None)):
                for g in sphere:
                    cached[g] = n
            object.__setattr__(self, "_length_cache", cached)
        return cached

    def word_length(self, g):
        self.check(g)
        return self._lengths()[g]

    def diameter(self):
        return max(self._lengths().values())

    def is_central(self, g):
        self.check(g)
        return all(self.table[g][h] == self.table[h][g] for h in range(self.n))

    def center(self) -> tuple:
        return tuple(g for g in range(self.n) if self.is_central(g))

    def params(self):
        return {"table": [list(row) for row in self.table]}

    def __repr__(self):
        return f"FiniteGroup(n={self.n})"


def cyclic_group(n: int) -> FiniteGroup:
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    if n == 1:
        gens: tuple = ()
    elif n == 2:
        gens = (1,)
    else:
        gens = (1, n - 1)
    return FiniteGroup(table=table, generators=gens)


@dataclass(frozen=True)
class DirectProduct(Group):
    left: Group = field(default_factory=Integers)
    right: Group = field(default_factory=Integers)
    generators: tuple = ()
    kind = "direct-product"

    def __post_init__(self):
        gens = tuple(tuple(s) for s in self.generators) or self.default_generators()
        object.__setattr__(self, "generators", gens)
        self._validate_generators()

    def default_generators(self):
        return tuple((s, self.right.identity) for s in self.left.generators) + tuple(
            (self.left.identity, s) for s in self.right.generators
        )

    @property
    def identity(self):
        return (self.left.identity, self.right.identity)

    def _mul(self, g, h):
        return (self.left._mul(g[0], h[0]), self.right._mul(g[1], h[1]))

    def inv(self, g):
        return (self.left.inv(g[0]), self.right.inv(g[1]))

    def contains(self, g):
        return (
            isinstance(g, tuple)
            and len(g) == 2
            and self.left.contains(g[0])
            and self.right.contains(g[1])
        )

    def key(self, g):
        return (self.left.key(g[0]), self.right.key(g[1]))

    def word_length(self, g):
        self.check(g)
        if self.uses_standard_generators():
            return self.left.word_length(g[0]) + self.right.word_length(g[1])
        return _bfs_word_length(self, g)

    def sphere_sizes(self, r, budget=None):
        if self.uses_standard_generators():
            return _convolve(self.left.sphere_sizes(r, budget), self.right.sphere_sizes(r, budget), r)
        return _bfs_sphere_sizes(self, r, budget)

    @property
    def is_finite(self):
        return self.left.is_finite and self.right.is_finite

    def diameter(self):
        return self.left.diameter() + self.right.diameter()

    def is_central(self, g):
        self.check(g)
        return self.left.is_central(g[0]) and self.right.is_central(g[1])

    def params(self):
        return {"left": self.left.to_json(), "right": self.right.to_json()}

    def element_to_json(self, g):
        return [self.left.element_to_json(g[0]), self.right.element_to_json(g[1])]

    def element_from_json(self, obj):
        if not (isinstance(obj, (list, tuple)) and len(obj) == 2):
            raise GroupError(f"direct-product elements serialize as pairs, got {obj!r}")
        return (self.left.element_from_json(obj[0]), self.right.element_from_json(obj[1]))

    def format(self, g):
        return f"({self.left.format(g[0])}, {self.right.format(g[1])})"

    def __repr__(self):
        return f"DirectProduct({self.left!r}, {self.right!r})"


# -- JSON --------------------------------------------------------------------

def group_from_json(doc: dict) -> Group:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise GroupError("group document needs a 'kind' field")
    kind = doc["kind"]
    params = doc.get("params", {}) or {}
    raw_gens = doc.get("generators") or []
    if kind == "integers":
        g: Group = Integers()
    elif kind in ("lattice", "integer-lattice"):
        g = Lattice(int(params.get("d", 2)))
    elif kind == "free":
        g = FreeGroup(int(params.get("k", 2)))
    elif kind == "finite-table":
        g = FiniteGroup(table=params["table"])
    elif kind == "direct-product":
        g = DirectProduct(group_from_json(params["left"]), group_from_json(params["right"]))
    else:
        raise GroupError(f"unknown group kind {kind!r}")
    if raw_gens:
        gens = tuple(g.element_from_json(s) for s in raw_gens)
        if gens != g.generators:
            if kind == "integers":
                g = Integers(gens)
            elif kind in ("lattice", "integer-lattice"):
                g = Lattice(g.d, gens)
            elif kind == "free":
                g = FreeGroup(g.k, gens)
            elif kind == "finite-table":
                g = FiniteGroup(table=params["table"], generators=gens)
            else:
                g = DirectProduct(g.left, g.right, gens)
    return g


# -- finite subsets ----------------------------------------------------------

def subset(group: Group, elements: Iterable) -> tuple:
    """Canonical finite subset: validated, deduplicated, sorted."""
    uniq = {group.check(g) for g in elements}
    return tuple(sorted(uniq, key=group.key))


def ball(group: Group, r: int, budget: int | None = None) -> tuple:
    if r < 0:
        raise GroupError("radius must be non-negative")
    cap = _budget(budget)
    size = group.ball_size(r, budget)
    if size > cap:
        raise BudgetExceeded("ball", size, cap)
    return subset(group, _flatten(_bfs_spheres(group, r, budget)))


def ring(group: Group, r: int, R: int, budget: int | None = None) -> tuple:
    if r >= R:
        raise GroupError(f"ring needs r < R, got r={r}, R={R}")
    inner = set(ball(group, r, budget))
    return tuple(g for g in ball(group, R, budget) if g not in inner)


def set_product(group: Group, F: Iterable, K: Iterable, budget: int | None = None) -> tuple:
    F = tuple(F)
    K = tuple(K)
    cap = _budget(budget)
    if len(F) * len(K) > cap:
        raise BudgetExceeded("set product", len(F) * len(K), cap)
    return subset(group, (group._mul(f, k) for f in F for k in K))


def inverse_set(group: Group, F: Iterable) -> tuple:
    return subset(group, (group.inv(f) for f in F))


def translate_set(group: Group, g, F: Iterable) -> tuple:
    return subset(group, (group._mul(g, f) for f in F))


def is_k_disjoint(group: Group, family: Sequence[Iterable], K: Iterable) -> bool:
    sets = [set(A) for A in family]
    K = tuple(K)
    for i, A in enumerate(sets):
        AK = {group._mul(a, k) for a in A for k in K}
        for j, B in enumerate(sets):
            if j != i and AK & B:
                return False
    return True


# -- subgroups ---------------------------------------------------------------

@dataclass(frozen=True)
class Embedding:
    """Injective homomorphism from ``sub`` into ``ambient``.

    ``backward`` returns the preimage of an ambient element, or ``None`` when
    the element is outside the image.
    """

    sub: Group
    ambient: Group
    forward: Callable[[Any], Any]
    backward: Callable[[Any], Any]

    def image(self, F: Iterable) -> tuple:
        return subset(self.ambient, (self.forward(h) for h in F))

    def preimage(self, F: Iterable) -> tuple:
        out = []
        for g in F:
            h = self.backward(g)
            if h is None:
                raise GroupError(f"{g!r} is not in the embedded subgroup")
            out.append(h)
        return subset(self.sub, out)


def cyclic_embedding(ambient: Group, g) -> Embedding:
    """Embed the integers as the subgroup generated by ``g``.

    ``g`` must have infinite order in a group where ``|g^n| >= |n|`` (true for
    every non-identity element of the integer, lattice and free kinds).
    """
    ambient.check(g)
    if ambient.is_finite or g == ambient.identity:
        raise GroupError("cyclic embedding needs an element of infinite order")
    ginv = ambient.inv(g)

    def backward(x):
        up = down = ambient.identity
        for n in range(ambient.word_length(x) + 1):
            if up == x:
                return n
            if down == x:
                return -n
            up = ambient._mul(up, g)
            down = ambient._mul(down, ginv)
        return None

    return Embedding(Integers(), ambient, lambda n: ambient.power(g, n), backward)


# -- set expressions ---------------------------------------------------------

_BALL = re.compile(r"^\s*B\(\s*(\d+)\s*\)\s*$")
_RING = re.compile(r"^\s*ring\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


def parse_subset(group: Group, expr, budget: int | None = None) -> tuple:
    """Parse ``B(r)``, ``ring(r,R)`` or a JSON list of element forms."""
    if isinstance(expr, (list, tuple)):
        return subset(group, (group.element_from_json(x) for x in expr))
    text = str(expr)
    m = _BALL.match(text)
    if m:
        return ball(group, int(m.group(1)), budget)
    m = _RING.match(text)
    if m:
        return ring(group, int(m.group(1)), int(m.group(2)), budget)
    try:
        items = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupError(f"cannot parse set expression {text!r}: {exc}") from None
    if not isinstance(items, list):
        raise GroupError(f"set expression must be B(r), ring(r,R) or a JSON list, got {text!r}")
    return subset(group, (group.element_from_json(x) for x in items))
