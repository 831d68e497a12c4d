"""Subshift specifications, language oracles and window-scale property checks.

Languages are computed three ways:

* full shifts: every pattern, exactly;
* shifts of finite type on the integers: exactly, by extending candidates
  through the block graph (a pattern is globally admissible iff it sits on a
  path whose ends have infinite backward and forward continuations);
* everything else: patterns on ``F`` that extend to a locally admissible
  window on ``F·B(margin)``. This over-approximates the language and is
  labelled ``"upper"``. Finite groups are the exception: the margin region is
  the whole group, so the result is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, GroupError, ShiftAutError, SupportError
from .groups import (
    DEFAULT_BUDGET,
    Embedding,
    FiniteGroup,
    Group,
    Integers,
    ball,
    set_product,
    subset,
)
from .pattern import Pattern
from .report import FAIL, INCONCLUSIVE, PASS, Report

EXACT, UPPER = "exact", "upper"


class UndeclaredFix(ShiftAutError):
    """Fix(X) is neither computable for this subshift nor declared."""


@dataclass(frozen=True, eq=False)
class SubshiftSpec:
    """A subshift of ``alphabet^group``.

    ``kind`` is ``"full"``, ``"sft"`` (``forbidden`` patterns), ``"oracle"``
    (``predicate`` decides local admissibility of possibly partial windows and
    must be monotone under restriction) or ``"restricted"`` (built by
    :func:`restrict_subshift`). ``K``, ``M`` and ``fix`` are optional declared
    constants.
    """

    group: Group
    alphabet: tuple
    kind: str = "full"
    forbidden: tuple = ()
    K: tuple | None = None
    M: tuple | None = None
    fix: tuple | None = None
    predicate: Callable[[Pattern], bool] | None = None
    exact: bool = False
    ambient: "SubshiftSpec | None" = None
    embedding: Embedding | None = None
    name: str = ""

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        if not alphabet:
            raise SupportError("alphabet must be nonempty")
        if len(set(alphabet)) != len(alphabet):
            raise SupportError("alphabet has duplicate symbols")
        if self.kind not in ("full", "sft", "oracle", "restricted"):
            raise SupportError(f"unknown subshift kind {self.kind!r}")
        for p in self.forbidden:
            if not len(p):
                raise SupportError("forbidden patterns need nonempty support")
            if p.group != self.group:
                raise SupportError("forbidden pattern lives on another group")
            for v in p.values:
                if v not in alphabet:
                    raise SupportError(f"forbidden pattern uses unknown symbol {v!r}")
        if self.kind == "sft" and not self.forbidden:
            object.__setattr__(self, "kind", "full")
        if self.kind == "oracle" and self.predicate is None:
            raise SupportError("oracle subshifts need a predicate")
        for name in ("K", "M", "fix"):
            val = getattr(self, name)
            if val is not None:
                object.__setattr__(self, name, subset(self.group, val))
        if self.fix is not None:
            fx = set(self.fix)
            if self.group.identity not in fx:
                raise GroupError("declared Fix must contain the identity")
            for a in self.fix:
                for b in self.fix:
                    if self.group._mul(a, b) not in fx:
                        raise GroupError("declared Fix is not closed under multiplication")
            if self.K is not None and not fx <= set(self.K):
                raise GroupError("declared Fix must lie inside K")

    @property
    def index(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    def to_json(self) -> dict:
        if self.kind not in ("full", "sft"):
            raise SupportError(f"{self.kind} subshifts have no JSON form")
        g = self.group
        doc: dict[str, Any] = {
            "group": g.to_json(),
            "alphabet": [_symbol_json(a) for a in self.alphabet],
            "kind": self.kind,
            "forbidden": [p.to_json(self.alphabet) for p in self.forbidden],
        }
        for name in ("K", "M", "fix"):
            val = getattr(self, name)
            if val is not None:
                doc[name] = [g.element_to_json(x) for x in val]
        return doc


def _symbol_json(a):
    return list(a) if isinstance(a, tuple) else a


def _symbol_from_json(a):
    return tuple(a) if isinstance(a, list) else a


def spec_from_json(doc: dict) -> SubshiftSpec:
    from .groups import group_from_json

    group = group_from_json(doc["group"])
    alphabet = tuple(_symbol_from_json(a) for a in doc["alphabet"])
    kind = doc.get("kind", "full")
    if kind not in ("full", "sft"):
        raise SupportError(f"subshift kind {kind!r} cannot be loaded from JSON")
    forbidden = tuple(Pattern.from_json(group, alphabet, p) for p in doc.get("forbidden", []))
    opt = {}
    for name in ("K", "M", "fix"):
        if doc.get(name) is not None:
            opt[name] = [group.element_from_json(x) for x in doc[name]]
    return SubshiftSpec(group, alphabet, kind, forbidden, **opt)


# -- common fixtures ---------------------------------------------------------

def full_shift(group: Group, alphabet: Sequence, **kw) -> SubshiftSpec:
    return SubshiftSpec(group, tuple(alphabet), "full", **kw)


def sft(group: Group, alphabet: Sequence, forbidden: Iterable[Pattern], **kw) -> SubshiftSpec:
    return SubshiftSpec(group, tuple(alphabet), "sft", tuple(forbidden), **kw)


def golden_mean(group: Group | None = None, step=None, **kw) -> SubshiftSpec:
    """No two adjacent 1s along ``step`` (default: the integers with step 1)."""
    group = group or Integers()
    step = 1 if step is None else step
    bad = Pattern(group, {group.identity: 1, step: 1})
    # the action is faithful: a shifted copy of a single 1 differs from it
    kw.setdefault("fix", (group.identity,))
    return sft(group, (0, 1), [bad], name="golden-mean", **kw)


def boundary_sft(group=None) -> SubshiftSpec:
    """Pointer SFT on F_2 over the generators: if ``x(g)=t`` then ``x(gs)=s^-1`` for all ``s != t``."""
    from .groups import FreeGroup

    group = group or FreeGroup(2)
    gens = group.generators
    forbidden = []
    for t in gens:
        for s in gens:
            if s == t:
                continue
            for v in gens:
                if v != group.inv(s):
                    forbidden.append(Pattern(group, {group.identity: t, s: v}))
    return sft(group, gens, forbidden, name="boundary")


# -- languages ---------------------------------------------------------------

class Language:
    """Patterns on a fixed support, stored as rows of symbol indices in lexicographic order."""

    def __init__(self, group: Group, alphabet: tuple, support: tuple, rows: np.ndarray, label: str):
        self.group = group
        self.alphabet = alphabet
        self.support = support
        rows = np.asarray(rows, dtype=np.int32)
        if support or rows.ndim != 2:
            rows = rows.reshape(-1, len(support))
        if len(rows) > 1:
            order = np.lexsort(rows.T[::-1])
            rows = rows[order]
        self.rows = rows
        self.label = label
        self._set = None

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def keys(self) -> set:
        if self._set is None:
            self._set = {tuple(r) for r in self.rows.tolist()}
        return self._set

    def pattern(self, i: int) -> Pattern:
        return Pattern.from_values(self.group, self.support, [self.alphabet[v] for v in self.rows[i]])

    def patterns(self) -> list[Pattern]:
        return [self.pattern(i) for i in range(len(self.rows))]

    def __iter__(self):
        return iter(self.patterns())

    def __contains__(self, p: Pattern) -> bool:
        if tuple(p.support) != self.support:
            return False
        idx = {a: i for i, a in enumerate(self.alphabet)}
        try:
            return tuple(idx[v] for v in p.values) in self.keys
        except KeyError:
            return False


def all_rows(base: int, width: int, budget: int | None = None) -> np.ndarray:
    """Every word of length ``width`` over ``range(base)``, lexicographically."""
    cap = DEFAULT_BUDGET if budget is None else budget
    total = base**width
    if total > cap:
        raise BudgetExceeded("pattern enumeration", total, cap)
    if width == 0:
        return np.zeros((1, 0), dtype=np.int32)
    grids = np.indices((base,) * width, dtype=np.int32)
    return grids.reshape(width, -1).T.copy()


class _Placements:
    """Forbidden-pattern placements inside an ordered region, indexed by their last cell."""

    def __init__(self, spec: SubshiftSpec, cells: Sequence):
        group = spec.group
        self.cells = tuple(cells)
        pos = {c: i for i, c in enumerate(self.cells)}
        self.pos = pos
        index = spec.index
        self.by_last: list[list[tuple[tuple, tuple]]] = [[] for _ in self.cells]
        self.all: list[tuple[tuple, tuple]] = []
        for p in spec.forbidden:
            supp = p.support
            anchor_inv = group.inv(supp[0])
            vals = tuple(index[v] for v in p.values)
            seen = set()
            for c in self.cells:
                g = group._mul(c, anchor_inv)
                if g in seen:
                    continue
                seen.add(g)
                idx = []
                for s in supp:
                    j = pos.get(group._mul(g, s))
                    if j is None:
                        break
                    idx.append(j)
                else:
                    item = (tuple(idx), vals)
                    self.all.append(item)
                    self.by_last[max(idx)].append(item)


class _Backtracker:
    """Depth-first search over a region: enumerate the first ``k`` cells, witness-extend the rest."""

    def __init__(self, spec: SubshiftSpec, cells: Sequence, budget: int):
        self.spec = spec
        self.cells = tuple(cells)
        self.base = len(spec.alphabet)
        self.budget = budget
        self.placements = _Placements(spec, cells) if spec.kind == "sft" else None
        self.predicate = spec.predicate if spec.kind == "oracle" else None

    def _ok(self, i: int, vals: list) -> bool:
        if self.placements is not None:
            for idx, vv in self.placements.by_last[i]:
                for j, v in zip(idx, vv):
                    if vals[j] != v:
                        break
                else:
                    return False
        if self.predicate is not None:
            alph = self.spec.alphabet
            partial = Pattern(self.spec.group, ((self.cells[j], alph[vals[j]]) for j in range(i + 1)))
            if not self.predicate(partial):
                return False
        return True

    def run(self, k: int, domains: Sequence[Sequence[int]] | None = None, first_only: bool = False) -> list:
        n = len(self.cells)
        doms = domains or [range(self.base)] * n
        vals = [0] * n
        out: list[tuple] = []
        nodes = 0

        def extend(i: int) -> bool:
            nonlocal nodes
            if i == n:
                return True
            for a in doms[i]:
                nodes += 1
                vals[i] = a
                if self._ok(i, vals) and extend(i + 1):
                    return True
            return False

        def walk(i: int) -> bool:
            nonlocal nodes
            if nodes > self.budget:
                raise BudgetExceeded("language search nodes", nodes, self.budget)
            if i == k:
                if extend(k):
                    out.append(tuple(vals[:k]))
                    return first_only
                return False
            for a in doms[i]:
                nodes += 1
                vals[i] = a
                if self._ok(i, vals) and walk(i + 1):
                    return True
            return False

        walk(0)
        return out


class _ZBlockGraph:
    """Block graph of an integer SFT: states are words of length ``L-1``."""

    def __init__(self, spec: SubshiftSpec, budget: int):
        self.base = len(spec.alphabet)
        index = spec.index
        forb = []
        span = 1
        for p in spec.forbidden:
            lo = min(p.support)
            offs = tuple(s - lo for s in p.support)
            span = max(span, max(offs) + 1)
            forb.append((offs, tuple(index[v] for v in p.values)))
        L = max(2, span)
        self.L = L
        blocks = all_rows(self.base, L, budget)
        ok = np.ones(len(blocks), dtype=bool)
        for offs, vals in forb:
            for shift in range(L - max(offs)):
                cols = [o + shift for o in offs]
                ok &= ~np.all(blocks[:, cols] == np.array(vals, dtype=np.int32), axis=1)
        self.edges: dict[tuple, list[tuple]] = {}
        self.redges: dict[tuple, list[tuple]] = {}
        states = set()
        for b in blocks[ok].tolist():
            u, v = tuple(b[:-1]), tuple(b[1:])
            self.edges.setdefault(u, []).append(v)
            self.redges.setdefault(v, []).append(u)
            states.add(u)
            states.add(v)
        self.left_ok = self._prune(states, self.redges)
        self.right_ok = self._prune(states, self.edges)
        self.states = sorted(self.left_ok & self.right_ok)

    @staticmethod
    def _prune(states: set, incoming: dict) -> set:
        # keep states with an infinite path of incoming edges
        alive = set(states)
        changed = True
        while changed:
            changed = False
            for s in list(alive):
                if not any(u in alive for u in incoming.get(s, ())):
                    alive.discard(s)
                    changed = True
        return alive

    def language(self, F: Sequence[int], fixed: dict | None = None) -> list[tuple]:
        """Globally admissible value tuples on ``F`` (sorted integers), optionally with pinned cells."""
        fixed = fixed or {}
        if not F:
            return [()] if self.states else []
        m = self.L - 1
        lo, hi = F[0], max(F[-1], F[0] + m - 1)
        fpos = {c: i for i, c in enumerate(F)}

        def allowed(c):
            if c in fixed:
                return (fixed[c],)
            return range(self.base)

        frontier: dict[tuple, set] = {}
        for s in sorted(self.left_ok):
            good = True
            key = []
            for j, a in enumerate(s):
                c = lo + j
                if c in fixed and fixed[c] != a:
                    good = False
                    break
                if c in fpos:
                    key.append(a)
            if good:
                frontier.setdefault(tuple(key), set()).add(s)
        for c in range(lo + m, hi + 1):
            nxt: dict[tuple, set] = {}
            choices = allowed(c)
            for key, sts in frontier.items():
                for s in sts:
                    for v in self.edges.get(s, ()):
                        a = v[-1]
                        if a not in choices:
                            continue
                        nk = key + (a,) if c in fpos else key
                        nxt.setdefault(nk, set()).add(v)
            frontier = nxt
        return sorted(k for k, sts in frontier.items() if sts & self.right_ok)

    def count_interval(self, n: int) -> int:
        """|L_{0..n-1}| by powers of the block adjacency matrix (exact integers)."""
        if n <= 0:
            return 1 if self.states else 0
        m = self.L - 1
        if n < m:
            return len({s[:n] for s in self.states})
        order = sorted(self.left_ok | self.right_ok)
        idx = {s: i for i, s in enumerate(order)}
        size = len(order)
        A = [[0] * size for _ in range(size)]
        for u, vs in self.edges.items():
            if u in idx:
                for v in vs:
                    if v in idx:
                        A[idx[u]][idx[v]] += 1
        vec = [1 if s in self.left_ok else 0 for s in order]
        for _ in range(n - m):
            vec = [sum(vec[i] * A[i][j] for i in range(size)) for j in range(size)]
        return sum(x for x, s in zip(vec, order) if s in self.right_ok)


class LanguageOracle:
    """Membership and language enumeration for a :class:`SubshiftSpec`.

    ``method="margin"`` forces the margin-extension path even where an exact
    method exists (used to cross-check the exact paths).
    """

    def __init__(self, spec: SubshiftSpec, margin: int = 1, budget: int | None = None, method: str = "auto"):
        if margin < 0:
            raise ValueError("margin must be non-negative")
        if method not in ("auto", "margin"):
            raise ValueError(f"unknown method {method!r}")
        self.spec = spec
        self.margin = margin
        self.budget = DEFAULT_BUDGET if budget is None else budget
        self.method = method
        self._cache: dict = {}
        self._zgraph = None
        if spec.kind == "restricted":
            self._ambient = LanguageOracle(spec.ambient, margin, budget, method)

    @property
    def group(self) -> Group:
        return self.spec.group

    @property
    def alphabet(self) -> tuple:
        return self.spec.alphabet

    def _strategy(self) -> str:
        spec = self.spec
        if spec.kind == "restricted":
            return "restricted"
        if spec.kind == "full":
            return "full"
        if self.method == "margin":
            return "margin"
        if spec.kind == "sft" and isinstance(spec.group, Integers):
            return "zsft"
        if isinstance(spec.group, FiniteGroup):
            return "finite"
        return "margin"

    @property
    def exactness(self) -> str:
        strat = self._strategy()
        if strat == "restricted":
            return self._ambient.exactness
        if strat in ("full", "zsft", "finite"):
            return EXACT
        if self.spec.kind == "oracle" and self.spec.exact:
            return EXACT
        return UPPER

    def zgraph(self) -> _ZBlockGraph:
        if self._zgraph is None:
            self._zgraph = _ZBlockGraph(self.spec, self.budget)
        return self._zgraph

    def _region(self, F: tuple) -> tuple:
        group = self.group
        if isinstance(group, FiniteGroup) and self.method == "auto":
            rest = [g for g in group.elements() if g not in set(F)]
            return F + tuple(rest)
        E = set_product(group, F, ball(group, self.margin, self.budget), self.budget) if F else ()
        fset = set(F)
        return F + tuple(g for g in E if g not in fset)

    def language(self, F: Iterable) -> Language:
        F = subset(self.group, F)
        if F in self._cache:
            return self._cache[F]
        strat = self._strategy()
        base = len(self.alphabet)
        if not F:
            # the empty pattern, present iff the subshift is nonempty
            nonempty = strat == "full" or len(self.language([self.group.identity]))
            rows = np.zeros((1 if nonempty else 0, 0), dtype=np.int32)
        elif strat == "full":
            rows = all_rows(base, len(F), self.budget)
        elif strat == "zsft":
            rows = np.array(self.zgraph().language(F), dtype=np.int32).reshape(-1, len(F))
        elif strat == "restricted":
            emb = self.spec.embedding
            image = tuple(emb.forward(h) for h in F)
            amb = self._ambient.language(image)
            cols = [amb.support.index(x) for x in image]
            rows = amb.rows[:, cols] if len(F) else amb.rows[:, :0]
            rows = np.unique(rows, axis=0) if len(rows) else rows
        else:
            region = self._region(F)
            found = _Backtracker(self.spec, region, self.budget).run(len(F))
            rows = np.array(found, dtype=np.int32).reshape(-1, len(F))
        lang = Language(self.group, self.alphabet, F, rows, self.exactness)
        self._cache[F] = lang
        return lang

    def count(self, F: Iterable) -> int:
        F = subset(self.group, F)
        strat = self._strategy()
        if strat == "full":
            return len(self.alphabet) ** len(F)
        if strat == "zsft" and F and list(F) == list(range(F[0], F[0] + len(F))):
            return self.zgraph().count_interval(len(F))
        return len(self.language(F))

    def contains(self, p: Pattern) -> bool:
        if p.group != self.group:
            raise SupportError("pattern lives on another group")
        index = self.spec.index
        if any(v not in index for v in p.values):
            return False
        strat = self._strategy()
        if strat == "full":
            return True
        F = p.support
        vals = tuple(index[v] for v in p.values)
        if F in self._cache:
            return vals in self._cache[F].keys
        if strat == "zsft":
            return bool(self.zgraph().language(F, dict(zip(F, vals))))
        if strat == "restricted":
            emb = self.spec.embedding
            return self._ambient.contains(Pattern(emb.ambient, ((emb.forward(h), v) for h, v in p.items())))
        region = self._region(F)
        doms = [(v,) for v in vals] + [range(len(self.alphabet))] * (len(region) - len(F))
        return bool(_Backtracker(self.spec, region, self.budget).run(len(F), doms, first_only=True))

    def is_trivial(self) -> bool:
        """At most one point: detected by |L_{1_G}| <= 1."""
        return self.count([self.group.identity]) <= 1


def locally_admissible(spec: SubshiftSpec, w: Pattern) -> bool:
    """No forbidden pattern occurs inside ``w`` (always true for full shifts)."""
    if spec.kind == "full":
        return all(v in spec.index for v in w.values)
    if spec.kind == "oracle":
        return bool(spec.predicate(w))
    if spec.kind == "restricted":
        emb = spec.embedding
        return locally_admissible(spec.ambient, Pattern(emb.ambient, ((emb.forward(h), v) for h, v in w.items())))
    index = spec.index
    vals = [index.get(v, -1) for v in w.values]
    if -1 in vals:
        return False
    pl = _Placements(spec, w.support)
    for idx, vv in pl.all:
        if all(vals[j] == v for j, v in zip(idx, vv)):
            return False
    return True


def margin_interval_count(spec: SubshiftSpec, n: int, margin: int, budget: int | None = None) -> int:
    """Distinct middles of locally admissible words on ``-margin..n-1+margin`` (integers only)."""
    if not isinstance(spec.group, Integers):
        raise GroupError("interval counts are defined on the integers")
    cells = tuple(range(n)) + tuple(range(-margin, 0)) + tuple(range(n, n + margin))
    cap = DEFAULT_BUDGET if budget is None else budget
    return len(_Backtracker(spec, cells, cap).run(n))


# -- Fix(X) ------------------------------------------------------------------

@dataclass(frozen=True)
class FixGroup:
    """The kernel of the shift action, as a finite set or the whole group."""

    group: Group
    elements: tuple | None
    source: str

    def __contains__(self, g) -> bool:
        return True if self.elements is None else g in self.elements

    @property
    def is_whole_group(self) -> bool:
        return self.elements is None

    def to_json(self):
        if self.elements is None:
            return "G"
        return [self.group.element_to_json(g) for g in self.elements]


def _configurations(oracle: LanguageOracle) -> Language:
    group = oracle.group
    return oracle.language(group.elements())


def fix_subgroup(spec: SubshiftSpec, oracle: LanguageOracle | None = None) -> FixGroup:
    group = spec.group
    oracle = oracle or LanguageOracle(spec)
    if isinstance(group, FiniteGroup) and spec.kind != "restricted":
        configs = _configurations(oracle)
        elems = group.elements()
        fixed = []
        for g in elems:
            ginv = group.inv(g)
            perm = [group._mul(ginv, h) for h in elems]
            if all(row[perm[h]] == row[h] for row in configs.rows.tolist() for h in elems):
                fixed.append(g)
        return FixGroup(group, tuple(fixed), "computed")
    if spec.fix is not None:
        return FixGroup(group, spec.fix, "declared")
    if spec.kind == "full":
        if len(spec.alphabet) == 1:
            return FixGroup(group, None, "computed")
        return FixGroup(group, (group.identity,), "computed")
    if oracle.is_trivial() and oracle.exactness == EXACT:
        return FixGroup(group, None, "computed")
    raise UndeclaredFix("Fix(X) is not computable for this subshift and was not declared")


def fix_or_assumed(spec: SubshiftSpec, oracle: LanguageOracle | None = None) -> FixGroup:
    """Like :func:`fix_subgroup`, assuming a faithful action when nothing is known."""
    try:
        return fix_subgroup(spec, oracle)
    except UndeclaredFix:
        return FixGroup(spec.group, (spec.group.identity,), "assumed")


def fixes_language(oracle: LanguageOracle, g, F: Iterable) -> Pattern | None:
    """Window-scale test that ``g`` fixes X: a pattern on ``F ∪ gF`` with ``p(h) != p(g^-1 h)``, or None."""
    group = oracle.group
    F = subset(group, F)
    U = subset(group, list(F) + [group._mul(g, f) for f in F])
    lang = oracle.language(U)
    pos = {c: i for i, c in enumerate(U)}
    ginv = group.inv(g)
    pairs = [(pos[h], pos[group._mul(ginv, h)]) for h in U if group._mul(ginv, h) in pos]
    for i, row in enumerate(lang.rows.tolist()):
        if any(row[a] != row[b] for a, b in pairs):
            return lang.pattern(i)
    return None


# -- property checks ---------------------------------------------------------

def _subsets_upto(D: tuple, cap: int):
    for size in range(1, cap + 1):
        yield from itertools.combinations(D, size)


def check_strong_irreducibility(
    oracle: LanguageOracle, K: Iterable, size_cap: int = 4, radius: int = 2, region: Iterable | None = None
) -> Report:
    """Exhaustive pair test: for supports S, T in the test region with SK ∩ T empty, L_S ∨ L_T ⊆ L_{S∪T}."""
    group = oracle.group
    K = subset(group, K)
    D = subset(group, region) if region is not None else ball(group, radius)
    tested = 0
    for S in _subsets_upto(D, size_cap):
        SK = set(set_product(group, S, K))
        LS = oracle.language(S)
        for T in _subsets_upto(D, size_cap):
            if SK.intersection(T):
                continue
            LT = oracle.language(T)
            U = subset(group, S + T)
            LU = oracle.language(U).keys
            upos = {c: i for i, c in enumerate(U)}
            for p in LS.rows.tolist():
                for q in LT.rows.tolist():
                    tested += 1
                    row = [-1] * len(U)
                    clash = False
                    for c, v in zip(LS.support, p):
                        row[upos[c]] = v
                    for c, v in zip(LT.support, q):
                        j = upos[c]
                        if row[j] not in (-1, v):
                            clash = True
                        row[j] = v
                    if clash or tuple(row) not in LU:
                        pat_p = Pattern.from_values(group, S, [oracle.alphabet[v] for v in p])
                        pat_q = Pattern.from_values(group, T, [oracle.alphabet[v] for v in q])
                        return Report(
                            "strong-irreducibility",
                            FAIL,
                            {"K": [group.element_to_json(k) for k in K], "pairs_tested": tested},
                            witness={
                                "S": [group.element_to_json(s) for s in S],
                                "T": [group.element_to_json(t) for t in T],
                                "p": pat_p.to_json(oracle.alphabet),
                                "q": pat_q.to_json(oracle.alphabet),
                            },
                            label=oracle.exactness,
                            raw=(S, T, pat_p, pat_q),
                        )
    return Report(
        "strong-irreducibility",
        PASS,
        {"K": [group.element_to_json(k) for k in K], "pairs_tested": tested, "size_cap": size_cap},
        label=oracle.exactness,
    )


def check_strong_tmp(
    oracle: LanguageOracle, M: Iterable, size_cap: int = 4, radius: int = 2, region: Iterable | None = None
) -> Report:
    """Splice test: windows on ``FM·B(margin)`` agreeing on ``FM∖F`` can be spliced across ``F``."""
    group = oracle.group
    M = subset(group, M)
    D = subset(group, region) if region is not None else ball(group, radius)
    tested = 0
    for F in _subsets_upto(D, size_cap):
        FM = set_product(group, F, M)
        R = set_product(group, FM, ball(group, oracle.margin)) if oracle.margin else FM
        LR = oracle.language(R)
        keys = LR.keys
        pos = {c: i for i, c in enumerate(R)}
        fcols = [pos[c] for c in F]
        fset = set(F)
        collar = [pos[c] for c in FM if c not in fset]
        groups: dict[tuple, list] = {}
        for row in LR.rows.tolist():
            groups.setdefault(tuple(row[j] for j in collar), []).append(row)
        for rows in groups.values():
            for x in rows:
                for y in rows:
                    tested += 1
                    z = list(y)
                    for j in fcols:
                        z[j] = x[j]
                    if tuple(z) not in keys:
                        return Report(
                            "strong-tmp",
                            FAIL,
                            {"M": [group.element_to_json(m) for m in M], "splices_tested": tested},
                            witness={
                                "F": [group.element_to_json(c) for c in F],
                                "x": Pattern.from_values(group, R, [oracle.alphabet[v] for v in x]).to_json(oracle.alphabet),
                                "y": Pattern.from_values(group, R, [oracle.alphabet[v] for v in y]).to_json(oracle.alphabet),
                            },
                            label=oracle.exactness,
                            raw=(F, x, y),
                        )
    return Report(
        "strong-tmp",
        PASS,
        {"M": [group.element_to_json(m) for m in M], "splices_tested": tested, "size_cap": size_cap},
        label=oracle.exactness,
    )


def language_growth_check(oracle: LanguageOracle, K: Iterable, F: Iterable) -> Report:
    """|L_F| >= |L_1|^{|F|/(2|K|)}, compared exactly as |L_F|^{2|K|} >= |L_1|^{|F|}."""
    group = oracle.group
    K = subset(group, K)
    F = subset(group, F)
    lf = oracle.count(F)
    l1 = oracle.count([group.identity])
    ok = lf ** (2 * len(K)) >= l1 ** len(F)
    bound = float(l1) ** (len(F) / (2 * len(K))) if l1 else 0.0
    return Report(
        "language-growth",
        PASS if ok else FAIL,
        {"L_F": lf, "L_1": l1, "F_size": len(F), "K_size": len(K), "bound": bound},
        label=oracle.exactness,
    )


def restrict_subshift(spec: SubshiftSpec, embedding: Embedding) -> SubshiftSpec:
    """The subshift of the subgroup, answering language queries through the ambient oracle."""
    if embedding.ambient != spec.group:
        raise GroupError("embedding targets a different group")
    K = M = fix = None
    if spec.K is not None:
        K = embedding.preimage(spec.K)
    if spec.M is not None:
        M = [h for h in (embedding.backward(m) for m in spec.M) if h is not None]
        if embedding.sub.identity not in M:
            M.append(embedding.sub.identity)
    if spec.fix is not None:
        fix = embedding.preimage(spec.fix)
    return SubshiftSpec(
        embedding.sub,
        spec.alphabet,
        "restricted",
        K=K,
        M=M,
        fix=fix,
        ambient=spec,
        embedding=embedding,
        name=f"{spec.name}|H" if spec.name else "",
    )


def with_constants(spec: SubshiftSpec, **kw) -> SubshiftSpec:
    return replace(spec, **kw)
