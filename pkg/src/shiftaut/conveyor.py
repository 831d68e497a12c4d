"""Conveyor belts: pointer symbols, belt permutations, traces and the embeddings they give.

Cells carry, per direction ``i``, a backward and a forward pointer. A state is
a pair (position, track) with tracks in ``{TOP, BOTTOM}^k``. The ``i``-th belt
map moves TOP states along forward pointers and BOTTOM states along backward
pointers while the link is reciprocated, and flips track ``i`` otherwise. Its
orbits are cycles, rays, segments or lines; reading track symbols along an
orbit yields a configuration (the trace) on which an outside automorphism acts.

Two pointer sources are supported through :class:`BeltView`:

* the toy belt, whose alphabet directly encodes ``(back, fwd, top, bottom)``;
* egg belts, where each detected egg encodes either fixed translates
  ``γ_i`` (pointers ``γ_i^{±1}``) or explicit directions drawn from a set ``D``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .automorphism import LocalRule, RuleAutomorphism
from .egg import STAR, EggCollection, eta, lift_egg_automorphism
from .errors import SupportError, WindowEdge
from .groups import FreeGroup, Group, Integers, ball, set_product, subset
from .pattern import Pattern

TOP, BOTTOM = kernels.TOP, kernels.BOTTOM


def tracks(k: int) -> list[tuple]:
    """``{TOP, BOTTOM}^k`` in lexicographic order (TOP first)."""
    return list(itertools.product((TOP, BOTTOM), repeat=k))


def flip(t: tuple, i: int) -> tuple:
    return t[:i] + (1 - t[i],) + t[i + 1 :]


@dataclass(frozen=True)
class BeltState:
    position: object
    track: tuple

    @classmethod
    def of(cls, position, track) -> "BeltState":
        return cls(position, (track,) if isinstance(track, int) else tuple(track))


# -- views ---------------------------------------------------------------------

class BeltView:
    """Pointer and track access on a finite window. Subclasses fill in :meth:`pointers` and :meth:`symbol`."""

    group: Group
    k: int
    cells: tuple

    def pointers(self, g) -> tuple | None:
        """``(back_1, fwd_1, ..., back_k, fwd_k)`` at ``g``, ``None`` off the belt; WindowEdge outside."""
        raise NotImplementedError

    def symbol(self, g, t: tuple):
        raise NotImplementedError

    @property
    def size(self) -> int:
        return len(self.cells)


def _consistent(view: BeltView, g, i: int, forward: bool) -> bool:
    p = view.pointers(g)
    if p is None:
        return False
    ptr = p[2 * i + 1] if forward else p[2 * i]
    q = view.pointers(view.group._mul(g, ptr))
    if q is None:
        return False
    recip = q[2 * i] if forward else q[2 * i + 1]
    return view.group.inv(ptr) == recip


def is_forward_consistent(view: BeltView, g, i: int = 0) -> bool:
    return _consistent(view, g, i, True)


def is_backward_consistent(view: BeltView, g, i: int = 0) -> bool:
    return _consistent(view, g, i, False)


def belt_step(view: BeltView, state: BeltState, i: int = 0, inverse: bool = False) -> BeltState:
    """``f_i`` (or its inverse) at a state."""
    g, t = state.position, state.track
    along_fwd = (t[i] == TOP) != inverse
    if _consistent(view, g, i, along_fwd):
        p = view.pointers(g)
        ptr = p[2 * i + 1] if along_fwd else p[2 * i]
        return BeltState(view.group._mul(g, ptr), t)
    return BeltState(g, flip(t, i))


def inverse_step(view: BeltView, state: BeltState, i: int = 0) -> BeltState:
    return belt_step(view, state, i, inverse=True)


@dataclass
class Orbit:
    kind: str
    states: list
    turns: list
    closed: bool
    length: int | None = None

    def label(self) -> str:
        return f"{self.kind}({self.length})" if self.length is not None and self.kind in ("cycle", "segment") else self.kind

    def to_json(self, group: Group) -> dict:
        return {
            "kind": self.kind,
            "length": self.length,
            "closed": self.closed,
            "states": [[group.element_to_json(s.position), list(s.track)] for s in self.states],
            "turns": [[group.element_to_json(g), frm] for g, frm in self.turns],
        }


def _walk(view, start, i, inverse, max_steps):
    states, turns = [], []
    s = start
    for _ in range(max_steps):
        try:
            n = belt_step(view, s, i, inverse)
        except WindowEdge:
            return states, turns, "edge"
        if n.position == s.position:
            # record turns in forward orientation: the track left behind
            frm = s.track[i] if not inverse else n.track[i]
            turns.append((s.position, frm))
        if n == start:
            return states, turns, "closed"
        states.append(n)
        s = n
    return states, turns, "steps"


def orbit_classify(view: BeltView, start: BeltState, i: int = 0, max_steps: int | None = None) -> Orbit:
    """Follow ``f_i`` both ways from ``start`` and name the orbit.

    Closed orbits are ``cycle`` (no turns) or ``segment`` (two turns). Orbits
    cut off by the window are ``ray-backstop`` (one BOTTOM→TOP turn),
    ``ray-frontstop`` (one TOP→BOTTOM turn) or ``exceeds-window`` (no turn seen).
    """
    steps = 4 * view.size if max_steps is None else max_steps
    fwd, fturns, why = _walk(view, start, i, False, steps)
    if why == "closed":
        states = [start] + fwd
        kind = "cycle" if not fturns else "segment"
        return Orbit(kind, states, fturns, True, len(states))
    back, bturns, _ = _walk(view, start, i, True, steps)
    states = list(reversed(back)) + [start] + fwd
    turns = list(reversed(bturns)) + fturns
    if len(turns) >= 2:
        kind = "segment"
    elif len(turns) == 1:
        kind = "ray-backstop" if turns[0][1] == BOTTOM else "ray-frontstop"
    else:
        kind = "exceeds-window"
    return Orbit(kind, states, turns, False)


def word_letters(word_group: Group, u) -> list[tuple[int, bool]]:
    """Letters ``(direction, inverse?)`` of ``u``: integers act through direction 0."""
    if isinstance(word_group, Integers):
        return [(0, u < 0)] * abs(u)
    if isinstance(word_group, FreeGroup):
        return [(abs(x) - 1, x < 0) for x in u]
    raise SupportError("words must come from the integers or a free group")


def xi(view: BeltView, state: BeltState, letters: Sequence[tuple[int, bool]]) -> BeltState:
    """Right action of a word, applying its letters left to right."""
    for i, inverse in letters:
        state = belt_step(view, state, i, inverse)
    return state


def trace(view: BeltView, g, t, word_set: Iterable, word_group: Group | None = None) -> Pattern:
    """Track symbols read along the belt from ``(g, t)`` at each word of ``word_set``."""
    word_group = word_group or (Integers() if view.k == 1 else FreeGroup(view.k))
    start = BeltState.of(g, t)
    if len(start.track) != view.k:
        raise SupportError("track has the wrong number of coordinates")
    cells = {}
    for u in subset(word_group, word_set):
        s = xi(view, start, word_letters(word_group, u))
        cells[u] = view.symbol(s.position, s.track)
    return Pattern(word_group, cells)


# -- toy belt -------------------------------------------------------------------

@dataclass(frozen=True)
class ToyBelt:
    """Belt alphabet ``B0 ≅ S² × A²`` plus ``extra`` non-belt symbols.

    Symbols are integers; symbol ``c < |B0|`` decodes to
    ``(S[s], S[t], A[a], A[b])`` with ``c = ((s·|S| + t)·|A| + a)·|A| + b``.
    """

    group: Group
    pointers: tuple
    track_alphabet: tuple
    extra: int = 1

    def __post_init__(self):
        g = self.group
        object.__setattr__(self, "pointers", tuple(g.check(s) for s in self.pointers))
        object.__setattr__(self, "track_alphabet", tuple(self.track_alphabet))
        S = set(self.pointers)
        if len(S) != len(self.pointers):
            raise SupportError("pointer set has duplicates")
        if any(g.inv(s) not in S for s in S):
            raise SupportError("pointer set must be symmetric")
        if self.extra < 0:
            raise ValueError("extra must be non-negative")

    @property
    def n_belt(self) -> int:
        return len(self.pointers) ** 2 * len(self.track_alphabet) ** 2

    @property
    def alphabet(self) -> tuple:
        return tuple(range(self.n_belt + self.extra))

    def encode(self, back, fwd, top, bottom) -> int:
        nS, nA = len(self.pointers), len(self.track_alphabet)
        s, t = self.pointers.index(back), self.pointers.index(fwd)
        a, b = self.track_alphabet.index(top), self.track_alphabet.index(bottom)
        return ((s * nS + t) * nA + a) * nA + b

    def decode(self, c: int):
        """``(back, fwd, top, bottom)`` or ``None`` for a non-belt symbol."""
        if not 0 <= c < self.n_belt + self.extra:
            raise SupportError(f"symbol {c!r} outside the belt alphabet")
        if c >= self.n_belt:
            return None
        nS, nA = len(self.pointers), len(self.track_alphabet)
        c, b = divmod(c, nA)
        c, a = divmod(c, nA)
        s, t = divmod(c, nS)
        return self.pointers[s], self.pointers[t], self.track_alphabet[a], self.track_alphabet[b]

    def arrays(self):
        """Kernel arrays: ``code`` (0 off-belt, else 1 + pointer-pair index), ``back``/``fwd`` by code, ``top``/``bot`` by symbol, ``inv_s``."""
        nS, nA = len(self.pointers), len(self.track_alphabet)
        n = self.n_belt + self.extra
        code = np.zeros(n, dtype=np.int32)
        top = np.zeros(n, dtype=np.int32)
        bot = np.zeros(n, dtype=np.int32)
        for c in range(self.n_belt):
            rest, b = divmod(c, nA)
            pair, a = divmod(rest, nA)
            code[c] = 1 + pair
            top[c], bot[c] = a, b
        back = np.zeros(1 + nS * nS, dtype=np.int32)
        fwd = np.zeros(1 + nS * nS, dtype=np.int32)
        for pair in range(nS * nS):
            back[1 + pair], fwd[1 + pair] = divmod(pair, nS)
        g = self.group
        inv_s = np.array([self.pointers.index(g.inv(s)) for s in self.pointers], dtype=np.int32)
        enc = np.zeros((nS, nS, nA, nA), dtype=np.int32)
        for s, t, a, b in itertools.product(range(nS), range(nS), range(nA), range(nA)):
            enc[s, t, a, b] = ((s * nS + t) * nA + a) * nA + b
        return {"code": code, "back": back, "fwd": fwd, "top": top, "bot": bot, "inv_s": inv_s, "enc": enc}

    def neighbours(self, cells: Sequence) -> np.ndarray:
        """``nbr[p, s]``: index of ``cells[p]·S[s]`` in ``cells`` or -1."""
        pos = {c: i for i, c in enumerate(cells)}
        g = self.group
        return np.array([[pos.get(g._mul(c, s), -1) for s in self.pointers] for c in cells], dtype=np.int32).reshape(len(cells), len(self.pointers))

    def to_json(self) -> dict:
        g = self.group
        return {
            "kind": "toy",
            "group": g.to_json(),
            "pointers": [g.element_to_json(s) for s in self.pointers],
            "tracks": list(self.track_alphabet),
            "extra": self.extra,
            "phi": [
                [g.element_to_json(d[0]), g.element_to_json(d[1]), d[2], d[3]]
                for d in (self.decode(c) for c in range(self.n_belt))
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ToyBelt":
        from .groups import group_from_json

        g = group_from_json(doc["group"])
        belt = cls(g, [g.element_from_json(s) for s in doc["pointers"]], doc["tracks"], doc.get("extra", 1))
        if "phi" in doc:
            table = [[g.element_from_json(r[0]), g.element_from_json(r[1]), r[2], r[3]] for r in doc["phi"]]
            if len(table) != belt.n_belt or any(tuple(r) != belt.decode(c) for c, r in enumerate(table)):
                raise SupportError("belt table does not match the canonical encoding")
        return belt


class ToyView(BeltView):
    def __init__(self, belt: ToyBelt, w: Pattern):
        self.belt = belt
        self.group = belt.group
        self.k = 1
        self.window = w
        self.cells = w.support

    def _cell(self, g):
        if g not in self.window:
            raise WindowEdge(g)
        return self.belt.decode(self.window[g])

    def pointers(self, g):
        d = self._cell(g)
        return None if d is None else (d[0], d[1])

    def symbol(self, g, t):
        d = self._cell(g)
        if d is None:
            raise SupportError(f"no track symbol at non-belt cell {g!r}")
        return d[2] if t[0] == TOP else d[3]


def straight_belt(belt: ToyBelt, cells: Sequence, tops: Sequence, bottoms: Sequence, step=None) -> Pattern:
    """A consistent chain along consecutive ``cells`` (each the previous times ``step``) with given track symbols."""
    g = belt.group
    step = belt.pointers[0] if step is None else step
    back = g.inv(step)
    vals = [belt.encode(back, step, a, b) for a, b in zip(tops, bottoms)]
    return Pattern.from_values(g, cells, vals)


def toy_step_arrays(belt: ToyBelt, codes: np.ndarray, cells: Sequence) -> tuple[np.ndarray, np.ndarray]:
    """One step of ``f_x`` and ``f_x^{-1}`` for every state of every window.

    ``codes`` has one row per window (kernel codes, see :meth:`ToyBelt.arrays`).
    State ``2p + t`` is (cell ``p``, track ``t``); ``-1`` marks a step that
    needs a cell outside the window.
    """
    arr = belt.arrays()
    nbr = belt.neighbours(cells)
    n_rows, n = codes.shape
    nxt = np.empty((n_rows, 2 * n), dtype=np.int32)
    prv = np.empty((n_rows, 2 * n), dtype=np.int32)
    for p in range(n):
        for t in (TOP, BOTTOM):
            pos0 = np.full(n_rows, p, dtype=np.int32)
            trk0 = np.full(n_rows, t, dtype=np.int32)
            for forward, out in ((True, nxt), (False, prv)):
                pos, trk = kernels.belt_walk(codes, nbr, arr["inv_s"], arr["back"], arr["fwd"], pos0, trk0, 1, forward)
                out[:, 2 * p + t] = np.where(pos >= 0, 2 * pos + trk, -1)
    return nxt, prv


# -- psi for the toy belt ------------------------------------------------------

def _phi_radius(phi: LocalRule) -> int:
    if not isinstance(phi.group, Integers):
        raise SupportError("the toy belt carries automorphisms of a shift on the integers")
    return max(abs(f) for f in phi.memory)


def psi_toy_memory(belt: ToyBelt, rho: int) -> tuple:
    g = belt.group
    step = subset(g, list(belt.pointers) + [g.identity])
    mem = (g.identity,)
    for _ in range(rho):
        mem = set_product(g, mem, step)
    return mem


def psi_toy_rule(phi: LocalRule, belt: ToyBelt) -> LocalRule:
    """``ψ(φ)``: pointers and non-belt symbols kept, tracks rewritten by ``φ`` along each belt."""
    if tuple(phi.in_alphabet) != belt.track_alphabet or tuple(phi.out_alphabet) != belt.track_alphabet:
        raise SupportError("phi must act on the track alphabet")
    rho = _phi_radius(phi)
    memory = psi_toy_memory(belt, rho)
    arr = belt.arrays()
    nbr = belt.neighbours(memory)
    centre = memory.index(belt.group.identity)
    offsets = list(phi.memory)

    def evaluator(rows: np.ndarray) -> np.ndarray:
        n = rows.shape[0]
        codes = arr["code"][rows]
        new = []
        for t in (TOP, BOTTOM):
            vals = np.empty((n, len(offsets)), dtype=np.int32)
            need = {f: j for j, f in enumerate(offsets)}
            for forward in (True, False):
                pos = np.full(n, centre, dtype=np.int32)
                trk = np.full(n, t, dtype=np.int32)
                for step in range(0, rho + 1):
                    f = step if forward else -step
                    if f in need:
                        safe = np.maximum(pos, 0)
                        sym = rows[np.arange(n), safe]
                        vals[:, need[f]] = np.where(trk == TOP, arr["top"][sym], arr["bot"][sym])
                    if step < rho:
                        pos, trk = kernels.belt_walk(codes, nbr, arr["inv_s"], arr["back"], arr["fwd"], pos, trk, 1, forward)
            new.append(phi.evaluate(vals))
        c = codes[:, centre]
        s_idx = arr["back"][c]
        f_idx = arr["fwd"][c]
        encoded = arr["enc"][s_idx, f_idx, new[0], new[1]]
        return np.where(c > 0, encoded, rows[:, centre])

    return LocalRule(belt.group, memory, belt.alphabet, evaluator=evaluator, name=f"psi({phi.name})")


def psi_toy(phi: RuleAutomorphism | LocalRule, belt: ToyBelt) -> RuleAutomorphism | LocalRule:
    if isinstance(phi, RuleAutomorphism):
        return RuleAutomorphism(psi_toy_rule(phi.forward, belt), psi_toy_rule(phi.inverse, belt), f"psi({phi.name})")
    return psi_toy_rule(phi, belt)


def psi_toy_reference(phi: LocalRule, belt: ToyBelt, w: Pattern) -> Pattern:
    """Direct evaluation of ``ψ(φ)`` on a window through :func:`trace` (independent of the kernels)."""
    view = ToyView(belt, w)
    rho = _phi_radius(phi)
    memory = psi_toy_memory(belt, rho)
    g = belt.group
    cells = set(w.support)
    out = {}
    for c in w.support:
        if not all(g._mul(c, m) in cells for m in memory):
            continue
        d = belt.decode(w[c])
        if d is None:
            out[c] = w[c]
            continue
        new = []
        for t in (TOP, BOTTOM):
            tr = trace(view, c, t, phi.memory, Integers())
            new.append(phi.apply(tr)[0])
        out[c] = belt.encode(d[0], d[1], new[0], new[1])
    return Pattern(g, out)


def injectivity_witness(phi1: LocalRule, phi2: LocalRule, belt: ToyBelt, path: Sequence | None = None, anchor_index: int | None = None):
    """Window separating ``ψ(φ1)`` and ``ψ(φ2)`` at an anchor cell.

    Finds ``z`` with ``φ1(z)(0) != φ2(z)(0)`` and writes ``z(i)`` on the top
    track of the ``i``-th cell of a consistent belt laid along ``path``
    (default: a straight line through the identity along the first pointer).
    Returns ``(window, anchor, z)``, or ``None`` if the rules agree everywhere.
    """
    from .automorphism import equals_on_language

    cmp = equals_on_language(phi1, phi2)
    if cmp.equal:
        return None
    z = cmp.witness
    g = belt.group
    a0 = belt.track_alphabet[0]
    if path is None:
        rho = max(_phi_radius(phi1), _phi_radius(phi2))
        step = belt.pointers[0]
        path = [g.power(step, i) for i in range(-rho - 1, rho + 2)]
        anchor_index = rho + 1
    elif anchor_index is None:
        raise SupportError("a supplied path needs an anchor index")
    n = len(path)
    cells = {}
    for i, c in enumerate(path):
        back = g._mul(g.inv(c), path[i - 1]) if i > 0 else g.inv(g._mul(g.inv(c), path[i + 1]))
        fwd = g._mul(g.inv(c), path[i + 1]) if i + 1 < n else g.inv(back)
        cells[c] = belt.encode(back, fwd, z.get(i - anchor_index, a0), a0)
    return Pattern(g, cells), path[anchor_index], z


# -- egg belts -----------------------------------------------------------------

@dataclass
class EggBelt:
    """Encoding of belt data in egg indices.

    With ``gammas`` (one translate per direction) eggs carry only track words
    ``A^𝔗``; with ``directions`` they also carry ``2k`` pointers from ``D``.
    Egg index ``i < |𝔅|`` decodes in mixed radix: directions first, then
    track symbols in track order.
    """

    eggs: EggCollection
    k: int
    track_alphabet: tuple
    gammas: tuple | None = None
    directions: tuple | None = None

    def __post_init__(self):
        g = self.eggs.group
        self.track_alphabet = tuple(self.track_alphabet)
        if (self.gammas is None) == (self.directions is None):
            raise SupportError("give exactly one of gammas or directions")
        if self.gammas is not None:
            self.gammas = tuple(g.check(x) for x in self.gammas)
            if len(self.gammas) != self.k:
                raise SupportError("need one translate per direction")
        else:
            self.directions = tuple(g.check(x) for x in self.directions)
        self.tracks = tracks(self.k)
        need = self.size
        if len(self.eggs) < need:
            raise SupportError(f"encoding needs {need} eggs, collection has {len(self.eggs)}")
        if len(self.eggs) > need:
            e = self.eggs
            self.eggs = EggCollection(e.group, e.alphabet, e.Y, e.W, e.white, e.yolks[:need], e.fix)

    @property
    def group(self) -> Group:
        return self.eggs.group

    @property
    def n_dir(self) -> int:
        return 0 if self.directions is None else 2 * self.k

    @property
    def size(self) -> int:
        nd = 1 if self.directions is None else len(self.directions) ** (2 * self.k)
        return nd * len(self.track_alphabet) ** len(tracks(self.k))

    def decode(self, i: int) -> tuple[tuple, tuple]:
        """``(pointers, track word)`` for egg ``i``."""
        nA = len(self.track_alphabet)
        word = []
        for _ in self.tracks:
            i, a = divmod(i, nA)
            word.append(self.track_alphabet[a])
        word.reverse()
        g = self.group
        if self.directions is None:
            ptrs = []
            for gm in self.gammas:
                ptrs += [g.inv(gm), gm]
            return tuple(ptrs), tuple(word)
        nD = len(self.directions)
        ds = []
        for _ in range(2 * self.k):
            i, d = divmod(i, nD)
            ds.append(self.directions[d])
        ds.reverse()
        return tuple(ds), tuple(word)

    def encode(self, pointers: Sequence, word: Sequence) -> int:
        nA = len(self.track_alphabet)
        i = 0
        if self.directions is not None:
            for d in pointers:
                i = i * len(self.directions) + self.directions.index(d)
        for a in word:
            i = i * nA + self.track_alphabet.index(a)
        return i

    def to_json(self) -> dict:
        g = self.group
        doc = {"k": self.k, "tracks": list(self.track_alphabet), "eggs": self.eggs.to_json()}
        if self.gammas is not None:
            doc["gammas"] = [g.element_to_json(x) for x in self.gammas]
        else:
            doc["directions"] = [g.element_to_json(x) for x in self.directions]
        return doc


class ModelView(BeltView):
    """Belt view of an egg-model window (egg indices and ``⋆``)."""

    def __init__(self, belt: EggBelt, model: Pattern):
        self.belt = belt
        self.group = belt.group
        self.k = belt.k
        self.window = model
        self.cells = model.support

    def _val(self, g):
        if g not in self.window:
            raise WindowEdge(g)
        return self.window[g]

    def pointers(self, g):
        v = self._val(g)
        return None if v == STAR else self.belt.decode(v)[0]

    def symbol(self, g, t):
        v = self._val(g)
        if v == STAR:
            raise SupportError(f"no track symbol at a star cell {g!r}")
        return self.belt.decode(v)[1][self.belt.tracks.index(t)]


def egg_view(belt: EggBelt, w: Pattern) -> ModelView:
    return ModelView(belt, eta(belt.eggs, w))


def _egg_step_set(belt: EggBelt) -> tuple:
    g = belt.group
    if belt.directions is not None:
        moves = list(belt.directions)
    else:
        moves = [x for gm in belt.gammas for x in (gm, g.inv(gm))]
    return subset(g, moves + [g.identity])


def psi_model_rule(phi: LocalRule, belt: EggBelt) -> LocalRule:
    """``ψ_E(φ)`` on the egg model: ``⋆`` kept, directions kept, track word rewritten by ``φ``."""
    word_group = phi.group
    if belt.k == 1 and isinstance(word_group, Integers):
        pass
    elif not (isinstance(word_group, FreeGroup) and word_group.k == belt.k):
        raise SupportError("phi must act on the free group with one generator per direction")
    if tuple(phi.in_alphabet) != belt.track_alphabet:
        raise SupportError("phi must act on the track alphabet")
    g = belt.group
    rho = max(word_group.word_length(u) for u in phi.memory)
    step = _egg_step_set(belt)
    memory = (g.identity,)
    for _ in range(rho):
        memory = set_product(g, memory, step)
    model_alphabet = belt.eggs.model_alphabet
    star = len(belt.eggs)
    letters = {u: word_letters(word_group, u) for u in phi.memory}
    centre = memory.index(g.identity)
    cache: dict = {}

    def one(row: tuple) -> int:
        if row in cache:
            return cache[row]
        if row[centre] == star:
            cache[row] = star
            return star
        model = Pattern(g, ((c, STAR if v == star else int(v)) for c, v in zip(memory, row)))
        view = ModelView(belt, model)
        word = []
        for t in belt.tracks:
            vals = []
            for u in phi.memory:
                s = xi(view, BeltState(g.identity, t), letters[u])
                vals.append(view.symbol(s.position, s.track))
            idx = {a: i for i, a in enumerate(phi.in_alphabet)}
            out = phi.evaluate(np.array([[idx[v] for v in vals]], dtype=np.int32))[0]
            word.append(phi.out_alphabet[out])
        ptrs, _ = belt.decode(int(row[centre]))
        res = belt.encode(ptrs, word)
        cache[row] = res
        return res

    def evaluator(rows: np.ndarray) -> np.ndarray:
        return np.array([one(tuple(r)) for r in rows.tolist()], dtype=np.int32)

    return LocalRule(g, memory, model_alphabet, evaluator=evaluator, name=f"psiE({phi.name})")


def psi_egg(phi: LocalRule, belt: EggBelt) -> LocalRule:
    """The automorphism of X lifting ``ψ_E(φ)`` through the egg collection."""
    return lift_egg_automorphism(belt.eggs, psi_model_rule(phi, belt))


def plant_eggs(belt: EggBelt, placements: dict, filler, cells: Iterable) -> Pattern:
    """Window over ``cells`` with egg ``placements[h]`` written on ``hW`` and ``filler`` elsewhere."""
    g = belt.group
    E = belt.eggs
    out = {c: filler for c in cells}
    for h, i in placements.items():
        egg = E.eggs[i]
        for w in E.W:
            c = g._mul(h, w)
            if c not in out:
                raise SupportError(f"egg at {h!r} does not fit in the window")
            out[c] = egg[w]
    return Pattern(g, out)


# -- fat free group ------------------------------------------------------------

@dataclass
class FatFree:
    n0: int | None
    gammas: tuple
    max_hit: int
    cap: int
    conclusive: bool
    disjoint: bool | None = None
    tested_words: int = 0
    collision: tuple | None = None


def fat_free_group(group: Group, T: Iterable, embed: Sequence, cap: int = 6, test_length: int = 2) -> FatFree:
    """Spacing ``n0`` making ``{wT}`` pairwise disjoint over ``w ∈ ⟨ψ(a_i)^{n0}⟩``.

    ``embed[i]`` is the image of generator ``a_i``; the map must extend to an
    injective homomorphism (the caller's responsibility). ``n0 = 1 + max |u|``
    over ``u`` with ``T ∩ ψ(u)T`` nonempty, searched up to length ``cap``; a
    hit at length ``cap`` makes the result inconclusive.
    """
    T = subset(group, T)
    k = len(embed)
    embed = [group.check(x) for x in embed]
    F = FreeGroup(k)
    TT = set(set_product(group, T, [group.inv(t) for t in T]))
    max_hit = 0
    for u in ball(F, cap):
        img = group.identity
        for x in u:
            gen = embed[abs(x) - 1]
            img = group._mul(img, gen if x > 0 else group.inv(gen))
        if img in TT:
            max_hit = max(max_hit, len(u))
    conclusive = max_hit < cap
    n0 = max_hit + 1
    gammas = tuple(group.power(x, n0) for x in embed)
    res = FatFree(n0, gammas, max_hit, cap, conclusive)
    # exhaustive disjointness over words in the gammas
    translates = []
    for u in ball(F, test_length):
        w = group.identity
        for x in u:
            gm = gammas[abs(x) - 1]
            w = group._mul(w, gm if x > 0 else group.inv(gm))
        translates.append((u, w))
    seen: dict = {}
    res.disjoint = True
    for u, w in translates:
        for t in T:
            c = group._mul(w, t)
            if c in seen and seen[c] != u:
                res.disjoint = False
                res.collision = (seen[c], u, c)
                break
            seen[c] = u
        if not res.disjoint:
            break
    res.tested_words = len(translates)
    return res
