"""Egg-marker collections and the automorphisms they carry.

An egg collection is a set of admissible patterns on ``W`` that share one
marker (the "white") on ``W∖Y`` and differ on ``Y`` (the "yolks"). Because
the white cannot overlap its own translates, egg occurrences never share
yolk cells, so yolks can be rewritten independently: that gives
``φ_σ`` (permute yolks by ``σ``) and, more generally, the lift of any
automorphism of the egg model that keeps the positions of ``⋆`` fixed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .automorphism import LocalRule, RuleAutomorphism
from .errors import ContractViolation, NotAdmissible, SupportError
from .groups import Group, inverse_set, set_product, subset
from .marker import MarkerProblem, search_marker, verify_marker
from .pattern import Pattern
from .report import FAIL, PASS, Report
from .subshift import EXACT, FixGroup, LanguageOracle, all_rows, fix_or_assumed, locally_admissible

STAR = "*"


@dataclass
class EggCollection:
    group: Group
    alphabet: tuple
    Y: tuple
    W: tuple
    white: Pattern
    yolks: list
    fix: FixGroup | None = None

    def __post_init__(self):
        g = self.group
        self.alphabet = tuple(self.alphabet)
        self.Y = subset(g, self.Y)
        self.W = subset(g, self.W)
        yset = set(self.Y)
        if not yset < set(self.W):
            raise SupportError("Y must be a proper subset of W")
        if tuple(self.white.support) != tuple(w for w in self.W if w not in yset):
            raise SupportError("the white must have support W∖Y")
        for y in self.yolks:
            if tuple(y.support) != self.Y:
                raise SupportError("every yolk must have support Y")
        if len(set(self.yolks)) != len(self.yolks):
            raise SupportError("yolks must be pairwise distinct")
        if self.fix is None:
            self.fix = FixGroup(g, (g.identity,), "assumed")

    def __len__(self) -> int:
        return len(self.yolks)

    @property
    def eggs(self) -> list[Pattern]:
        return [self.white | y for y in self.yolks]

    @property
    def index(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    def egg_rows(self) -> np.ndarray:
        idx = self.index
        return np.array([[idx[e[w]] for w in self.W] for e in self.eggs], dtype=np.int32).reshape(len(self), len(self.W))

    def yolk_rows(self) -> np.ndarray:
        idx = self.index
        return np.array([[idx[y[c]] for c in self.Y] for y in self.yolks], dtype=np.int32).reshape(len(self), len(self.Y))

    @property
    def model_alphabet(self) -> tuple:
        """Egg indices followed by ``⋆``."""
        return tuple(range(len(self))) + (STAR,)

    def to_json(self) -> dict:
        g = self.group
        return {
            "group": g.to_json(),
            "alphabet": list(self.alphabet),
            "Y": [g.element_to_json(y) for y in self.Y],
            "W": [g.element_to_json(w) for w in self.W],
            "white": self.white.to_json(self.alphabet),
            "yolks": [y.to_json(self.alphabet) for y in self.yolks],
            "fix": self.fix.to_json(),
            "fix_source": self.fix.source,
        }

    @classmethod
    def from_json(cls, doc: dict, group: Group | None = None) -> "EggCollection":
        from .groups import group_from_json

        g = group or group_from_json(doc["group"])
        alphabet = tuple(doc["alphabet"])
        fix_doc = doc.get("fix")
        fix = None
        if fix_doc == "G":
            fix = FixGroup(g, None, doc.get("fix_source", "declared"))
        elif fix_doc is not None:
            fix = FixGroup(g, subset(g, [g.element_from_json(x) for x in fix_doc]), doc.get("fix_source", "declared"))
        return cls(
            g,
            alphabet,
            [g.element_from_json(y) for y in doc["Y"]],
            [g.element_from_json(w) for w in doc["W"]],
            Pattern.from_json(g, alphabet, doc["white"]),
            [Pattern.from_json(g, alphabet, y) for y in doc["yolks"]],
            fix,
        )


# -- construction and verification ------------------------------------------

def build_linear_eggs(oracle: LanguageOracle, Y: Iterable, W: Iterable, white: Pattern | None = None, **search_kw) -> EggCollection:
    """All admissible extensions of one marker white to ``W``.

    Without a supplied white the first lexicographic marker is used.
    """
    if oracle.is_trivial():
        raise SupportError("a trivial subshift has no non-trivial marker frame")
    problem = MarkerProblem(oracle, Y, W)
    if white is None:
        found = search_marker(problem, **search_kw)
        if found.found is None:
            raise NotAdmissible("no marker exists in this frame")
        white = found.found
    else:
        cert = verify_marker(problem, white)
        if not cert.passed:
            raise ContractViolation("supplied white is not a marker", cert.failed_at)
    # candidates range over A^Y with the white fixed; admissibility per egg
    yolks = []
    for r in all_rows(len(oracle.alphabet), len(problem.Y), oracle.budget):
        y = Pattern.from_values(oracle.group, problem.Y, [oracle.alphabet[v] for v in r])
        if oracle.spec.kind == "full" or oracle.contains(white | y):
            yolks.append(y)
    return EggCollection(oracle.group, oracle.alphabet, problem.Y, problem.W, white, yolks, problem.fix)


def collar_ok(E: EggCollection, M: Iterable) -> tuple[bool, tuple]:
    """Whether ``YM ⊆ W``, so the eggs agree on the splice collar of ``Y``. Returns the missing cells."""
    YM = set_product(E.group, E.Y, M)
    wset = set(E.W)
    missing = tuple(c for c in YM if c not in wset)
    return not missing, missing


def verify_egg_collection(oracle: LanguageOracle, E: EggCollection, mode: str = "full-shift", M: Iterable | None = None) -> Report:
    """Marker condition, admissibility of every egg, and exchangeability per ``mode``.

    ``mode`` is ``"full-shift"``, ``"strong-tmp"`` (needs ``M`` or a declared
    constant) or ``"declared"`` (exchangeability taken on trust).
    """
    g = E.group
    values: dict = {"eggs": len(E), "mode": mode}
    notes = []
    problem = MarkerProblem(oracle, E.Y, E.W, E.fix)
    cert = verify_marker(problem, E.white, check_language=False)
    if not cert.passed:
        return Report("egg-collection", FAIL, values, witness={"overlapping_g": g.element_to_json(cert.failed_at)}, label=oracle.exactness)
    values["marker_checked"] = len(cert.checked)
    for i, egg in enumerate(E.eggs):
        if not oracle.contains(egg):
            return Report("egg-collection", FAIL, values, witness={"inadmissible_egg": i}, label=oracle.exactness)
    label = oracle.exactness
    if mode == "full-shift":
        if oracle.spec.kind != "full":
            raise SupportError("full-shift mode needs a full shift")
    elif mode == "strong-tmp":
        M = oracle.spec.M if M is None else subset(g, M)
        if M is None:
            raise SupportError("strong-tmp mode needs a TMP constant")
        ok, missing = collar_ok(E, M)
        values["collar"] = [g.element_to_json(c) for c in set_product(g, E.Y, M)]
        if not ok:
            return Report("egg-collection", FAIL, values, witness={"collar_outside_W": [g.element_to_json(c) for c in missing]}, label=label)
    elif mode == "declared":
        notes.append("exchangeability assumed, not checked")
        label = "assumed"
    else:
        raise ValueError(f"unknown exchange mode {mode!r}")
    if len(E) == 1:
        notes.append("only one egg: carries no information")
    if E.fix.source == "assumed":
        notes.append("Fix(X) assumed trivial")
    return Report("egg-collection", PASS, values, label=label, notes=notes)


def realizes(E: EggCollection, F: Iterable) -> set:
    F = subset(E.group, F)
    if not set(F) <= set(E.Y):
        raise SupportError("F must lie inside Y")
    return {y.restrict(F) for y in E.yolks}


# -- egg model ----------------------------------------------------------------

def detect_rows(E: EggCollection, rows: np.ndarray, cells: Sequence, sites: Sequence) -> np.ndarray:
    """Egg index at each site ``h`` (``-1`` for none) for a batch of windows; ``hW`` must fit in ``cells``."""
    group = E.group
    pos = {c: i for i, c in enumerate(cells)}
    eggs = E.egg_rows()
    out = np.full((rows.shape[0], len(sites)), -1, dtype=np.int32)
    for j, h in enumerate(sites):
        try:
            cols = [pos[group._mul(h, w)] for w in E.W]
        except KeyError as exc:
            raise SupportError(f"site {h!r} needs {exc.args[0]!r} outside the window") from None
        colsq = np.tile(np.array(cols, dtype=np.int32), (len(E), 1))
        out[:, j] = kernels.match_placements(rows, colsq, eggs)
    return out


def eta(E: EggCollection, w: Pattern, check_bubble: bool = True) -> Pattern:
    """Egg model of a window, on the cells ``g`` with ``gW`` inside the window."""
    group = E.group
    cells = w.support
    cset = set(cells)
    sites = []
    for c in cells:
        h = group._mul(c, group.inv(E.W[0]))
        if all(group._mul(h, v) in cset for v in E.W):
            sites.append(h)
    sites = subset(group, sites)
    idx = E.index
    row = np.array([[idx[v] for v in w.values]], dtype=np.int32)
    found = detect_rows(E, row, cells, sites)[0]
    out = Pattern.from_values(group, sites, [int(i) if i >= 0 else STAR for i in found])
    if check_bubble:
        check_protection(E, [h for h, v in out.items() if v != STAR])
    return out


def check_protection(E: EggCollection, sites: Sequence) -> None:
    """Detected eggs at sites ``g, g'`` not in one Fix-coset have ``g'Y`` disjoint from ``gW``."""
    group = E.group
    for g in sites:
        gW = {group._mul(g, w) for w in E.W}
        for g2 in sites:
            if g2 == g or group._mul(group.inv(g), g2) in E.fix:
                continue
            if any(group._mul(g2, y) in gW for y in E.Y):
                raise ContractViolation("egg yolk overlaps another egg", (g, g2))


def exchange(E: EggCollection, w: Pattern, theta: dict) -> Pattern:
    """Rewrite the yolk at each detected site ``h`` to ``yolks[theta[h]]``."""
    group = E.group
    cells = dict(w.cells)
    for h, i in theta.items():
        for y in E.Y:
            c = group._mul(h, y)
            if c not in cells:
                raise SupportError(f"site {h!r} is not inside the window")
            cells[c] = E.yolks[i][y]
    return Pattern(group, cells)


# -- phi_sigma -----------------------------------------------------------------

def _site_placements(E: EggCollection, memory: tuple, base_sites: Sequence) -> tuple[np.ndarray, np.ndarray, list]:
    """Placement arrays for egg matching at each site, relative to a memory set."""
    group = E.group
    pos = {c: i for i, c in enumerate(memory)}
    eggs = E.egg_rows()
    cols, vals, tags = [], [], []
    for s_i, h in enumerate(base_sites):
        c = [pos[group._mul(h, w)] for w in E.W]
        for e in range(len(E)):
            cols.append(c)
            vals.append(eggs[e])
            tags.append((s_i, e))
    return (np.array(cols, dtype=np.int32).reshape(len(tags), len(E.W)),
            np.array(vals, dtype=np.int32).reshape(len(tags), len(E.W)), tags)


def phi_sigma_rule(E: EggCollection, sigma: Sequence[int]) -> LocalRule:
    sigma = list(sigma)
    if sorted(sigma) != list(range(len(E))):
        raise ValueError("sigma must permute the egg indices")
    group = E.group
    yinv = [group.inv(y) for y in E.Y]
    # output at g depends on eggs at g y^-1; white cells copy the input
    memory = set_product(group, inverse_set(group, E.Y), E.W)
    cols, vals, tags = _site_placements(E, memory, yinv)
    yolk = E.yolk_rows()
    centre = memory.index(group.identity)
    # output symbol for each placement: yolk sigma(e) read at y
    repl = np.array([yolk[sigma[e], s_i] for s_i, e in tags], dtype=np.int32)

    def evaluator(rows: np.ndarray) -> np.ndarray:
        hit = kernels.match_placements(rows, cols, vals)
        return np.where(hit >= 0, repl[np.maximum(hit, 0)], rows[:, centre])

    name = "phi[" + ",".join(map(str, sigma)) + "]"
    return LocalRule(group, memory, E.alphabet, evaluator=evaluator, name=name)


def phi_sigma(E: EggCollection, sigma: Sequence[int]) -> RuleAutomorphism:
    sigma = list(sigma)
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    fwd = phi_sigma_rule(E, sigma)
    return RuleAutomorphism(fwd, phi_sigma_rule(E, inv), fwd.name)


def permutations(n: int) -> list[tuple]:
    return list(itertools.permutations(range(n)))


def compose_perm(s: Sequence[int], t: Sequence[int]) -> tuple:
    """``(s t)(i) = s(t(i))``."""
    return tuple(s[t[i]] for i in range(len(t)))


def distinguishing_window(E: EggCollection, s1: Sequence[int], s2: Sequence[int]) -> Pattern | None:
    """A window holding one egg whose image yolk differs under ``φ_s1`` and ``φ_s2``."""
    for i in range(len(E)):
        if s1[i] != s2[i]:
            return E.eggs[i]
    return None


# -- lifting egg-model automorphisms -----------------------------------------

def lift_egg_automorphism(E: EggCollection, phi: LocalRule) -> LocalRule:
    """Lift a rule on the egg model (alphabet ``E.model_alphabet``) to the subshift.

    Output at ``g``: if some ``h = gy⁻¹`` carries egg ``i``, the ``y``-cell of
    the yolk of egg ``φ(η(x))(h)``; otherwise ``x(g)``. Raises
    :class:`ContractViolation` if ``φ`` turns an egg into ``⋆``.
    """
    if tuple(phi.in_alphabet) != E.model_alphabet or tuple(phi.out_alphabet) != E.model_alphabet:
        raise SupportError("phi must act on the egg-model alphabet")
    group = E.group
    star = len(E)
    one = group.identity
    fphi = phi.memory
    yinv = [group.inv(y) for y in E.Y]
    model_cells = subset(group, list(fphi) + [one])
    memory = set_product(group, set_product(group, inverse_set(group, E.Y), model_cells), E.W)
    sites = [group._mul(yi, m) for yi in yinv for m in model_cells]
    cols, vals, tags = _site_placements(E, memory, sites)
    n_m = len(model_cells)
    yolk = E.yolk_rows()
    centre = memory.index(one)
    phi_cols = [model_cells.index(f) for f in fphi]
    self_col = model_cells.index(one)

    def evaluator(rows: np.ndarray) -> np.ndarray:
        n = rows.shape[0]
        model = np.full((n, len(sites)), star, dtype=np.int32)
        for q0 in range(0, len(tags), len(E)):
            s_i = tags[q0][0]
            hit = kernels.match_placements(rows, cols[q0 : q0 + len(E)], vals[q0 : q0 + len(E)])
            model[:, s_i] = np.where(hit >= 0, hit, star)
        out = rows[:, centre].copy()
        done = np.zeros(n, dtype=bool)
        for y_i in range(len(E.Y)):
            block = model[:, y_i * n_m : (y_i + 1) * n_m]
            here = (block[:, self_col] != star) & ~done
            if not here.any():
                continue
            j = phi.evaluate(block[:, phi_cols])
            bad = here & (j == star)
            if bad.any():
                raise ContractViolation("phi moves an egg to a star position", block[np.flatnonzero(bad)[0]].tolist())
            out[here] = yolk[j[here], y_i]
            done |= here
        return out

    return LocalRule(group, memory, E.alphabet, evaluator=evaluator, name=f"lift({phi.name})")


def model_rule(E: EggCollection, memory: Iterable, fn, name: str = "") -> LocalRule:
    """Tabulated rule on the egg-model alphabet from a Python function of the memory symbols."""
    from .automorphism import from_function

    return from_function(E.group, memory, E.model_alphabet, fn, name=name)


def model_permutation(E: EggCollection, sigma: Sequence[int]) -> LocalRule:
    """``σ`` on egg indices, fixing ``⋆``."""
    sigma = list(sigma) + [len(E)]
    return LocalRule(E.group, [E.group.identity], E.model_alphabet, table=np.array(sigma, dtype=np.int32), name="mu")


def check_star_contract(E: EggCollection, phi: LocalRule, windows: Iterable[Pattern]) -> int:
    """Verify ``φ`` keeps the ``⋆`` positions of ``η(w)`` for every window. Returns the number checked."""
    n = 0
    for w in windows:
        m = eta(E, w, check_bubble=False)
        if not len(m):
            continue
        out = phi.apply(m)
        for c, v in out.items():
            # a memory off the identity can put output cells outside the model window
            if c in m and (v == STAR) != (m[c] == STAR):
                raise ContractViolation("phi moves a star", {"window": w.to_json(E.alphabet), "cell": E.group.element_to_json(c)})
        n += 1
    return n
