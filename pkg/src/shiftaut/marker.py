"""Marker verification, search and the numeric feasibility conditions.

A ``(Y, W)``-marker is an admissible pattern on ``W∖Y`` that disagrees with
its own ``g``-translate somewhere on the common support, for every
``g ∈ WY⁻¹`` outside Fix(X). When the supports do not meet the translate
agrees vacuously, so small frames admit no markers at all.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import BudgetExceeded, ContractViolation, NotAdmissible, SupportError
from .groups import DEFAULT_BUDGET, Group, ball, inverse_set, set_product, subset
from .pattern import Pattern, overlap_witness
from .report import FAIL, INCONCLUSIVE, PASS, Report
from .subshift import EXACT, FixGroup, LanguageOracle, fix_or_assumed

CHUNK = 1 << 16


@dataclass
class MarkerProblem:
    oracle: LanguageOracle
    Y: tuple
    W: tuple
    fix: FixGroup | None = None

    def __post_init__(self):
        group = self.oracle.group
        self.Y = subset(group, self.Y)
        self.W = subset(group, self.W)
        if not set(self.Y) < set(self.W):
            raise SupportError("a marker frame needs Y to be a proper subset of W")
        if self.fix is None:
            self.fix = fix_or_assumed(self.oracle.spec, self.oracle)

    @property
    def group(self) -> Group:
        return self.oracle.group

    @property
    def support(self) -> tuple:
        yset = set(self.Y)
        return tuple(w for w in self.W if w not in yset)

    def candidates(self) -> tuple:
        """``WY⁻¹ ∖ Fix``: the translations a marker must not overlap with."""
        if self.fix.is_whole_group:
            return ()
        diffs = set_product(self.group, self.W, inverse_set(self.group, self.Y))
        return tuple(g for g in diffs if g not in self.fix)

    def pair_arrays(self):
        """Column pairs ``(h, g⁻¹h)`` per candidate ``g``, flattened for the overlap kernel."""
        group = self.group
        pos = {c: i for i, c in enumerate(self.support)}
        pa, pb, ptr = [], [], [0]
        for g in self.candidates():
            ginv = group.inv(g)
            for c, i in pos.items():
                j = pos.get(group._mul(ginv, c))
                if j is not None:
                    pa.append(i)
                    pb.append(j)
            ptr.append(len(pa))
        return np.array(pa, dtype=np.int32), np.array(pb, dtype=np.int32), np.array(ptr, dtype=np.int32)


@dataclass
class MarkerCertificate:
    """Outcome of verifying one pattern.

    On success ``checked`` lists ``(g, h)`` with ``p(h) != p(g⁻¹h)`` for every
    candidate ``g``; on failure ``failed_at`` is the first overlapping ``g``.
    """

    pattern: Pattern
    checked: list = field(default_factory=list)
    failed_at: object = None
    fix_source: str = "computed"
    label: str = EXACT

    @property
    def passed(self) -> bool:
        return self.failed_at is None

    def __bool__(self) -> bool:
        return self.passed

    def revalidate(self) -> bool:
        group = self.pattern.group
        cells = self.pattern.cells
        for g, h in self.checked:
            src = group._mul(group.inv(g), h)
            if h not in cells or src not in cells or cells[h] == cells[src]:
                return False
        return True

    def to_json(self, alphabet: Sequence) -> dict:
        group = self.pattern.group
        doc = {
            "pattern": self.pattern.to_json(alphabet),
            "checked": [[group.element_to_json(g), group.element_to_json(h)] for g, h in self.checked],
            "fix": self.fix_source,
            "label": self.label,
        }
        if self.failed_at is not None:
            doc["overlapping_g"] = group.element_to_json(self.failed_at)
        return doc


def verify_marker(problem: MarkerProblem, p: Pattern, check_language: bool = True) -> MarkerCertificate:
    if tuple(p.support) != problem.support:
        raise SupportError("marker candidates must have support W∖Y")
    oracle = problem.oracle
    if check_language and not oracle.contains(p):
        raise NotAdmissible("pattern is not in the language")
    checked = []
    cert = MarkerCertificate(p, checked, fix_source=problem.fix.source, label=oracle.exactness)
    for g in problem.candidates():
        h = overlap_witness(p, g)
        if h is None:
            cert.failed_at = g
            return cert
        checked.append((g, h))
    return cert


def _full_chunks(base: int, width: int, start: int, stop: int):
    for lo in range(start, stop, CHUNK):
        hi = min(stop, lo + CHUNK)
        codes = np.arange(lo, hi, dtype=np.int64)
        rows = np.empty((hi - lo, width), dtype=np.int32)
        for j in range(width - 1, -1, -1):
            rows[:, j] = codes % base
            codes //= base
        yield lo, rows


def marker_mask(problem: MarkerProblem, rows: np.ndarray) -> np.ndarray:
    """Boolean mask of the rows (symbol indices on ``W∖Y``) that are markers, ignoring admissibility."""
    pa, pb, ptr = problem.pair_arrays()
    return kernels.overlap_free(rows, pa, pb, ptr).astype(bool)


@dataclass
class SearchResult:
    found: Pattern | None
    certificate: MarkerCertificate | None
    exhaustive: bool
    examined: int
    strategy: str
    markers_found: int | None = None

    @property
    def verdict(self) -> str:
        if self.found is not None:
            return PASS
        return FAIL if self.exhaustive else INCONCLUSIVE

    def report(self, alphabet: Sequence) -> Report:
        values = {"strategy": self.strategy, "examined": self.examined, "exhaustive": self.exhaustive}
        if self.markers_found is not None:
            values["markers_found"] = self.markers_found
        label = self.certificate.label if self.certificate else EXACT
        if self.found is None and not self.exhaustive:
            label = INCONCLUSIVE
        witness = self.certificate.to_json(alphabet) if self.certificate else None
        return Report("marker-search", self.verdict, values, witness=witness, label=label, raw=self)


def search_marker(
    problem: MarkerProblem,
    strategy: str = "lex",
    seed: int = 0,
    trials: int = 10_000,
    budget: int | None = None,
    workers: int = 1,
    count_all: bool = False,
) -> SearchResult:
    """Find a marker on ``problem``'s frame.

    ``lex`` scans the language in lexicographic order of symbol indices and
    returns the first marker; exhausting it proves none exists (relative to
    the oracle's language). ``random`` samples ``trials`` patterns uniformly
    from ``A^(W∖Y)`` with the given seed; a miss is inconclusive.
    """
    oracle = problem.oracle
    alphabet = oracle.alphabet
    group = problem.group
    supp = problem.support
    base = len(alphabet)
    cap = DEFAULT_BUDGET if budget is None else budget
    if strategy in ("lex", "lexicographic"):
        if oracle.spec.kind == "full":
            total = base ** len(supp)
            if total > cap:
                raise BudgetExceeded("marker candidates", total, cap)
            chunks = list(_full_chunks(base, len(supp), 0, total))
        else:
            rows = oracle.language(supp).rows
            chunks = [(lo, rows[lo : lo + CHUNK]) for lo in range(0, len(rows), CHUNK)]
            total = len(rows)

        def scan(chunk):
            lo, rows = chunk
            hits = np.flatnonzero(marker_mask(problem, rows))
            return lo, rows, hits

        if workers > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(workers) as pool:
                results = list(pool.map(scan, chunks))
        else:
            results = []
            for ch in chunks:
                results.append(scan(ch))
                if not count_all and len(results[-1][2]):
                    break
        n_markers = sum(len(h) for _, _, h in results) if count_all else None
        for lo, rows, hits in results:
            if len(hits):
                i = int(hits[0])
                p = Pattern.from_values(group, supp, [alphabet[v] for v in rows[i]])
                cert = verify_marker(problem, p, check_language=False)
                if not cert.passed:
                    raise ContractViolation("overlap kernel and verifier disagree", p)
                return SearchResult(p, cert, True, lo + i + 1 if not count_all else total, "lex", n_markers)
        return SearchResult(None, None, True, total, "lex", n_markers)
    if strategy in ("random", "rand"):
        rng = np.random.default_rng(seed)
        rows = rng.integers(0, base, size=(trials, len(supp)), dtype=np.int32)
        mask = marker_mask(problem, rows)
        for i in np.flatnonzero(mask):
            p = Pattern.from_values(group, supp, [alphabet[v] for v in rows[i]])
            if oracle.spec.kind != "full" and not oracle.contains(p):
                continue
            cert = verify_marker(problem, p, check_language=False)
            return SearchResult(p, cert, False, int(i) + 1, "random")
        return SearchResult(None, None, False, trials, "random")
    raise ValueError(f"unknown search strategy {strategy!r}")


def complete_marker(problem: MarkerProblem, p: Pattern, Y2: Iterable, q: Pattern) -> MarkerCertificate:
    """Re-verify the completion ``q`` of a marker ``p`` to a smaller hole ``Y2 ⊆ Y``.

    Any admissible completion of a marker is again a marker, so a failing
    completion signals an internal inconsistency and raises.
    """
    group = problem.group
    Y2 = subset(group, Y2)
    if not set(Y2) <= set(problem.Y):
        raise SupportError("the new hole must lie inside Y")
    for h, v in p.items():
        if q.get(h, object()) != v:
            raise SupportError(f"completion disagrees with the marker at {h!r}")
    first = verify_marker(problem, p)
    if not first.passed:
        raise ContractViolation("the pattern being completed is not a marker", first.failed_at)
    sub = MarkerProblem(problem.oracle, Y2, problem.W, problem.fix)
    cert = verify_marker(sub, q)
    if not cert.passed:
        raise ContractViolation("completion of a marker overlaps", cert.failed_at)
    return cert


def non_marker_fraction(problem: MarkerProblem, samples: int, seed: int = 0) -> float:
    """Share of uniformly sampled patterns on ``W∖Y`` that are not markers."""
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, len(problem.oracle.alphabet), size=(samples, len(problem.support)), dtype=np.int32)
    return 1.0 - float(marker_mask(problem, rows).mean())


# -- feasibility -------------------------------------------------------------

@dataclass(frozen=True)
class FeasibilityConstants:
    """Constants in the three marker-existence conditions (defaults are the known ones)."""

    ball_factor: int = 38
    k_factor: int = 16
    k_offset: int = 2
    outer_factor: int = 37


def feasibility_conditions(
    oracle: LanguageOracle,
    K: Iterable,
    k: int,
    r: int,
    constants: FeasibilityConstants = FeasibilityConstants(),
    budget: int | None = None,
) -> Report:
    """Evaluate the three sufficient conditions for a ``(B(r), B(37r))``-marker.

    (1) ``|B(38r)| < |L_{B(r-k)}|``, (2) ``diam(G) > 38r``,
    (3) ``r > 16k|K³| + 2k``. When the language count is out of budget it is
    replaced by the growth lower bound ``|L_1|^{|F|/(2|K|)}``; a bound that
    already satisfies (1) is conclusive.
    """
    group = oracle.group
    K = subset(group, K)
    c = constants
    R = c.ball_factor * r
    ball_big = group.ball_size(R, budget)
    inner = ball(group, max(r - k, -1), budget) if r - k >= 0 else ()
    lang_source = "exact" if oracle.exactness == EXACT else "upper"
    try:
        lang = oracle.count(inner)
        lang_value = lang
    except BudgetExceeded:
        l1 = oracle.count([group.identity])
        lang = None
        lang_value = float(l1) ** (len(inner) / (2 * len(K)))
        lang_source = "growth-lower-bound"
    if lang is not None:
        cond1 = ball_big < lang
    else:
        # |L_1|^{|F|/(2|K|)} > |B| checked exactly as |L_1|^|F| > |B|^{2|K|}
        l1 = oracle.count([group.identity])
        cond1 = l1 ** len(inner) > ball_big ** (2 * len(K))
    diam = group.diameter()
    cond2 = diam > R
    K3 = set_product(group, set_product(group, K, K, budget), K, budget)
    rhs3 = c.k_factor * k * len(K3) + c.k_offset * k
    cond3 = r > rhs3
    values = {
        "r": r,
        "k": k,
        "ball_R": R,
        "ball_size": ball_big,
        "inner_radius": r - k,
        "language_count": lang_value,
        "language_source": lang_source,
        "diameter": "inf" if math.isinf(diam) else diam,
        "K3_size": len(K3),
        "condition3_rhs": rhs3,
        "condition1": cond1,
        "condition2": cond2,
        "condition3": cond3,
        "frame": [r, c.outer_factor * r],
    }
    ok = cond1 and cond2 and cond3
    # an "upper" language count cannot certify condition (1)
    verdict = PASS if ok and lang_source != "upper" else (INCONCLUSIVE if ok else FAIL)
    witness = None if ok else {"failed": [n for n, v in (("condition1", cond1), ("condition2", cond2), ("condition3", cond3)) if not v]}
    return Report("feasibility", verdict, values, witness=witness, label=lang_source if lang_source != "growth-lower-bound" else EXACT)


def minimal_radius(oracle: LanguageOracle, K: Iterable, k: int, r_max: int, condition: str = "condition1", **kw) -> int | None:
    """Smallest ``r ≤ r_max`` satisfying one condition (or ``"all"``)."""
    for r in range(0, r_max + 1):
        rep = feasibility_conditions(oracle, K, k, r, **kw)
        if condition == "all" and rep.passed:
            return r
        if condition != "all" and rep.values[condition]:
            return r
    return None
