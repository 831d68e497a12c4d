"""The twelve acceptance checks, each with an independent brute-force cross-check.

Each check returns a :class:`Report` whose ``values`` include the frozen
reference numbers it compared against and the wall time. The pytest suite
and ``shiftaut suite run`` both call :func:`run`.
"""

from __future__ import annotations

import itertools
import time
from typing import Callable

import numpy as np

from . import kernels
from .automorphism import (
    compose,
    enumerate_automorphisms,
    bijective_on_periodic,
    center_test,
    equals_on_language,
    identity_rule,
    power,
    slow_shift,
    tables_equal,
    tau,
)
from .conveyor import (
    BeltState,
    ToyView,
    belt_step,
    fat_free_group,
    injectivity_witness,
    orbit_classify,
    psi_toy,
    toy_step_arrays,
)
from .egg import compose_perm, distinguishing_window, eta, exchange, permutations, phi_sigma, verify_egg_collection
from .fixtures import full_shift_eggs, golden_mean_eggs, toy_belt, track_rules
from .groups import FreeGroup, Integers, ball
from .marker import MarkerProblem, feasibility_conditions, minimal_radius, search_marker, verify_marker
from .pattern import Pattern
from .report import FAIL, PASS, Report
from .subshift import (
    LanguageOracle,
    all_rows,
    boundary_sft,
    full_shift,
    golden_mean,
    language_growth_check,
    locally_admissible,
    margin_interval_count,
)

Z = Integers()

# reference values produced once by the brute-force loops below and frozen here
MARKERS_B2 = 6
FIRST_MARKER_B2 = (0, 0, 1, 0)
MIN_R_CONDITION1 = 5
MIN_R_CONDITION3 = 19
RADIUS1_AUTOMORPHISMS = (15, 51, 85, 170, 204, 240)
BOUNDARY_B2_PATTERNS = 52
FAT_N0 = 3


def _brute_overlaps(p: dict, g: int) -> bool:
    """Plain-dict overlap test on the integers: p agrees with its g-translate on the overlap."""
    return all(p[h] == p[h - g] for h in p if (h - g) in p)


def _report(name: str, ok: bool, values: dict, t0: float, witness=None, notes=None) -> Report:
    values = dict(values)
    values["seconds"] = round(time.perf_counter() - t0, 3)
    return Report(name, PASS if ok else FAIL, values, witness=witness, notes=notes or [])


def c01_marker_oracle() -> Report:
    """All 16 patterns on {-2,-1,1,2}: kernel search, certificate verifier and a plain loop agree."""
    t0 = time.perf_counter()
    oracle = LanguageOracle(full_shift(Z, (0, 1)))
    problem = MarkerProblem(oracle, [0], ball(Z, 2))
    found = search_marker(problem, "lex", count_all=True)
    supp = problem.support
    cands = problem.candidates()
    agree = True
    markers = []
    for vals in itertools.product((0, 1), repeat=len(supp)):
        p = Pattern.from_values(Z, supp, vals)
        cert = verify_marker(problem, p)
        brute = not any(_brute_overlaps(dict(zip(supp, vals)), g) for g in cands)
        if cert.passed != brute or (cert.passed and not cert.revalidate()):
            agree = False
        if brute:
            markers.append(vals)
    first = found.found.values if found.found is not None else None
    ok = (
        agree
        and found.markers_found == len(markers) == MARKERS_B2
        and first == FIRST_MARKER_B2
        and (1, 0, 1, 0) in markers
    )
    dt = time.perf_counter() - t0
    ok = ok and dt < 1.0
    return _report("marker-oracle", ok, {"markers": len(markers), "first": list(first or ()), "agree": agree}, t0)


def c02_vacuous_overlap() -> Report:
    t0 = time.perf_counter()
    oracle = LanguageOracle(full_shift(Z, (0, 1)))
    problem = MarkerProblem(oracle, [0], ball(Z, 1))
    found = search_marker(problem, "lex")
    fails = []
    for vals in itertools.product((0, 1), repeat=2):
        p = Pattern.from_values(Z, problem.support, vals)
        cert = verify_marker(problem, p)
        both = _brute_overlaps(dict(zip(problem.support, vals)), 1) and _brute_overlaps(dict(zip(problem.support, vals)), -1)
        fails.append((not cert.passed) and cert.failed_at in (-1, 1) and both)
    ok = found.found is None and found.exhaustive and found.examined == 4 and all(fails)
    ok = ok and time.perf_counter() - t0 < 1.0
    return _report("vacuous-overlap", ok, {"examined": found.examined, "exhaustive": found.exhaustive}, t0)


def c03_feasibility() -> Report:
    t0 = time.perf_counter()
    oracle = LanguageOracle(full_shift(Z, (0, 1)))
    r1 = minimal_radius(oracle, [0], 1, 30, "condition1")
    r3 = minimal_radius(oracle, [0], 1, 30, "condition3")
    # direct arithmetic: |B(38r)| = 76r + 1 and |L_{B(r-1)}| = 2^(2r-1)
    d1 = next(r for r in range(1, 31) if 76 * r + 1 < 2 ** (2 * (r - 1) + 1))
    d3 = next(r for r in range(0, 31) if r > 16 * 1 * 1 + 2 * 1)
    rep = feasibility_conditions(oracle, [0], 1, d3)
    cond2 = all(feasibility_conditions(oracle, [0], 1, r).values["condition2"] for r in range(1, 6))
    ok = r1 == d1 == MIN_R_CONDITION1 and r3 == d3 == MIN_R_CONDITION3 and cond2 and rep.passed
    return _report("feasibility", ok, {"min_r_condition1": r1, "min_r_condition3": r3, "all_at": d3}, t0)


def _fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def c04_language_counts() -> Report:
    t0 = time.perf_counter()
    spec = golden_mean()
    exact = LanguageOracle(spec)
    margin = LanguageOracle(spec, margin=2, method="margin")
    rows = []
    ok = True
    for n in range(1, 11):
        F = list(range(n))
        a = exact.count(F)
        b = margin_interval_count(spec, n, n)
        c = margin.count(F)
        ok &= a == b == c == _fib(n + 2)
        rows.append([n, a, b, c])
    return _report("language-counts", ok, {"counts": rows}, t0)


def c05_growth_bound() -> Report:
    t0 = time.perf_counter()
    cases = []
    ok = True
    for name, oracle, K in (
        ("full", LanguageOracle(full_shift(Z, (0, 1))), [0]),
        ("golden-mean", LanguageOracle(golden_mean()), ball(Z, 1)),
    ):
        for r in range(0, 5):
            rep = language_growth_check(oracle, K, ball(Z, r))
            ok &= rep.passed
            cases.append([name, r, rep.values["L_F"], round(rep.values["bound"], 4)])
    return _report("growth-bound", ok, {"cases": cases}, t0)


def c06_egg_algebra() -> Report:
    t0 = time.perf_counter()
    ok = True
    stats = {}
    for n in (2, 3):
        E = full_shift_eggs(n)
        perms = permutations(n)
        rules = {s: phi_sigma(E, s).forward for s in perms}
        hom = inj = 0
        for s in perms:
            for t in perms:
                lhs = rules[compose_perm(s, t)]
                rhs = compose(rules[s], rules[t], tabulate=False)
                cmp = equals_on_language(lhs, rhs)
                ok &= cmp.equal and len(cmp.support) <= 9
                hom += 1
                if s != t:
                    ne = not equals_on_language(rules[s], rules[t]).equal
                    w = distinguishing_window(E, s, t)
                    ok &= ne and w is not None and rules[s].apply(w) != rules[t].apply(w)
                    inj += 1
        stats[f"eggs{n}"] = {"homomorphism_pairs": hom, "injectivity_pairs": inj}
    return _report("egg-algebra", ok, stats, t0)


def c07_exchange() -> Report:
    t0 = time.perf_counter()
    oracle, E = golden_mean_eggs()
    ok = verify_egg_collection(oracle, E, "strong-tmp").passed
    windows = exchanged = 0
    for n in range(len(E.W), 13):
        cells = list(range(n))
        lang = oracle.language(cells)
        for w in lang.patterns():
            m = eta(E, w)
            sites = [h for h, v in m.items() if v != "*"]
            if not sites or len(sites) > 2:
                continue
            windows += 1
            for theta in itertools.product(range(len(E)), repeat=len(sites)):
                x = exchange(E, w, dict(zip(sites, theta)))
                exchanged += 1
                if not (locally_admissible(oracle.spec, x) and oracle.contains(x)):
                    ok = False
    ok &= windows > 0
    return _report("exchange", ok, {"windows": windows, "reassignments": exchanged}, t0)


def c08_slow_shift() -> Report:
    t0 = time.perf_counter()
    ok = True
    done = []
    for group, h in ((Z, 1), (FreeGroup(2), (1,))):
        for n, k in ((2, 2), (2, 3), (3, 2)):
            phi = slow_shift(group, h, n, k)
            alphabet = phi.forward.in_alphabet
            eq = tables_equal(power(phi.forward, k), tau(group, alphabet, h))
            ok &= eq
            done.append([repr(group), n, k, eq])
    ok &= time.perf_counter() - t0 < 5.0
    return _report("slow-shift", ok, {"cases": done}, t0)


def c09_center() -> Report:
    t0 = time.perf_counter()
    oracle = LanguageOracle(full_shift(Z, (0, 1)))
    E = full_shift_eggs(2)
    ok = verify_egg_collection(oracle, E, "full-shift").passed
    probes = [phi_sigma(E, s) for s in permutations(len(E))]
    res = enumerate_automorphisms((0, 1), 1)
    names = tuple(sorted(int(a.name[4:]) for a in res.automorphisms))
    ok &= names == RADIUS1_AUTOMORPHISMS
    ok &= all(bijective_on_periodic(a.forward, 8) for a in res.automorphisms)
    shifts = [tau(Z, (0, 1), g) for g in (-1, 0, 1)]
    outcome = {}
    for a in res.automorphisms:
        is_shift = any(tables_equal(a.forward, s) for s in shifts)
        rep = center_test(a, probes)
        outcome[a.name] = rep.verdict
        ok &= rep.passed == is_shift
    return _report("ryan", ok, {"automorphisms": len(res.automorphisms), "center_test": outcome}, t0)


def _belt_codes(n: int) -> np.ndarray:
    return all_rows(5, n, 10**7)


def c10_conveyor() -> Report:
    t0 = time.perf_counter()
    belt = toy_belt()
    ok = True
    windows = 0
    # (a) pointer structure: 4 pointer pairs or non-belt per cell
    for n in range(1, 9):
        cells = list(range(n))
        codes = _belt_codes(n)
        nxt, prv = toy_step_arrays(belt, codes, cells)
        r = np.arange(len(codes))[:, None]
        has = nxt >= 0
        back = np.where(has, prv[r, np.maximum(nxt, 0)], -2)
        ok &= bool(np.all(back[has] == np.nonzero(has)[1]))
        hasp = prv >= 0
        fwdback = np.where(hasp, nxt[r, np.maximum(prv, 0)], -2)
        ok &= bool(np.all(fwdback[hasp] == np.nonzero(hasp)[1]))
        srt = np.sort(np.where(has, nxt, -1 - np.arange(2 * n)), axis=1)
        ok &= bool(np.all(srt[:, 1:] != srt[:, :-1]))
        labels = kernels.orbit_labels(nxt)
        ok &= bool(np.all(np.where(has, labels[r, np.maximum(nxt, 0)] == labels, True)))
        if n <= 4:
            ok &= _orbits_match_python(belt, codes, labels, cells)
        windows += len(codes)
    # track symbols do not affect the permutation
    ok &= _symbols_irrelevant(belt, 3)
    # (b) homomorphism and identity
    rules = track_rules()
    psi = {k: psi_toy(v, belt) for k, v in rules.items()}
    hom = 0
    for a, ra in rules.items():
        for b, rb in rules.items():
            lhs = psi_toy(compose(ra, rb), belt)
            rhs = compose(psi[a], psi[b], tabulate=False)
            ok &= equals_on_language(lhs, rhs).equal
            hom += 1
    ok &= equals_on_language(psi["id"], identity_rule(Z, belt.alphabet)).equal
    # (c) injectivity witness
    phi1, phi2 = rules["flip"], compose(rules["sigma"], rules["flip"])
    wit = injectivity_witness(phi1, phi2, belt)
    sep = False
    if wit is not None:
        w, anchor, _ = wit
        sep = psi_toy(phi1, belt).apply(w)[anchor] != psi_toy(phi2, belt).apply(w)[anchor]
    ok &= sep
    return _report("conveyor-toy", ok, {"windows": windows, "homomorphism_pairs": hom, "witness_separates": sep}, t0)


def _orbits_match_python(belt, codes, labels, cells) -> bool:
    """Python orbit classification yields the same partition as the kernel labels."""
    arr = belt.arrays()
    code_to_symbol = {}
    for c in range(belt.n_belt + belt.extra):
        code_to_symbol.setdefault(int(arr["code"][c]), c)
    n = len(cells)
    for row, lab in zip(codes.tolist(), labels.tolist()):
        w = Pattern.from_values(Z, cells, [code_to_symbol[c] for c in row])
        view = ToyView(belt, w)
        seen = set()
        for s in range(2 * n):
            if s in seen:
                continue
            orbit = orbit_classify(view, BeltState.of(cells[s // 2], s % 2))
            members = {2 * cells.index(x.position) + x.track[0] for x in orbit.states}
            if {i for i in range(2 * n) if lab[i] == lab[s]} != members:
                return False
            seen |= members
    return True


def _symbols_irrelevant(belt, n: int) -> bool:
    """Kernel steps computed from codes match Python steps on windows over the full belt alphabet."""
    cells = list(range(n))
    arr = belt.arrays()
    syms = all_rows(len(belt.alphabet), n, 10**6)
    nxt, _ = toy_step_arrays(belt, arr["code"][syms], cells)
    for row, nx in zip(syms.tolist(), nxt.tolist()):
        view = ToyView(belt, Pattern.from_values(Z, cells, row))
        for s in range(2 * n):
            try:
                st = belt_step(view, BeltState.of(cells[s // 2], s % 2))
                got = 2 * cells.index(st.position) + st.track[0]
            except Exception:
                got = -1
            if got != nx[s]:
                return False
    return True


def c11_fat_free() -> Report:
    t0 = time.perf_counter()
    F = FreeGroup(2)
    T = ball(F, 1)
    res = fat_free_group(F, T, [(1,), (2,)], cap=4, test_length=2)
    # direct recomputation: longest u in B(4) with T ∩ uT nonempty
    Tset = set(T)
    longest = max(len(u) for u in ball(F, 4) if any(F._mul(u, t) in Tset for t in T))
    ok = res.n0 == longest + 1 == FAT_N0 and res.conclusive and res.disjoint and res.tested_words == 17
    ok &= res.gammas == ((1, 1, 1), (2, 2, 2))
    return _report("fat-free-group", ok, {"n0": res.n0, "words": res.tested_words, "disjoint": res.disjoint}, t0)


def c12_boundary_fixture() -> Report:
    t0 = time.perf_counter()
    spec = boundary_sft()
    F = spec.group
    oracle = LanguageOracle(spec, margin=1)
    lang = oracle.language(ball(F, 2))
    bad = None
    for p in lang.patterns():
        t = p[F.identity]
        # outside the cone of t every cell points back along its last letter
        for w in p.support:
            if w and (w[0],) != t and p[w] != F.inv((w[-1],)):
                bad = p
                break
        if bad is not None:
            break
    ok = bad is None and len(lang) == BOUNDARY_B2_PATTERNS
    return _report("boundary-fixture", ok, {"patterns": len(lang), "label": lang.label}, t0,
                   witness=None if bad is None else bad.to_json(spec.alphabet))


CRITERIA: list[tuple[int, str, Callable[[], Report]]] = [
    (1, "marker definition oracle", c01_marker_oracle),
    (2, "vacuous-overlap nonexistence", c02_vacuous_overlap),
    (3, "feasibility arithmetic", c03_feasibility),
    (4, "language counting", c04_language_counts),
    (5, "growth bound", c05_growth_bound),
    (6, "egg algebra", c06_egg_algebra),
    (7, "exchange well-definedness", c07_exchange),
    (8, "slow-shift roots", c08_slow_shift),
    (9, "desk-scale center test", c09_center),
    (10, "toy conveyor", c10_conveyor),
    (11, "fat free group", c11_fat_free),
    (12, "boundary SFT fixture", c12_boundary_fixture),
]


def run(select=None) -> list[tuple[int, str, Report]]:
    out = []
    for i, title, fn in CRITERIA:
        if select and i not in select:
            continue
        out.append((i, title, fn()))
    return out


def format_line(i: int, title: str, rep: Report) -> str:
    return f"criterion {i:2d} {rep.verdict.upper():4s} {title} ({rep.values.get('seconds', 0):.2f}s)"
