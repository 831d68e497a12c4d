"""``shiftaut`` command line: every run writes one JSON report.

Exit codes: 0 pass, 1 fail (the report carries a witness), 2 inconclusive or
out of budget, 3 usage or input error.

Set flags (``--Y``, ``--W``, ``--F`` ...) accept ``B(r)``, ``ring(r,R)`` or a
JSON list of element forms. Groups accept a JSON document or file, or the
shorthands ``Z``, ``Z^d``, ``F_k`` and ``C_n``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import time
from pathlib import Path
from typing import Any

from . import __version__
from .errors import BudgetExceeded, ContractViolation, ShiftAutError
from .groups import DEFAULT_BUDGET, FreeGroup, Group, Integers, Lattice, ball, cyclic_group, group_from_json, parse_subset
from .pattern import Pattern
from .report import FAIL, INCONCLUSIVE, PASS, Report

EXIT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


# -- input helpers ---------------------------------------------------------------

def _load_json(text_or_path: str, what: str) -> Any:
    """Parse a JSON file path or inline JSON; errors name the location."""
    path = Path(text_or_path)
    if path.is_file():
        src, text = str(path), path.read_text()
    else:
        src, text = "<inline>", text_or_path
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {what} ({src}) at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


_SHORT = re.compile(r"^(Z|F|C)(?:[_^]?(\d+))?$")


def parse_group(text: str) -> Group:
    m = _SHORT.match(text.strip())
    if m:
        kind, n = m.group(1), m.group(2)
        if kind == "Z":
            return Integers() if n in (None, "1") else Lattice(int(n))
        if n is None:
            raise UsageError(f"group shorthand {text!r} needs a size")
        return FreeGroup(int(n)) if kind == "F" else cyclic_group(int(n))
    doc = _load_json(text, "group")
    return group_from_json(doc.get("group", doc) if isinstance(doc, dict) and "kind" not in doc else doc)


def _spec(args):
    from .subshift import spec_from_json

    return spec_from_json(_load_json(args.spec, "--spec"))


def _oracle(args, spec=None):
    from .subshift import LanguageOracle

    spec = spec or _spec(args)
    return LanguageOracle(spec, margin=getattr(args, "margin", 1), budget=args.budget)


def _set(group: Group, text: str, budget: int) -> tuple:
    try:
        return parse_subset(group, text, budget)
    except ShiftAutError as exc:
        raise UsageError(str(exc)) from None


def _pattern(group, alphabet, text: str) -> Pattern:
    return Pattern.from_json(group, alphabet, _load_json(text, "pattern"))


def _element(group: Group, text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        obj = text
    return group.element_from_json(obj)


def _rule(text: str, group: Group | None = None):
    """Rule JSON; the document's own group wins over the fallback ``group``."""
    from .automorphism import LocalRule

    doc = _load_json(text, "rule")
    if "group" not in doc and group is None:
        raise UsageError("rule document names no group")
    return LocalRule.from_json(None if "group" in doc else group, doc)


def _els(group, xs) -> list:
    return [group.element_to_json(x) for x in xs]


def _inputs_digest(args) -> dict:
    """sha256 of every argument that names an existing file, so the config hash covers inputs."""
    out = {}
    for k, v in sorted(vars(args).items()):
        vals = v if isinstance(v, list) else [v]
        for x in vals:
            if isinstance(x, str) and len(x) < 4096 and Path(x).is_file():
                out[f"{k}:{x}"] = hashlib.sha256(Path(x).read_bytes()).hexdigest()
    return out


def config_hash(command: str, args) -> str:
    cfg = {k: v for k, v in vars(args).items() if k not in ("out", "func")}
    doc = {"command": command, "args": cfg, "inputs": _inputs_digest(args)}
    return hashlib.sha256(json.dumps(doc, sort_keys=True, default=str).encode()).hexdigest()


# -- subcommands -----------------------------------------------------------------
# each returns a Report; ``values`` become the report's ``results``

def cmd_group_ball(args) -> Report:
    g = parse_group(args.group)
    B = ball(g, args.r, args.budget)
    return Report("group-ball", PASS, {"r": args.r, "size": len(B), "elements": _els(g, B)})


def cmd_group_check(args) -> Report:
    g = parse_group(args.group)
    sample = ball(g, args.radius, args.budget)
    if g.is_finite:
        sample = g.elements()
    bad = None
    for a in sample:
        if g._mul(a, g.inv(a)) != g.identity or g._mul(g.inv(a), a) != g.identity:
            bad = {"inverse": g.element_to_json(a)}
            break
        for b in sample:
            for c in sample:
                if g._mul(g._mul(a, b), c) != g._mul(a, g._mul(b, c)):
                    bad = {"associativity": _els(g, (a, b, c))}
                    break
            if bad:
                break
        if bad:
            break
    sym = all(g.inv(s) in g.generators for s in g.generators)
    values = {"kind": g.kind, "generators": _els(g, g.generators), "symmetric": sym, "elements_checked": len(sample)}
    if bad or not sym:
        return Report("group-check", FAIL, values, witness=bad or {"asymmetric_generators": True})
    return Report("group-check", PASS, values)


def cmd_sub_language(args) -> Report:
    oracle = _oracle(args)
    g = oracle.group
    F = _set(g, args.F, args.budget)
    lang = oracle.language(F)
    values = {"F": _els(g, F), "count": len(lang), "exactness": lang.label}
    if args.list:
        values["patterns"] = lang.rows.tolist()
    return Report("language", PASS, values, label=lang.label)


def cmd_sub_si(args) -> Report:
    from .subshift import check_strong_irreducibility

    oracle = _oracle(args)
    K = _set(oracle.group, args.K, args.budget)
    return check_strong_irreducibility(oracle, K, args.size_cap, args.radius)


def cmd_sub_tmp(args) -> Report:
    from .subshift import check_strong_tmp

    oracle = _oracle(args)
    M = _set(oracle.group, args.M, args.budget)
    return check_strong_tmp(oracle, M, args.size_cap, args.radius)


def cmd_sub_growth(args) -> Report:
    from .subshift import language_growth_check

    oracle = _oracle(args)
    g = oracle.group
    return language_growth_check(oracle, _set(g, args.K, args.budget), _set(g, args.F, args.budget))


def _problem(args):
    from .marker import MarkerProblem

    oracle = _oracle(args)
    g = oracle.group
    return MarkerProblem(oracle, _set(g, args.Y, args.budget), _set(g, args.W, args.budget))


def cmd_marker_search(args) -> Report:
    from .marker import search_marker

    problem = _problem(args)
    res = search_marker(problem, args.strategy, seed=args.seed, trials=args.trials, budget=args.budget,
                        workers=args.workers, count_all=args.count_all)
    rep = res.report(problem.oracle.alphabet)
    if res.found is None:
        rep.witness = {"examined": res.examined, "exhaustive": res.exhaustive}
    return rep


def cmd_marker_verify(args) -> Report:
    from .marker import verify_marker

    problem = _problem(args)
    p = _pattern(problem.group, problem.oracle.alphabet, args.pattern)
    cert = verify_marker(problem, p)
    doc = cert.to_json(problem.oracle.alphabet)
    if cert.passed:
        return Report("marker-verify", PASS, {"checked": len(cert.checked)}, witness=doc, label=cert.label)
    return Report("marker-verify", FAIL, {"checked": len(cert.checked)}, witness=doc, label=cert.label)


def cmd_marker_feasibility(args) -> Report:
    from .marker import FeasibilityConstants, feasibility_conditions, minimal_radius

    oracle = _oracle(args)
    K = _set(oracle.group, args.K, args.budget)
    consts = FeasibilityConstants(args.ball_factor, args.k_factor, args.k_offset, args.outer_factor)
    if args.min_r is not None:
        found = {c: minimal_radius(oracle, K, args.k, args.min_r, c, constants=consts, budget=args.budget)
                 for c in ("condition1", "condition2", "condition3", "all")}
        verdict = PASS if found["all"] is not None else INCONCLUSIVE
        return Report("feasibility-minimal", verdict, {"r_max": args.min_r, "minimal_r": found},
                      witness=None if verdict == PASS else {"r_max": args.min_r})
    return feasibility_conditions(oracle, K, args.k, args.r, consts, args.budget)


def _eggs(args, group=None):
    from .egg import EggCollection

    return EggCollection.from_json(_load_json(args.eggs, "--eggs"), group)


def cmd_egg_build(args) -> Report:
    from .egg import build_linear_eggs

    oracle = _oracle(args)
    g = oracle.group
    white = _pattern(g, oracle.alphabet, args.white) if args.white else None
    E = build_linear_eggs(oracle, _set(g, args.Y, args.budget), _set(g, args.W, args.budget), white,
                          strategy=args.strategy, seed=args.seed, trials=args.trials, budget=args.budget)
    doc = E.to_json()
    if args.save:
        Path(args.save).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    return Report("egg-build", PASS, {"eggs": len(E), "collection": doc}, label=oracle.exactness)


def cmd_egg_verify(args) -> Report:
    from .egg import verify_egg_collection

    oracle = _oracle(args)
    E = _eggs(args, oracle.group)
    M = _set(oracle.group, args.M, args.budget) if args.M else None
    return verify_egg_collection(oracle, E, args.mode, M)


def _sigma(text: str, n: int) -> list[int]:
    try:
        s = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--sigma must be comma-separated indices, got {text!r}") from None
    if sorted(s) != list(range(n)):
        raise UsageError(f"--sigma must permute 0..{n - 1}")
    return s


def cmd_egg_act(args) -> Report:
    from .egg import eta, phi_sigma

    E = _eggs(args)
    sigma = _sigma(args.sigma, len(E))
    w = _pattern(E.group, E.alphabet, args.window)
    out = phi_sigma(E, sigma).forward.apply(w)
    m_in, m_out = eta(E, w, check_bubble=False), None
    values = {"sigma": sigma, "before": w.to_json(E.alphabet), "after": out.to_json(E.alphabet),
              "eggs_before": {json.dumps(E.group.element_to_json(h)): v for h, v in m_in.items() if v != "*"}}
    if len(out):
        m_out = eta(E, out, check_bubble=False)
        values["eggs_after"] = {json.dumps(E.group.element_to_json(h)): v for h, v in m_out.items() if v != "*"}
    return Report("egg-act", PASS, values)


def cmd_egg_lift(args) -> Report:
    from .automorphism import equals_on_language, tau
    from .egg import check_star_contract, eta, lift_egg_automorphism, model_permutation, phi_sigma

    E = _eggs(args)
    g = E.group
    if args.sigma:
        sigma = _sigma(args.sigma, len(E))
        mu = model_permutation(E, sigma)
    else:
        mu = tau(g, E.model_alphabet, _element(g, args.shift))
    lifted = lift_egg_automorphism(E, mu)
    values: dict = {"memory_size": len(lifted.memory)}
    if args.window:
        w = _pattern(g, E.alphabet, args.window)
        check_star_contract(E, mu, [w])
        out = lifted.apply(w)
        values["before"] = w.to_json(E.alphabet)
        values["after"] = out.to_json(E.alphabet)
        if len(out):
            lhs = eta(E, out, check_bubble=False)
            rhs = mu.apply(eta(E, w, check_bubble=False))
            agree = all(rhs[c] == v for c, v in lhs.items() if c in rhs)
            values["eta_commutes"] = agree
            if not agree:
                return Report("egg-lift", FAIL, values, witness={"window": values["before"]})
    if args.sigma:
        cmp = equals_on_language(lifted, phi_sigma(E, sigma).forward, budget=args.budget)
        values["equals_phi_sigma"] = cmp.equal
        if not cmp.equal:
            return Report("egg-lift", FAIL, values, witness=cmp.witness.to_json(E.alphabet))
    return Report("egg-lift", PASS, values)


def cmd_aut_compose(args) -> Report:
    from .automorphism import compose

    rules = [_rule(r) for r in args.rule]
    acc = rules[-1]
    for r in reversed(rules[:-1]):
        acc = compose(r, acc, budget=args.budget)
    doc = acc.to_json(args.budget)
    if args.save:
        Path(args.save).write_text(json.dumps(doc, sort_keys=True) + "\n")
    return Report("aut-compose", PASS, {"memory": doc["memory"], "rule": doc})


def cmd_aut_verify(args) -> Report:
    from .automorphism import RuleAutomorphism

    fwd = _rule(args.rule)
    inv = _rule(args.inverse)
    oracle = _oracle(args) if args.spec else None
    return RuleAutomorphism(fwd, inv, fwd.name).verify(oracle, args.budget)


def cmd_aut_enumerate(args) -> Report:
    from .automorphism import bijective_on_periodic, enumerate_automorphisms

    res = enumerate_automorphisms(tuple(range(args.alphabet_size)), args.r, args.r_inverse, args.budget, periodic=args.periodic)
    names = [a.name for a in res.automorphisms]
    periodic_ok = all(bijective_on_periodic(a.forward, args.periodic) for a in res.automorphisms)
    values = {"count": len(names), "automorphisms": names, "tested": res.tested, "not_surjective": res.not_surjective,
              "not_injective": res.not_injective, "no_inverse_within_bound": res.no_inverse_within_bound, "r_inverse": res.r_inverse,
              "periodic_cross_check": periodic_ok}
    if not periodic_ok:
        return Report("aut-enumerate", FAIL, values, witness={"periodic_cross_check": False})
    verdict = PASS if res.label == "exact" else INCONCLUSIVE
    return Report("aut-enumerate", verdict, values, label=res.label,
                  witness=None if verdict == PASS else {"no_inverse_within_bound": res.no_inverse_within_bound})


def cmd_aut_center(args) -> Report:
    from .automorphism import center_test
    from .egg import permutations, phi_sigma

    cand = _rule(args.candidate)
    E = _eggs(args, cand.group)
    probes = [phi_sigma(E, s) for s in permutations(len(E))]
    oracle = _oracle(args) if args.spec else None
    return center_test(cand, probes, oracle, args.budget)


def cmd_aut_slowshift(args) -> Report:
    from .automorphism import power, slow_shift, tables_equal, tau

    g = parse_group(args.group)
    h = _element(g, args.h) if args.h else g.generators[0]
    phi = slow_shift(g, h, args.n, args.k)
    values = {"h": g.element_to_json(h), "n": args.n, "k": args.k, "alphabet_size": len(phi.forward.in_alphabet),
              "memory": _els(g, phi.forward.memory)}
    if args.verify:
        ok = tables_equal(power(phi.forward, args.k), tau(g, phi.forward.in_alphabet, h))
        values["power_equals_tau"] = ok
        if not ok:
            return Report("slow-shift", FAIL, values, witness={"power_equals_tau": False})
    if args.save:
        Path(args.save).write_text(json.dumps(phi.forward.to_json(args.budget), sort_keys=True) + "\n")
    return Report("slow-shift", PASS, values)


def _belt(args):
    from .conveyor import ToyBelt
    from .fixtures import toy_belt

    return ToyBelt.from_json(_load_json(args.belt, "--belt")) if args.belt else toy_belt()


def _track(text: str) -> int:
    from .conveyor import BOTTOM, TOP

    t = {"top": TOP, "bottom": BOTTOM, "0": TOP, "1": BOTTOM}.get(str(text).lower())
    if t is None:
        raise UsageError(f"track must be top or bottom, got {text!r}")
    return t


def cmd_belt_classify(args) -> Report:
    from .conveyor import BeltState, ToyView, orbit_classify

    belt = _belt(args)
    g = belt.group
    w = _pattern(g, belt.alphabet, args.window)
    view = ToyView(belt, w)
    if args.g is not None:
        starts = [BeltState.of(_element(g, args.g), _track(args.track))]
    else:
        starts = [BeltState.of(c, t) for c in w.support for t in (0, 1)]
    seen = set()
    orbits = []
    for s in starts:
        if s in seen:
            continue
        o = orbit_classify(view, s, max_steps=args.max_steps)
        seen.update(o.states)
        orbits.append(o.to_json(g) | {"label": o.label()})
    counts: dict = {}
    for o in orbits:
        counts[o["kind"]] = counts.get(o["kind"], 0) + 1
    return Report("belt-classify", PASS, {"orbits": orbits, "kinds": counts})


def cmd_belt_trace(args) -> Report:
    from .conveyor import ToyView, trace

    belt = _belt(args)
    g = belt.group
    w = _pattern(g, belt.alphabet, args.window)
    U = _set(Integers(), args.U, args.budget)
    c = trace(ToyView(belt, w), _element(g, args.g), _track(args.track), U, Integers())
    return Report("belt-trace", PASS, {"trace": {str(u): v for u, v in c.items()}})


def cmd_belt_psi(args) -> Report:
    from .conveyor import psi_toy, psi_toy_reference

    belt = _belt(args)
    phi = _rule(args.phi, Integers())
    w = _pattern(belt.group, belt.alphabet, args.window)
    out = psi_toy(phi, belt).apply(w)
    ref = psi_toy_reference(phi, belt, w)
    values = {"before": w.to_json(belt.alphabet), "after": out.to_json(belt.alphabet), "reference_agrees": out == ref}
    if out != ref:
        return Report("belt-psi", FAIL, values, witness={"reference": ref.to_json(belt.alphabet)})
    return Report("belt-psi", PASS, values)


def cmd_belt_fatfree(args) -> Report:
    from .conveyor import fat_free_group

    g = parse_group(args.group)
    T = _set(g, args.T, args.budget)
    embed = [g.element_from_json(x) for x in _load_json(args.embed, "--embed")] if args.embed else list(
        s for s in g.generators if g.inv(s) != s and g.key(s) < g.key(g.inv(s)))
    res = fat_free_group(g, T, embed, args.cap, args.test_length)
    values = {"n0": res.n0, "gammas": _els(g, res.gammas), "max_hit": res.max_hit, "cap": res.cap,
              "conclusive": res.conclusive, "disjoint": res.disjoint, "tested_words": res.tested_words}
    if not res.disjoint:
        return Report("fat-free-group", FAIL, values, witness={"collision": [str(x) for x in res.collision]})
    if not res.conclusive:
        return Report("fat-free-group", INCONCLUSIVE, values, label=INCONCLUSIVE,
                      witness={"hit_at_cap": res.cap})
    return Report("fat-free-group", PASS, values)


def cmd_suite_run(args) -> Report:
    from .acceptance import format_line, run

    select = {int(x) for x in args.select.split(",")} if args.select else None
    results = run(select)
    lines = []
    failed = []
    crits = {}
    for i, title, rep in results:
        lines.append(format_line(i, title, rep))
        # timings go to stderr only, so the report stays byte-identical across runs
        values = {k: v for k, v in rep.values.items() if k != "seconds"}
        crits[str(i)] = {"title": title, "verdict": rep.verdict, "values": values}
        if not rep.passed:
            failed.append(i)
    for line in lines:
        print(line, file=sys.stderr)
    return Report("suite", FAIL if failed else PASS, {"criteria": crits}, witness={"failed": failed} if failed else None)


# -- parser ---------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--budget", type=int, default=None, help="element/table budget (default: $SHIFTAUT_BUDGET or built-in)")
    p.add_argument("--workers", type=int, default=1)


def _add_spec(p, required=True):
    p.add_argument("--spec", required=required, help="subshift JSON")
    p.add_argument("--margin", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="shiftaut", description="Markers, egg markers and automorphisms of subshifts on groups.")
    ap.add_argument("--version", action="version", version=__version__)
    top = ap.add_subparsers(dest="area", required=True, parser_class=_Parser)

    def sub(area, help_):
        p = top.add_parser(area, help=help_)
        return p.add_subparsers(dest="action", required=True, parser_class=_Parser)

    def leaf(group, name, fn, help_):
        p = group.add_parser(name, help=help_)
        _add_common(p)
        p.set_defaults(func=fn)
        return p

    g = sub("group", "word metric and group checks")
    p = leaf(g, "ball", cmd_group_ball, "elements of B(r)")
    p.add_argument("--group", required=True)
    p.add_argument("--r", type=int, required=True)
    p = leaf(g, "check", cmd_group_check, "axioms on a ball (the whole group if finite)")
    p.add_argument("--group", required=True)
    p.add_argument("--radius", type=int, default=2)

    s = sub("subshift", "languages and constants")
    p = leaf(s, "language", cmd_sub_language, "enumerate L_F")
    _add_spec(p)
    p.add_argument("--F", required=True)
    p.add_argument("--list", action="store_true")
    for name, fn, flag in (("check-si", cmd_sub_si, "--K"), ("check-tmp", cmd_sub_tmp, "--M")):
        p = leaf(s, name, fn, "exhaustive window check")
        _add_spec(p)
        p.add_argument(flag, required=True)
        p.add_argument("--size-cap", type=int, default=3)
        p.add_argument("--radius", type=int, default=2)
    p = leaf(s, "growth", cmd_sub_growth, "language growth lower bound")
    _add_spec(p)
    p.add_argument("--K", required=True)
    p.add_argument("--F", required=True)

    m = sub("marker", "marker search and verification")
    for name, fn in (("search", cmd_marker_search), ("verify", cmd_marker_verify)):
        p = leaf(m, name, fn, f"marker {name}")
        _add_spec(p)
        p.add_argument("--Y", required=True)
        p.add_argument("--W", required=True)
        if name == "search":
            p.add_argument("--strategy", choices=("lex", "rand", "random"), default="lex")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--trials", type=int, default=10000)
            p.add_argument("--count-all", action="store_true")
        else:
            p.add_argument("--pattern", required=True)
    p = leaf(m, "feasibility", cmd_marker_feasibility, "the three marker-existence conditions")
    _add_spec(p)
    p.add_argument("--K", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--min-r", type=int, default=None, help="search the smallest r up to this bound")
    p.add_argument("--ball-factor", type=int, default=38)
    p.add_argument("--k-factor", type=int, default=16)
    p.add_argument("--k-offset", type=int, default=2)
    p.add_argument("--outer-factor", type=int, default=37)

    e = sub("egg", "egg collections")
    p = leaf(e, "build", cmd_egg_build, "all admissible yolks behind one white")
    _add_spec(p)
    p.add_argument("--Y", required=True)
    p.add_argument("--W", required=True)
    p.add_argument("--white")
    p.add_argument("--strategy", choices=("lex", "rand", "random"), default="lex")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--save")
    p = leaf(e, "verify", cmd_egg_verify, "marker, admissibility and exchange mode")
    _add_spec(p)
    p.add_argument("--eggs", required=True)
    p.add_argument("--mode", choices=("full-shift", "strong-tmp", "declared"), default="full-shift")
    p.add_argument("--M")
    p = leaf(e, "act", cmd_egg_act, "apply phi_sigma to a window")
    p.add_argument("--eggs", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--window", required=True)
    p = leaf(e, "lift", cmd_egg_lift, "lift an egg-model permutation or shift")
    p.add_argument("--eggs", required=True)
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--sigma")
    how.add_argument("--shift")
    p.add_argument("--window")

    a = sub("aut", "local rules and automorphisms")
    p = leaf(a, "compose", cmd_aut_compose, "compose rules, outermost first")
    p.add_argument("--rule", action="append", required=True)
    p.add_argument("--save")
    p = leaf(a, "verify", cmd_aut_verify, "check a rule against its inverse")
    _add_spec(p, required=False)
    p.add_argument("--rule", required=True)
    p.add_argument("--inverse", required=True)
    p = leaf(a, "enumerate", cmd_aut_enumerate, "automorphisms of a full shift on Z up to a radius")
    p.add_argument("--alphabet-size", type=int, default=2)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--r-inverse", type=int, default=None)
    p.add_argument("--periodic", type=int, default=8, help="period bound of the injectivity cross-check")
    p = leaf(a, "center", cmd_aut_center, "commutation with the phi_sigma probes of an egg collection")
    _add_spec(p, required=False)
    p.add_argument("--candidate", required=True)
    p.add_argument("--eggs", required=True)
    p = leaf(a, "slowshift", cmd_aut_slowshift, "k-th root of a shift")
    p.add_argument("--group", default="Z")
    p.add_argument("--h")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--save")

    b = sub("belt", "conveyor belts")
    for name, fn in (("classify", cmd_belt_classify), ("trace", cmd_belt_trace), ("psi", cmd_belt_psi)):
        p = leaf(b, name, fn, f"toy belt {name}")
        p.add_argument("--belt", help="belt JSON (default: pointers ±1, binary tracks)")
        p.add_argument("--window", required=True)
    b.choices["classify"].add_argument("--g")
    b.choices["classify"].add_argument("--track", default="top")
    b.choices["classify"].add_argument("--max-steps", type=int, default=None)
    b.choices["trace"].add_argument("--g", required=True)
    b.choices["trace"].add_argument("--track", default="top")
    b.choices["trace"].add_argument("--U", required=True)
    b.choices["psi"].add_argument("--phi", required=True)
    p = leaf(b, "fatfree", cmd_belt_fatfree, "spacing n0 for disjoint translates")
    p.add_argument("--group", required=True)
    p.add_argument("--T", required=True)
    p.add_argument("--embed", help="JSON list of generator images (default: the group's own generators)")
    p.add_argument("--cap", type=int, default=6)
    p.add_argument("--test-length", type=int, default=2)

    u = sub("suite", "acceptance suite")
    p = leaf(u, "run", cmd_suite_run, "run the acceptance criteria")
    p.add_argument("--select", help="comma-separated criterion numbers")
    return ap


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=1, default=str) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _jsonable(obj):
    """The witness itself when it serializes, else its repr."""
    try:
        json.dumps(obj)
        return obj
    except TypeError:
        return repr(obj)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.budget is None:
        args.budget = int(os.environ.get("SHIFTAUT_BUDGET", DEFAULT_BUDGET))
    command = f"{args.area} {args.action}"
    t0 = time.perf_counter()
    try:
        rep = args.func(args)
    except UsageError as exc:
        print(f"shiftaut: {exc}", file=sys.stderr)
        return USAGE
    except BudgetExceeded as exc:
        rep = Report(command, INCONCLUSIVE, {}, witness={"budget_exceeded": str(exc)}, label=INCONCLUSIVE)
    except ContractViolation as exc:
        rep = Report(command, FAIL, {}, witness={"contract": str(exc), "detail": _jsonable(exc.witness)})
    except (ShiftAutError, ValueError, KeyError, FileNotFoundError) as exc:
        print(f"shiftaut: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE
    doc = {
        "command": command,
        "config_hash": config_hash(command, args),
        "verdict": rep.verdict,
        "label": rep.label,
        "results": rep.values,
        "witness": rep.witness,
        "notes": rep.notes,
        "wall_time": round(time.perf_counter() - t0, 4),
    }
    _emit(doc, args.out)
    return EXIT.get(rep.verdict, USAGE)


if __name__ == "__main__":
    sys.exit(main())
