"""Every subcommand against a frozen JSON report (timings excluded).

Regenerate the reports with ``SHIFTAUT_REGEN_GOLDEN=1 pytest tests/test_cli.py``
after an intended output change, and review the diff.
"""

import json
import os
import subprocess
import sys

import pytest

from conftest import ROOT

GOLDEN = os.path.join(ROOT, "tests", "golden")
REGEN = bool(os.environ.get("SHIFTAUT_REGEN_GOLDEN"))

CASES = {
    "group_ball_f2": (["group", "ball", "--group", "F_2", "--r", "2"], 0),
    "group_check_c5": (["group", "check", "--group", "C_5"], 0),
    "group_check_z2": (["group", "check", "--group", "Z^2", "--radius", "2"], 0),
    "language_golden": (["subshift", "language", "--spec", "data/golden_mean.json", "--F", "B(2)", "--list"], 0),
    "language_boundary": (["subshift", "language", "--spec", "data/boundary_f2.json", "--F", "B(1)", "--margin", "1"], 0),
    "si_golden_k1": (["subshift", "check-si", "--spec", "data/golden_mean.json", "--K", "B(1)", "--size-cap", "2"], 0),
    "si_golden_k0": (["subshift", "check-si", "--spec", "data/golden_mean.json", "--K", "[0]", "--size-cap", "2"], 1),
    "tmp_golden": (["subshift", "check-tmp", "--spec", "data/golden_mean.json", "--M", "B(1)", "--size-cap", "2"], 0),
    "growth_golden": (["subshift", "growth", "--spec", "data/golden_mean.json", "--K", "B(1)", "--F", "B(4)"], 0),
    "marker_search_b2": (["marker", "search", "--spec", "data/full2.json", "--Y", "[0]", "--W", "B(2)", "--count-all"], 0),
    "marker_search_b1": (["marker", "search", "--spec", "data/full2.json", "--Y", "[0]", "--W", "B(1)"], 1),
    "marker_search_random": (["marker", "search", "--spec", "data/full2.json", "--Y", "[0]", "--W", "B(1)",
                              "--strategy", "random", "--trials", "20"], 2),
    "marker_verify": (["marker", "verify", "--spec", "data/full2.json", "--Y", "[0]", "--W", "B(2)",
                       "--pattern", "data/marker_b2.json"], 0),
    "feasibility_r19": (["marker", "feasibility", "--spec", "data/full2.json", "--K", "[0]", "--k", "1", "--r", "19"], 0),
    "feasibility_min_r": (["marker", "feasibility", "--spec", "data/full2.json", "--K", "[0]", "--k", "1", "--min-r", "30"], 0),
    "feasibility_r5": (["marker", "feasibility", "--spec", "data/full2.json", "--K", "[0]", "--k", "1", "--r", "5"], 1),
    "egg_build_golden": (["egg", "build", "--spec", "data/golden_mean.json", "--Y", "[0]", "--W", "B(3)"], 0),
    "egg_verify_full": (["egg", "verify", "--spec", "data/full2.json", "--eggs", "data/eggs2.json"], 0),
    "egg_verify_tmp": (["egg", "verify", "--spec", "data/golden_mean.json", "--eggs", "data/eggs_golden.json",
                        "--mode", "strong-tmp"], 0),
    "egg_act": (["egg", "act", "--eggs", "data/eggs2.json", "--sigma", "1,0", "--window", "data/egg_window.json"], 0),
    "egg_lift_sigma": (["egg", "lift", "--eggs", "data/eggs2.json", "--sigma", "1,0", "--window", "data/egg_window.json"], 0),
    "egg_lift_shift": (["egg", "lift", "--eggs", "data/eggs2.json", "--shift", "1", "--window", "data/egg_window.json"], 1),
    "aut_compose": (["aut", "compose", "--rule", "data/tau1.json", "--rule", "data/tau_minus1.json"], 0),
    "aut_verify": (["aut", "verify", "--rule", "data/tau1.json", "--inverse", "data/tau_minus1.json"], 0),
    "aut_verify_bad": (["aut", "verify", "--rule", "data/tau1.json", "--inverse", "data/tau1.json"], 1),
    "aut_enumerate_r1": (["aut", "enumerate", "--r", "1"], 0),
    "aut_enumerate_small_bound": (["aut", "enumerate", "--r", "1", "--r-inverse", "0"], 2),
    "aut_center_shift": (["aut", "center", "--spec", "data/full2.json", "--candidate", "data/shift.json",
                          "--eggs", "data/eggs2.json"], 0),
    "aut_center_flip": (["aut", "center", "--spec", "data/full2.json", "--candidate", "data/flip.json",
                         "--eggs", "data/eggs2.json"], 1),
    "slowshift_z": (["aut", "slowshift", "--group", "Z", "--h", "1", "--n", "2", "--k", "3", "--verify"], 0),
    "slowshift_f2": (["aut", "slowshift", "--group", "F_2", "--h", "\"a\"", "--n", "2", "--k", "2", "--verify"], 0),
    "belt_classify_straight": (["belt", "classify", "--window", "data/straight.json", "--g", "0", "--track", "0"], 0),
    "belt_classify_segment": (["belt", "classify", "--window", "data/segment.json", "--g", "0", "--track", "0"], 0),
    "belt_trace": (["belt", "trace", "--window", "data/straight.json", "--g", "0", "--track", "0", "--U", "B(2)"], 0),
    "belt_psi": (["belt", "psi", "--belt", "data/toy_belt.json", "--window", "data/straight.json", "--phi", "data/tau_minus1.json"], 0),
    "belt_fatfree": (["belt", "fatfree", "--group", "F_2", "--T", "B(1)", "--cap", "4"], 0),
    "suite_select": (["suite", "run", "--select", "1,3,8"], 0),
}

VOLATILE = {"wall_time", "seconds"}


def scrub(obj):
    if isinstance(obj, dict):
        return {k: scrub(v) for k, v in obj.items() if k not in VOLATILE}
    if isinstance(obj, list):
        return [scrub(v) for v in obj]
    return obj


def run_cli(args, **kw):
    return subprocess.run([sys.executable, "-m", "shiftaut.cli", *args], cwd=ROOT, capture_output=True, text=True, **kw)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_report(name):
    args, code = CASES[name]
    proc = run_cli(args)
    assert proc.returncode == code, proc.stderr
    report = json.loads(proc.stdout)
    assert set(report) >= {"command", "config_hash", "verdict", "label", "results", "witness", "notes", "wall_time"}
    assert isinstance(report["wall_time"], float)
    path = os.path.join(GOLDEN, name + ".json")
    got = scrub(report)
    if REGEN or not os.path.exists(path):
        with open(path, "w") as fh:
            json.dump(got, fh, indent=1, sort_keys=True)
            fh.write("\n")
        if not REGEN:
            pytest.fail(f"golden report {name} was missing and has been written; rerun")
    with open(path) as fh:
        assert got == json.load(fh)


def test_fail_reports_carry_witness():
    for name, (args, code) in CASES.items():
        if code == 1:
            assert json.loads(run_cli(args).stdout)["witness"], name


def test_malformed_json_is_a_usage_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"group": {"kind": "Z"},\n "alphabet": [0, 1,}')
    proc = run_cli(["subshift", "language", "--spec", str(bad), "--F", "B(1)"])
    assert proc.returncode == 3
    assert "line 2" in proc.stderr and "bad.json" in proc.stderr


def test_unknown_flag_is_a_usage_error():
    assert run_cli(["group", "ball", "--nope"]).returncode == 3


def test_budget_exhaustion_is_inconclusive():
    proc = run_cli(["subshift", "language", "--spec", "data/full2.json", "--F", "B(8)", "--budget", "100"])
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["verdict"] == "inconclusive"


def test_config_hash_tracks_inputs(tmp_path):
    args = ["marker", "search", "--spec", "data/full2.json", "--Y", "[0]", "--W", "B(2)"]
    a = json.loads(run_cli(args).stdout)["config_hash"]
    b = json.loads(run_cli(args[:-1] + ["B(3)"]).stdout)["config_hash"]
    assert a != b
    assert a == json.loads(run_cli(args).stdout)["config_hash"]


def test_out_file(tmp_path):
    out = tmp_path / "r.json"
    proc = run_cli(["group", "ball", "--group", "Z", "--r", "1", "--out", str(out)])
    assert proc.returncode == 0
    assert json.loads(out.read_text())["verdict"] == "pass"


def test_saved_rule_round_trips(tmp_path):
    saved = tmp_path / "c.json"
    assert run_cli(["aut", "compose", "--rule", "data/tau1.json", "--rule", "data/tau1.json", "--save", str(saved)]).returncode == 0
    proc = run_cli(["aut", "verify", "--rule", str(saved), "--inverse", "data/tau_minus1.json"])
    assert proc.returncode == 1


@pytest.mark.parametrize("args", [
    ["marker", "search", "--spec", "data/full2.json", "--Y", "[0]", "--W", "B(3)", "--strategy", "random", "--seed", "4"],
    ["suite", "run", "--select", "1,2"],
])
def test_reports_are_deterministic(args):
    def body():
        doc = json.loads(run_cli(args).stdout)
        doc.pop("wall_time")
        return json.dumps(doc, sort_keys=True)

    assert body() == body()


def test_documented_examples():
    assert run_cli(["aut", "slowshift", "--n", "2", "--k", "2", "--verify"]).returncode == 0
    rep = json.loads(run_cli(["belt", "psi", "--phi", "data/shift.json", "--window", "data/straight.json"]).stdout)
    assert {"before", "after"} <= set(rep["results"])
    rep = json.loads(run_cli(["marker", "search", "--spec", "data/golden_mean.json", "--Y", "[0]", "--W", "B(2)",
                              "--strategy", "lex"]).stdout)
    assert rep["verdict"] == "pass" and rep["witness"]["checked"]
