"""End-to-end command-line tests: exit codes, schema-valid JSON, CSV shape,
and determinism of every command for a fixed seed."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest
import referencing
from referencing.jsonschema import DRAFT7

from crnkit.cli import main

REPO = Path(__file__).resolve().parent.parent
SCHEMAS = REPO / "schemas"
NETWORKS = REPO / "demos" / "networks"

CYCLE = str(NETWORKS / "cycle.crn")
LOOP = str(NETWORKS / "loop.crn")
THREECLASS = str(NETWORKS / "threeclass.crn")
BIRTHDEATH = str(NETWORKS / "birthdeath.crn")
ISOMERS = str(NETWORKS / "isomers.crn")


def _registry():
    registry = referencing.Registry()
    for path in SCHEMAS.glob("*.schema.json"):
        contents = json.loads(path.read_text())
        resource = referencing.Resource.from_contents(
            contents, default_specification=DRAFT7
        )
        registry = registry.with_resource(contents["$id"], resource)
    return registry


REGISTRY = _registry()


def validate(payload: dict, schema_name: str):
    schema = json.loads((SCHEMAS / f"{schema_name}.schema.json").read_text())
    jsonschema.Draft7Validator(schema, registry=REGISTRY).validate(payload)


def run_json(capsys, argv, schema, expect=0):
    code = main(argv)
    out = capsys.readouterr().out
    assert code == expect
    payload = json.loads(out)
    validate(payload, schema)
    return payload


# ---------------------------------------------------------------------------
# analyze


def test_analyze_positive_recurrent_network_exits_zero(capsys):
    payload = run_json(capsys, ["analyze", CYCLE], "analyze", expect=0)
    assert payload["verdict"]["verdict"] == "PositiveRecurrent"
    assert payload["verdict"]["witnesses"] == {"A": "A", "B": "2B", "C": "C"}
    assert payload["linkage_classes"]["strongly_connected"] == [True]


def test_analyze_inconclusive_network_exits_two(capsys):
    payload = run_json(capsys, ["analyze", THREECLASS], "analyze", expect=2)
    verdict = payload["verdict"]
    assert verdict["verdict"] == "Inconclusive"
    assert len(payload["linkage_classes"]["classes"]) == 3
    assert payload["linkage_classes"]["strongly_connected"].count(True) == 1
    assert verdict["reasons"]


def test_analyze_reports_parse_errors_with_position(capsys, tmp_path):
    bad = tmp_path / "bad.crn"
    bad.write_text("species: A\nA -> ; k=1\n")
    code = main(["analyze", str(bad)])
    captured = capsys.readouterr()
    assert code == 1
    assert "line 2" in captured.err


def test_analyze_missing_file_exits_one(capsys):
    assert main(["analyze", "no-such-file.crn"]) == 1
    assert "error" in capsys.readouterr().err


def test_analyze_hypothesis_scan_clean_network(capsys):
    payload = run_json(
        capsys, ["analyze", CYCLE, "--hypothesis-scan"], "analyze", expect=0
    )
    scan = payload["hypothesis_scan"]
    assert scan["violation_found"] is False
    assert scan["exhaustive"] is True
    assert scan["patterns_checked"] > 0


def test_analyze_hypothesis_scan_finding_a_violation(capsys, tmp_path):
    f = tmp_path / "ann.crn"
    f.write_text("species: A, B\nA + B <-> 0 ; k=1.0, 1.0\n")
    payload = run_json(capsys, ["analyze", str(f), "--hypothesis-scan"], "analyze", expect=2)
    scan = payload["hypothesis_scan"]
    assert scan["violation_found"] is True
    assert scan["violating_complex"] == "0"
    assert scan["violating_sequence"] is not None


def test_analyze_reachability_report(capsys):
    payload = run_json(
        capsys,
        ["analyze", ISOMERS, "--reach-from", "2,0", "--reach-cap", "100"],
        "analyze",
        expect=0,
    )
    reach = payload["reachability"]
    assert reach["start"] == [2, 0]
    assert reach["n_states"] == 3
    assert reach["truncated"] is False


def test_analyze_output_is_deterministic(capsys):
    main(["analyze", CYCLE])
    first = capsys.readouterr().out
    main(["analyze", CYCLE])
    second = capsys.readouterr().out
    assert first == second


# ---------------------------------------------------------------------------
# tiers


def test_tiers_report_partitions_and_witness(capsys):
    payload = run_json(
        capsys, ["tiers", CYCLE, "--seq", "A=n, B=1, C=0"], "tiers", expect=0
    )
    d_top = payload["d_partition"]["tiers"][0]
    s_top = payload["s_partition"]["tiers"][0]
    assert d_top["complexes"] == ["A", "A + B", "A + C"]
    assert d_top["degree"] == "1"
    assert s_top["complexes"] == ["A", "A + B"]
    assert payload["s_partition"]["infinite"] == ["2B", "A + C", "C"]
    path = payload["path"]
    assert path["origin"] == "witness"
    assert len(path["reactions"]) == 5
    assert path["in_top_intensity"] and path["in_drop"]
    assert path["probability_limit"] == pytest.approx(1 / 54)


def test_tiers_explicit_path_membership(capsys):
    payload = run_json(
        capsys,
        ["tiers", CYCLE, "--seq", "A=n,B=1,C=0", "--path", "A->A+B"],
        "tiers",
        expect=0,
    )
    path = payload["path"]
    assert path["origin"] == "flag"
    assert path["in_top_intensity"] is True
    assert path["in_drop"] is False
    assert path["first_drop_index"] is None


def test_tiers_limit_controls_witness_length(capsys):
    payload = run_json(
        capsys,
        ["tiers", CYCLE, "--seq", "A=n,B=1,C=0", "--limit", "7"],
        "tiers",
        expect=0,
    )
    assert len(payload["path"]["reactions"]) == 7


def test_tiers_rejects_sequence_without_growth(capsys):
    code = main(["tiers", CYCLE, "--seq", "A=1, B=1, C=1"])
    captured = capsys.readouterr()
    assert code == 1
    assert "grow" in captured.err.lower()


def test_tiers_rejects_unknown_path_reaction(capsys):
    code = main(["tiers", CYCLE, "--seq", "A=n,B=1,C=0", "--path", "C->A"])
    captured = capsys.readouterr()
    assert code == 1
    assert "does not name a reaction" in captured.err


# ---------------------------------------------------------------------------
# drift


def test_drift_exact_single_state(capsys):
    payload = run_json(
        capsys, ["drift", CYCLE, "--x", "3,1,0", "--k", "1", "--exact"], "drift"
    )
    assert payload["drift"]["method"] == "exact"
    assert payload["drift"]["value"] == pytest.approx(0.19314718055994531)


def test_drift_zero_steps_is_zero(capsys):
    payload = run_json(capsys, ["drift", CYCLE, "--x", "3,1,0", "--k", "0"], "drift")
    assert payload["drift"]["value"] == 0.0


def test_drift_mc_reports_error_bar(capsys):
    payload = run_json(
        capsys,
        ["drift", BIRTHDEATH, "--x", "5", "--k", "1", "--mc", "4000", "--seed", "3"],
        "drift",
    )
    drift = payload["drift"]
    assert drift["method"] == "mc"
    assert drift["replicas"] == 4000
    assert drift["stderr"] > 0
    assert abs(drift["value"] - (-0.5861893768753227)) < 4 * drift["stderr"]


def test_drift_along_emits_decreasing_csv(capsys):
    code = main(
        ["drift", CYCLE, "--k", "5", "--along", "A=n,B=1,C=0:10,100,1000"]
    )
    out = capsys.readouterr().out
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,drift"
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert len(values) == 3
    assert values[0] > values[1] > values[2]
    assert values[-1] < 0


def test_drift_budget_violation_reports_bound(capsys):
    code = main(
        ["drift", CYCLE, "--x", "3,1,0", "--k", "9", "--budget", "1000"]
    )
    captured = capsys.readouterr()
    assert code == 1
    assert "budget" in captured.err.lower()


# ---------------------------------------------------------------------------
# simulate


def test_simulate_csv_shape_and_header(capsys):
    code = main(["simulate", BIRTHDEATH, "--x0", "0", "--jumps", "5", "--seed", "7"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,S"
    assert lines[1] == "0.0,0"
    assert len(lines) == 7


def test_simulate_zero_jumps_gives_initial_state_only(capsys):
    main(["simulate", BIRTHDEATH, "--x0", "3", "--jumps", "0"])
    out = capsys.readouterr().out
    assert out.strip().splitlines() == ["t,S", "0.0,3"]


def test_simulate_same_seed_gives_identical_files(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for target in (a, b):
        code = main(
            [
                "simulate",
                BIRTHDEATH,
                "--x0",
                "0",
                "--t-max",
                "50",
                "--seed",
                "11",
                "--out",
                str(target),
            ]
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("t,S\n0.0,0\n")


def test_simulate_requires_a_bound(capsys):
    code = main(["simulate", BIRTHDEATH, "--x0", "0"])
    assert code == 1
    assert "--t-max" in capsys.readouterr().err


def test_simulate_multispecies_header_lists_species(capsys):
    main(["simulate", CYCLE, "--x0", "5,0,0", "--jumps", "3", "--seed", "0"])
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "t,A,B,C"


# ---------------------------------------------------------------------------
# stationary


def test_stationary_ambiguous_region_is_an_error(capsys):
    # a box over both isomer counts mixes conservation classes, so the
    # censored chain has several closed classes and no canonical answer
    code = main(["stationary", ISOMERS, "--region", "0..1,0..1"])
    captured = capsys.readouterr()
    assert code == 1
    assert "closed communicating classes" in captured.err


def test_stationary_region_solve(capsys):
    payload = run_json(
        capsys, ["stationary", BIRTHDEATH, "--region", "0..40"], "stationary"
    )
    assert payload["stationary"]["method"] == "truncated_solve"
    dist = {
        tuple(e["state"]): e["probability"]
        for e in payload["stationary"]["distribution"]
    }
    assert sum(dist.values()) == pytest.approx(1.0, abs=1e-9)
    assert dist[(2,)] > dist[(10,)]


def test_stationary_time_average_close_to_solve(capsys):
    solve = run_json(
        capsys, ["stationary", BIRTHDEATH, "--region", "0..40"], "stationary"
    )
    avg = run_json(
        capsys,
        ["stationary", BIRTHDEATH, "--x0", "0", "--t-max", "20000", "--seed", "8"],
        "stationary",
    )
    ref = {tuple(e["state"]): e["probability"] for e in solve["stationary"]["distribution"]}
    est = {tuple(e["state"]): e["probability"] for e in avg["stationary"]["distribution"]}
    keys = set(ref) | set(est)
    tv = 0.5 * sum(abs(ref.get(k, 0.0) - est.get(k, 0.0)) for k in keys)
    assert tv < 0.02


def test_stationary_absorbing_start_warns_and_gives_point_mass(capsys, tmp_path):
    f = tmp_path / "decay.crn"
    f.write_text("species: A, B\nA -> B ; k=1.0\n")
    code = main(["stationary", str(f), "--x0", "0,4", "--t-max", "10"])
    captured = capsys.readouterr()
    assert code == 0
    assert "absorbing" in captured.err
    payload = json.loads(captured.out)
    validate(payload, "stationary")
    assert payload["stationary"]["distribution"] == [
        {"state": [0, 4], "probability": 1.0}
    ]


def test_stationary_needs_exactly_one_mode(capsys):
    assert main(["stationary", BIRTHDEATH]) == 1
    capsys.readouterr()
    assert (
        main(["stationary", BIRTHDEATH, "--x0", "0", "--t-max", "1", "--region", "0..2"])
        == 1
    )


# ---------------------------------------------------------------------------
# process-level behavior


def test_module_entry_point_runs_as_subprocess():
    result = subprocess.run(
        [sys.executable, "-m", "crnkit", "analyze", CYCLE],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout)["verdict"]["verdict"] == "PositiveRecurrent"


def test_bad_flags_exit_one_not_two(capsys):
    assert main(["drift", CYCLE, "--k", "1", "--x", "not-a-state"]) == 1
    capsys.readouterr()
    assert main(["analyze", CYCLE, "--reach-from", "1,2"]) == 1
