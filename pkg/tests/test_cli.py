import json

import pytest

from nearfield.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run_cli(capsys, *argv)
    return code, json.loads(out)


# ---------------------------------------------------------------------------
# pair
# ---------------------------------------------------------------------------


def test_pair_valid(capsys):
    code, out = run_json(capsys, "pair", "5", "4")
    assert code == 0
    assert out["valid"] and out["violated"] is None


def test_pair_valid_43(capsys):
    code, out = run_json(capsys, "pair", "4", "3")
    assert code == 0 and out["valid"]


def test_pair_invalid_condition_iii(capsys):
    code, out = run_json(capsys, "pair", "3", "4")
    assert code == 2
    assert not out["valid"] and out["violated"] == "iii"


def test_pair_text_format(capsys):
    code, out, _ = run_cli(capsys, "pair", "7", "9", "--format", "text")
    assert code == 0
    assert "Dickson pair" in out


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------


def test_build_32(capsys):
    code, out = run_json(capsys, "build", "3", "2")
    assert code == 0
    assert out["size"] == 9 and out["schema"] == "nearfield/1"


def test_build_explicit_modulus_and_generator(capsys):
    code, out = run_json(capsys, "build", "5", "4", "--modulus", "2,0,0,0,1", "--generator", "2,1")
    assert code == 0
    assert out["size"] == 625
    assert out["modulus"] == [2, 0, 0, 0, 1]
    assert out["generator"] == [2, 1]


def test_build_rejects_non_pair(capsys):
    code, out = run_json(capsys, "build", "6", "2")
    assert code == 2
    assert out["schema"] == "nearfield-error/1"
    assert out["error"] == "NotADicksonPair"


def test_build_rejects_reducible_modulus(capsys):
    code, out = run_json(capsys, "build", "5", "2", "--modulus", "4,0,1")
    assert code == 2
    assert out["error"] == "ReducibleModulus"


def test_build_respects_size_cap(capsys):
    code, out = run_json(capsys, "build", "5", "4", "--size-cap", "100")
    assert code == 2
    assert out["error"] == "SizeCap"


def test_size_cap_env_var(capsys, monkeypatch):
    monkeypatch.setenv("NEARFIELD_SIZE_CAP", "100")
    code, out = run_json(capsys, "build", "5", "4")
    assert code == 2 and out["error"] == "SizeCap"


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_32(capsys):
    code, out = run_json(capsys, "verify", "3", "2")
    assert code == 0
    axioms = out["axioms"]
    assert axioms["additive_abelian"] and axioms["left_distributive"]
    assert not axioms["right_distributive"]
    assert axioms["right_counterexample"] is not None
    assert out["presentation"]["relations_hold"]


def test_verify_field_case(capsys):
    code, out = run_json(capsys, "verify", "5", "1")
    assert code == 0
    assert out["axioms"]["right_distributive"]


def test_verify_sampled(capsys):
    code, out = run_json(capsys, "verify", "5", "4", "--sample", "50000", "--seed", "7")
    assert code == 0
    assert out["axioms"]["mode"] == "sampled"
    assert out["axioms"]["right_counterexample"] is not None


# ---------------------------------------------------------------------------
# dist
# ---------------------------------------------------------------------------


def test_dist_whole_structure(capsys):
    code, out = run_json(capsys, "dist", "5", "4")
    assert code == 0
    assert out["count"] == 5
    assert out["elements"] == ["0", "1", "2", "3", "4"]


def test_dist_single_pair_subfield(capsys):
    code, out = run_json(
        capsys, "dist", "5", "4", "--modulus", "2,0,0,0,1", "--generator", "2,1", "--alpha", "3", "--beta", "2,0,1"
    )
    assert code == 0
    assert out["size"] == 25
    assert "1+x^2" in out["members"]
    assert out["match"] and out["is_subfield"]


def test_dist_zero_operand(capsys):
    code, out = run_json(capsys, "dist", "3", "2", "--alpha", "0", "--beta", "1")
    assert code == 0
    assert out["case"]["tag"] == "zero_operand"
    assert out["size"] == 9


def test_dist_requires_both_operands(capsys):
    code, out = run_json(capsys, "dist", "3", "2", "--alpha", "1")
    assert code == 2


def test_dist_rejects_bad_coefficients(capsys):
    code, out = run_json(capsys, "dist", "3", "2", "--alpha", "7", "--beta", "1")
    assert code == 2


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def test_sweep_all_32_to_stdout(capsys):
    code, out, err = run_cli(capsys, "sweep", "3", "2", "--all", "--workers", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# schema=nearfield-sweep/1"
    assert len(lines) == 2 + 64
    summary = json.loads(err)
    assert summary["mismatches"] == 0


def test_sweep_output_file(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    code, out, _ = run_cli(capsys, "sweep", "3", "2", "--all", "--workers", "1", "--output", str(path))
    assert code == 0
    summary = json.loads(out)
    assert summary["total_pairs"] == 64
    text = path.read_text()
    assert text.startswith("# schema=nearfield-sweep/1\n")
    assert len(text.splitlines()) == 66


def test_sweep_sampled_deterministic(capsys):
    code1, out1, _ = run_cli(capsys, "sweep", "13", "2", "--sample", "5000", "--seed", "1", "--workers", "1")
    code2, out2, _ = run_cli(capsys, "sweep", "13", "2", "--sample", "5000", "--seed", "1", "--workers", "1")
    assert code1 == code2 == 0
    assert out1 == out2


def test_sweep_requires_mode(capsys):
    code, out = run_json(capsys, "sweep", "3", "2")
    assert code == 2


def test_sweep_budget_error_mentions_sampling(capsys):
    code, out = run_json(capsys, "sweep", "5", "4", "--all", "--op-budget", "1000", "--workers", "1")
    assert code == 2
    assert out["error"] == "BudgetExceeded"
    assert "sampl" in out["message"]


# ---------------------------------------------------------------------------
# mapnr
# ---------------------------------------------------------------------------


def test_mapnr_z3(capsys):
    code, out = run_json(capsys, "mapnr", "Z3")
    assert code == 0
    assert out["left_nearring"]["map_count"] == 27
    assert out["distributive_map_count"] == 3
    assert out["equals_endomorphisms"]


def test_mapnr_z2_counterexample(capsys):
    code, out = run_json(capsys, "mapnr", "Z2")
    assert code == 0
    cx = out["left_nearring"]["right_counterexample"]
    assert cx is not None
    assert len(set(cx["h"])) == 1  # constant map


def test_mapnr_v4(capsys):
    code, out = run_json(capsys, "mapnr", "V4")
    assert code == 0
    assert out["distributive_map_count"] == 16
    assert out["closed_under_add"] and out["closed_under_compose"]


def test_mapnr_custom_file(capsys, tmp_path):
    path = tmp_path / "z2.json"
    path.write_text('{"order": 2, "add": [[0, 1], [1, 0]], "name": "C2"}')
    code, out = run_json(capsys, "mapnr", str(path))
    assert code == 0
    assert out["left_nearring"]["order"] == 2


def test_mapnr_unknown_group(capsys):
    code, out = run_json(capsys, "mapnr", "Q8")
    assert code == 2


# ---------------------------------------------------------------------------
# determinism of simple commands
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ("pair", "5", "4"),
        ("build", "3", "2"),
        ("dist", "5", "4"),
        ("verify", "3", "2"),
    ],
)
def test_repeated_invocations_byte_identical(capsys, argv):
    _, out1, _ = run_cli(capsys, *argv)
    _, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2
