"""Command line interface: payloads, formats, determinism, exit codes."""

import json
import math

import numpy as np
import pytest

from ngon.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_states_json_payload(capsys):
    code, out, _ = run(capsys, "states", "--n", "5")
    assert code == 0
    d = json.loads(out)
    assert d["n"] == 5 and d["parity"] == "odd"
    assert d["radius"] == pytest.approx(math.sqrt(1 / math.cos(math.pi / 5)), abs=1e-8)
    assert len(d["states"]) == 5
    assert all(row[2] == 1.0 for row in d["states"])


def test_states_csv_rows(capsys):
    code, out, _ = run(capsys, "states", "--n", "6", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "index,x,y,z"
    assert len(lines) == 7
    first = lines[1].split(",")
    assert first[0] == "0" and float(first[3]) == 1.0


def test_effects_saturation_sets(capsys):
    code, out, _ = run(capsys, "effects", "--n", "4")
    assert code == 0
    d = json.loads(out)
    # even effect j saturates on states j and j-1
    assert d["saturating"] == [[0, 3], [0, 1], [1, 2], [2, 3]]
    code, out, _ = run(capsys, "effects", "--n", "5")
    d = json.loads(out)
    assert d["saturating"] == [[0], [1], [2], [3], [4]]
    overlap = np.array(d["overlap"])
    assert overlap.shape == (5, 5)
    assert abs(overlap[2, 2] - 1.0) < 1e-9


def test_capacity_single_and_range(capsys):
    code, out, _ = run(capsys, "capacity", "--n", "4")
    assert code == 0
    d = json.loads(out)
    assert len(d["results"]) == 1
    assert d["results"][0]["capacity_bits"] == pytest.approx(1.0, abs=1e-6)

    code, out, _ = run(capsys, "capacity", "--n-range", "3..6", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,parity,capacity_bits,runtime_ms"
    assert len(lines) == 5
    rows = [line.split(",") for line in lines[1:]]
    assert [r[0] for r in rows] == ["3", "4", "5", "6"]
    assert [r[1] for r in rows] == ["odd", "even", "odd", "even"]
    assert float(rows[0][2]) == pytest.approx(math.log2(3), abs=1e-6)
    assert float(rows[2][2]) == pytest.approx(1.020433318, abs=1e-6)


def test_capacity_json_is_byte_identical(capsys):
    _, first, _ = run(capsys, "capacity", "--n-range", "3..6")
    _, second, _ = run(capsys, "capacity", "--n-range", "3..6")
    assert first == second
    assert "runtime" not in first


def test_capacity_parallel_matches_serial(capsys):
    _, serial, _ = run(capsys, "capacity", "--n-range", "3..7")
    _, parallel, _ = run(capsys, "capacity", "--n-range", "3..7", "--jobs", "2")
    assert serial == parallel


def test_vertices_summary_and_csv(capsys):
    code, out, _ = run(capsys, "vertices", "--alphabet-size", "3", "--c", "2.5")
    assert code == 0
    d = json.loads(out)
    assert d["summary"]["vertex_count"] == 99
    assert d["summary"]["zero_weight_count"] == 45
    assert d["summary"]["canonical_count"] == 54
    assert len(d["vertices"]) == 99

    code, out, _ = run(capsys, "vertices", "--c", "2.0", "--format", "csv")
    lines = out.strip().split("\n")
    assert lines[0].startswith("index,class,lam0,lam1,lam2,P_0_0")
    assert len(lines) == 28


def test_ic_search_agreement_flips_at_eight(capsys):
    code, out, _ = run(capsys, "ic", "--n", "6", "--search")
    assert code == 0
    d = json.loads(out)
    assert d["one_bit_bound"] is True
    assert d["success_bit0"] == 1.0
    assert d["search"]["matches_protocol"] is True

    code, out, _ = run(capsys, "ic", "--n", "8", "--search")
    d = json.loads(out)
    assert d["search"]["matches_protocol"] is False
    assert d["search"]["info_sum_bits"] == pytest.approx(1.12757066, abs=1e-8)
    assert d["search"]["info_sum_bits"] > d["info_sum_bits"]


def test_ic_rejects_odd_and_oversized_search(capsys):
    code, _, err = run(capsys, "ic", "--n", "5")
    assert code == 2 and "even" in err
    code, _, err = run(capsys, "ic", "--n", "26", "--search")
    assert code == 2 and "search" in err


def test_ne_csv_matrix(capsys):
    code, out, _ = run(capsys, "ne", "--n", "10", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "x,y0,y1,y2,y3,y4"
    assert len(lines) == 6
    diag = [float(lines[1 + i].split(",")[1 + i]) for i in range(5)]
    assert max(abs(v) for v in diag) <= 1e-9


def test_simulate_default_and_vertex(capsys):
    code, out, _ = run(capsys, "simulate", "--n", "5", "--samples", "2000", "--seed", "7")
    assert code == 0
    d = json.loads(out)
    assert d["samples"] == 2000 and d["seed"] == 7
    assert len(d["analytic_dist"]) == 3
    assert sum(d["analytic_dist"]) == pytest.approx(1.0, abs=1e-8)
    assert d["message_bits"] == pytest.approx(math.log2(5), abs=1e-8)

    code, out, _ = run(
        capsys, "simulate", "--n", "6", "--samples", "500", "--seed", "1",
        "--vertex", "2", "--indices", "0,3",
    )
    d = json.loads(out)
    assert len(d["analytic_dist"]) == 2
    code, _, err = run(capsys, "simulate", "--n", "6", "--vertex", "9")
    assert code == 2 and "vertex" in err


def test_simulate_deterministic_for_fixed_seed(capsys):
    args = ("simulate", "--n", "7", "--samples", "3000", "--seed", "11")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_check_text_and_exit_zero(capsys):
    code, out, _ = run(capsys, "check", "--only", "ic,ne", "--max-n", "16")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("PASS ic")
    assert lines[1].startswith("PASS ne")
    assert "2/2 checks passed" in out
    assert out.count("NOTE ") == 4


def test_check_json_format(capsys):
    code, out, _ = run(capsys, "check", "--only", "weights", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["passed"] is True
    assert [r["key"] for r in d["results"]] == ["weights"]
    assert all(r["passed"] for r in d["results"])
    assert len(d["notes"]) == 4


def test_check_unknown_key_is_usage_error(capsys):
    code, _, err = run(capsys, "check", "--only", "bogus")
    assert code == 2
    assert "unknown check" in err


def test_bad_n_exits_two(capsys):
    code, _, err = run(capsys, "states", "--n", "2")
    assert code == 2
    assert "n >= 3" in err


def test_missing_subcommand_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "ne.json"
    code, out, _ = run(capsys, "ne", "--n", "7", "--out", str(target))
    assert code == 0
    assert out == ""
    d = json.loads(target.read_text())
    assert d["n"] == 7 and d["effective_alphabet"] == 7


def test_env_overrides_defaults(capsys, monkeypatch):
    monkeypatch.setenv("NGON_SAMPLES", "750")
    monkeypatch.setenv("NGON_SEED", "42")
    code, out, _ = run(capsys, "simulate", "--n", "4")
    assert code == 0
    d = json.loads(out)
    assert d["samples"] == 750 and d["seed"] == 42
    monkeypatch.setenv("NGON_SAMPLES", "not-a-number")
    code, _, err = run(capsys, "simulate", "--n", "4")
    assert code == 2 and "NGON_SAMPLES" in err


def test_nine_significant_digits(capsys):
    _, out, _ = run(capsys, "states", "--n", "5")
    d = json.loads(out)
    # 9 significant digits: sqrt(sec(pi/5)) = 1.111785944... rounds to 1.11178594
    assert d["radius"] == 1.11178594
    _, out, _ = run(capsys, "capacity", "--n", "5")
    d = json.loads(out)
    assert d["results"][0]["capacity_bits"] == 1.02043332
