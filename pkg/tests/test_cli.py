import json
import math

import pytest

from pairguess.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def structured(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "structured")
    return code, json.loads(out)


def test_evaluate_trine(capsys):
    code, doc = structured(capsys, "evaluate", "--d", "3", "--strategy", "trine")
    assert code == 0
    assert doc["average_success"] == pytest.approx(0.9330127, abs=1e-7)
    assert doc["wins"] is True
    assert doc["qrac_reference"] == pytest.approx(0.8535534, abs=1e-7)


def test_evaluate_text_output(capsys):
    code, out, _ = run(capsys, "evaluate", "--d", "3", "--strategy", "trine")
    assert "average success    0.9330127" in out
    assert "wins               true" in out


def test_evaluate_classical(capsys):
    code, out, _ = run(capsys, "evaluate", "--d", "4", "--strategy", "classical-optimum", "--levels", "2")
    assert code == 0
    assert "0.8333333 (5/6)" in out
    assert "wins               false" in out


def test_evaluate_polygon(capsys):
    _, doc = structured(capsys, "evaluate", "--d", "4", "--strategy", "polygon")
    assert doc["average_success"] == pytest.approx(0.9023689, abs=1e-7)


def test_evaluate_ensemble_file(capsys, tmp_path):
    path = tmp_path / "ens.txt"
    r3 = math.sqrt(3) / 2
    path.write_text(f"# trine\n1 0 0 0\n0.5 0 {-r3} 0\n0.5 0 {r3} 0\n")
    code, doc = structured(capsys, "evaluate", "--d", "3", "--ensemble-file", str(path))
    assert code == 0
    assert doc["average_success"] == pytest.approx(0.9330127, abs=1e-7)


@pytest.mark.parametrize("content", ["1 0 0\n", "1 0 0 0\n0.9 0 0.1 0\n1 0 0 0\n", "a b c d\n"])
def test_evaluate_bad_ensemble_file(capsys, tmp_path, content):
    path = tmp_path / "bad.txt"
    path.write_text(content)
    code, _, err = run(capsys, "evaluate", "--d", "3", "--ensemble-file", str(path))
    assert code != 0
    assert "error" in err


def test_evaluate_wrong_dimension(capsys):
    code, _, err = run(capsys, "evaluate", "--d", "4", "--strategy", "trine")
    assert code == 2 and "d 3" in err


def test_unknown_strategy_exits_nonzero(capsys):
    with pytest.raises(SystemExit) as info:
        main(["evaluate", "--d", "3", "--strategy", "hexad"])
    assert info.value.code != 0


def test_optimize_quantum(capsys):
    code, doc = structured(capsys, "optimize", "--d", "3", "--mode", "quantum", "--restarts", "16", "--seed", "1")
    assert code == 0
    assert doc["best_average"] >= 0.93301 - 1e-6
    assert doc["reference"] == "trine"
    assert abs(doc["gap_to_reference"]) < 1e-6


def test_optimize_delta(capsys):
    _, doc = structured(capsys, "optimize", "--d", "4", "--mode", "delta", "--grid-step", "0.005")
    assert doc["argmax"] == pytest.approx([0.59] * 3, abs=0.01)


def test_optimize_classical(capsys):
    _, doc = structured(capsys, "optimize", "--d", "5", "--mode", "classical", "--levels", "2")
    assert doc["best_average"] == pytest.approx(0.8)
    assert doc["best_average_exact"] == "4/5"


def test_optimize_resource_limit(capsys):
    code, _, err = run(capsys, "optimize", "--d", "40", "--mode", "classical", "--levels", "2")
    assert code == 2 and "exceeds" in err


def test_simulate_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        code, _, _ = run(capsys, "simulate", "--d", "3", "--strategy", "trine",
                         "--rounds", "100000", "--seed", "7", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 100000


def test_simulate_reports_average(capsys, tmp_path):
    _, doc = structured(capsys, "simulate", "--d", "4", "--strategy", "tetrad", "--noise", "0.3",
                        "--rounds", "100000", "--seed", "3", "--out", str(tmp_path / "t.jsonl"))
    expected = 0.5 + 0.7 / math.sqrt(6)
    assert abs(doc["empirical_average"] - expected) < 4 * math.sqrt(expected * (1 - expected) / 1e5)
    assert doc["seed"] == 3 and doc["generator"] == "philox4x64"


def test_certify_exit_codes(capsys, tmp_path):
    q, c = tmp_path / "q.jsonl", tmp_path / "c.jsonl"
    run(capsys, "simulate", "--d", "3", "--strategy", "trine", "--rounds", "100000", "--seed", "1", "--out", str(q))
    run(capsys, "simulate", "--d", "3", "--strategy", "classical-optimum", "--rounds", "100000",
        "--seed", "1", "--out", str(c))
    code, doc = structured(capsys, "certify", "--in", str(q), "--d", "3", "--alpha", "0.01")
    assert code == 0 and doc["quantumness_verdict"] == "QUANTUM"
    code, out, _ = run(capsys, "certify", "--in", str(c), "--d", "3", "--alpha", "0.01")
    assert code == 3 and "NOT_CERTIFIED" in out


def test_certify_truncated_file(capsys, tmp_path):
    path = tmp_path / "t.jsonl"
    run(capsys, "simulate", "--d", "3", "--strategy", "trine", "--rounds", "10", "--seed", "1", "--out", str(path))
    with open(path, "a") as fh:
        fh.write('{"round": 10, "x": 1, "j"')
    code, _, err = run(capsys, "certify", "--in", str(path), "--d", "3")
    assert code == 2
    assert "line 11" in err


def test_certify_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "certify", "--in", str(tmp_path / "nope.jsonl"), "--d", "3")
    assert code == 2


@pytest.mark.parametrize("strategy, d, noise, quantum", [
    ("trine", 3, 0.0, True),
    ("tetrad", 4, 0.0, True),
    ("polygon", 5, 0.0, True),
    ("classical-optimum", 3, 0.0, False),
    ("classical-optimum", 5, 0.0, False),
    ("trine", 3, 0.8, False),
])
def test_simulate_certify_round_trip(capsys, tmp_path, strategy, d, noise, quantum):
    path = tmp_path / "r.jsonl"
    run(capsys, "simulate", "--d", str(d), "--strategy", strategy, "--noise", str(noise),
        "--rounds", "100000", "--seed", "2", "--out", str(path))
    code, _, _ = run(capsys, "certify", "--in", str(path), "--d", str(d), "--alpha", "0.01")
    assert code == (0 if quantum else 3)


def test_threads_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("PAIRGUESS_THREADS", "3")
    code, doc = structured(capsys, "optimize", "--d", "4", "--mode", "classical", "--levels", "3")
    assert code == 0 and doc["can_win"] is False
