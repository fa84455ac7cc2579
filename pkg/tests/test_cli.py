import json

import pytest

from qgas.cli import main

F_TEXT = "# -2 x0 - x1 + 3 x0 x1\n-2 * x_0\n- x_1\n3 * x_0 * x_1\n"


@pytest.fixture
def poly_file(tmp_path):
    p = tmp_path / "f.txt"
    p.write_text(F_TEXT)
    return str(p)


def test_solve_example(poly_file, tmp_path, capsys):
    out = tmp_path / "trace.json"
    assert main(["solve", "--poly", poly_file, "--seed", "7", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "best_cost: -2.0" in text and "best_assignment: 10" in text
    doc = json.loads(out.read_text())
    assert doc["config"]["rng_seed"] == 7 and doc["best_cost"] == -2


def test_solve_constant(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("vars 2\n5\n")
    assert main(["solve", "--poly", str(p)]) == 0


def test_solve_malformed_line(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("1 * x_0\n2 * x_0 * x_0\n")
    assert main(["solve", "--poly", str(p)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_solve_budget_exhaustion_exit_two(tmp_path):
    p = tmp_path / "q.txt"
    terms = [f"{(-1) ** i * (i % 5 + 1)} * x_{i} * x_{(i + 1) % 8}" for i in range(8)]
    p.write_text("\n".join(terms + ["-3 * x_0", "2 * x_5"]) + "\n")
    assert main(["solve", "--poly", str(p), "--budget", "2"]) == 2


def test_solve_strategies(poly_file):
    for s in ("random", "quantile:0.2", "classical", "combined"):
        assert main(["solve", "--poly", poly_file, "--strategy", s]) == 0


def test_bad_flags_exit_one(poly_file):
    assert main(["solve", "--poly", poly_file, "--lambda", "2"]) == 1
    assert main(["solve", "--poly", poly_file, "--strategy", "quantile:7"]) == 1
    assert main(["solve", "--poly", "/nonexistent/file.txt"]) == 1
    assert main(["nonsense"]) == 1
    assert main(["solve"]) == 1


def test_simulator_limit_exit_one(monkeypatch, tmp_path):
    monkeypatch.setenv("QGAS_MAX_QUBITS", "6")
    prefix = tmp_path / "exp"
    assert main(["mimo-experiment", "--n", "8", "--trials", "1", "--out", str(prefix)]) == 1
    assert not (tmp_path / "exp.csv").exists()


def test_mimo_experiment_zero_trials(tmp_path):
    prefix = tmp_path / "exp"
    assert main(["mimo-experiment", "--n", "4", "--trials", "0", "--out", str(prefix)]) == 0
    assert (tmp_path / "exp.csv").read_text() == (
        "trial,strategy,n,queries_to_optimum,converged,best_cost,optimal_cost\n")
    doc = json.loads((tmp_path / "exp.json").read_text())
    assert doc["config"]["seed"] == 0


def test_mimo_experiment_odd_bits(tmp_path):
    assert main(["mimo-experiment", "--n", "5", "--mod", "qpsk", "--trials", "1",
                 "--out", str(tmp_path / "x")]) == 1


def test_grassmann_check_mub(capsys):
    assert main(["grassmann-check", "--mub"]) == 0
    assert "min_chordal_distance: 0.70711" in capsys.readouterr().out


def test_grassmann_check_files(tmp_path, capsys):
    pair = tmp_path / "pair.txt"
    pair.write_text("1+0j,0+0j\n0+0j,1+0j\n")
    assert main(["grassmann-check", "--codebook", str(pair)]) == 0
    assert "min_chordal_distance: 1.00000" in capsys.readouterr().out
    dup = tmp_path / "dup.txt"
    dup.write_text("2+0j,0+0j\n1+0j,0+0j\n")
    assert main(["grassmann-check", "--codebook", str(dup)]) == 0
    captured = capsys.readouterr()
    assert "min_chordal_distance: 0.00000" in captured.out
    assert "warning" in captured.err


def test_coloring_and_codebook(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("0 1\n1 2\n2 0\n")
    assert main(["coloring", "--graph", str(g), "--colors", "4", "--seed", "1"]) == 0
    assert "conflicts: 0" in capsys.readouterr().out
    assert main(["codebook", "--mub", "--k", "2", "--seed", "2"]) == 0
    assert "min_distance: 1.0" in capsys.readouterr().out


def test_simulate_bell(tmp_path, capsys):
    c = tmp_path / "bell.txt"
    c.write_text("qubits 2\nH 0\nCNOT 0 1\n")
    assert main(["simulate", "--circuit", str(c), "--shots", "1000", "--seed", "3"]) == 0
    lines = capsys.readouterr().out.split()
    assert set(lines[::2]) <= {"00", "11"}


def _run_twice(tmp_path, argv_for):
    outputs = []
    for tag in ("a", "b"):
        argv, paths = argv_for(tmp_path / tag)
        (tmp_path / tag).mkdir()
        main(argv)
        outputs.append([p.read_bytes() for p in paths])
    return outputs


@pytest.mark.parametrize("command", ["solve", "coloring", "codebook", "grassmann-check", "simulate", "mimo-experiment"])
def test_outputs_are_byte_identical(tmp_path, poly_file, command):
    graph = tmp_path / "g.txt"
    graph.write_text("0 1\n1 2\n2 3\n3 0\n")
    circ = tmp_path / "c.txt"
    circ.write_text("qubits 3\nH 0\nH 1\nCNOT 1 2\n")

    def argv_for(d):
        out = d / "out.json"
        if command == "solve":
            return ["solve", "--poly", poly_file, "--seed", "5", "--out", str(out)], [out]
        if command == "coloring":
            return ["coloring", "--graph", str(graph), "--colors", "2", "--seed", "5", "--out", str(out)], [out]
        if command == "codebook":
            return ["codebook", "--mub", "--k", "3", "--seed", "5", "--out", str(out)], [out]
        if command == "grassmann-check":
            return ["grassmann-check", "--mub", "--out", str(out)], [out]
        if command == "simulate":
            return ["simulate", "--circuit", str(circ), "--seed", "5", "--out", str(out)], [out]
        prefix = d / "exp"
        return (["mimo-experiment", "--n", "4", "--trials", "3", "--seed", "5", "--out", str(prefix)],
                [d / "exp.csv", d / "exp.json"])

    first, second = _run_twice(tmp_path, argv_for)
    assert first == second
