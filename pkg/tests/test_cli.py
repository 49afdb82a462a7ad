import csv
import io
import subprocess
import sys

import pytest

from warmstart.bench import CSV_COLUMNS, ExperimentConfig, RunRecord, rows_to_csv, run_experiment
from warmstart.cli import main
from warmstart.errors import OracleTooLarge
from warmstart.graphcore import BipartiteInstance
from warmstart.oracles import brute_force_mwpm


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


@pytest.fixture
def matching_file(tmp_path):
    return write(tmp_path, "m.txt", "p bipartite 3 3 9\n" + "".join(
        f"e {i} {j} {(i * j) % 5}\n" for i in range(1, 4) for j in range(1, 4)))


def test_solve_matching(matching_file, capsys):
    assert main(["solve-matching", "--input", matching_file]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "cost 3"


def test_solve_matching_with_prediction(tmp_path, matching_file, capsys):
    pred = write(tmp_path, "y.txt", "h 1 100\nh 4 -3\n")
    assert main(["solve-matching", "--input", matching_file, "--prediction", pred]) == 0
    assert capsys.readouterr().out.startswith("cost 3")


def test_no_perfect_matching_exits_1(tmp_path):
    path = write(tmp_path, "m.txt", "p bipartite 2 2 2\ne 1 1 1\ne 2 1 1\n")
    assert main(["solve-matching", "--input", path]) == 1


def test_parse_error_exits_2(tmp_path, capsys):
    path = write(tmp_path, "bad.txt", "p sp 2 1\nq 1 2 3\n")
    assert main(["apsp", "--input", path]) == 2
    assert "line 2" in capsys.readouterr().err


def test_missing_file_exits_2(tmp_path):
    assert main(["apsp", "--input", str(tmp_path / "missing.txt")]) == 2


def test_wrong_instance_kind_exits_2(matching_file):
    assert main(["apsp", "--input", matching_file]) == 2


def test_shortest_path_commands(tmp_path, capsys):
    path = write(tmp_path, "g.txt", "p sp 3 3\na 1 2 -2\na 2 3 3\na 1 3 2\n")
    assert main(["sssp", "--input", path]) == 0
    assert capsys.readouterr().out.split() == ["dist", "1", "0", "dist", "2", "-2", "dist", "3", "1"]
    assert main(["round-duals", "--input", path]) == 0
    assert "c round_iterations" in capsys.readouterr().out
    assert main(["apsp", "--input", path]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "0 -2 1"
    assert main(["diameter", "--input", path]) == 1  # vertex 1 is unreachable from 3


def test_negative_cycle_exits_1(tmp_path):
    path = write(tmp_path, "g.txt", "p sp 2 2\na 1 2 -1\na 2 1 -1\n")
    assert main(["apsp", "--input", path]) == 1
    assert main(["reduce", "sp", "--input", path]) == 1


def test_reduce_writes_target(tmp_path, capsys):
    path = write(tmp_path, "g.txt", "p sp 2 1\na 1 2 -3\n")
    out = str(tmp_path / "h.txt")
    assert main(["reduce", "sp", "--input", path, "--out", out]) == 0
    assert open(out).read().startswith("p bipartite 2 2 3")


def test_reduce_dcs_and_flow01(tmp_path, capsys):
    dcs = write(tmp_path, "d.txt", "p bmatch 1 1 2\ne 1 1 3\ne 1 1 7\nd 1 1\nd 2 1\n")
    assert main(["reduce", "dcs", "--input", dcs, "--maximize"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "weight 7"
    flow = write(tmp_path, "f.txt", "p max 4 4 1 4\na 1 2 1 2\na 2 4 1 2\na 1 3 1 1\na 3 4 1 1\n")
    assert main(["reduce", "flow01", "--input", flow, "--value", "1"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "cost 2"
    assert main(["reduce", "flow01", "--input", flow]) == 2
    assert main(["reduce", "flow01", "--input", flow, "--value", "3"]) == 1


def test_maxflow_with_preflow_prediction(tmp_path, capsys):
    net = write(tmp_path, "f.txt", "p max 3 2 1 3\na 1 2 2\na 2 3 1\n")
    pred = write(tmp_path, "p.txt", "f 1 2 2\nf 2 3 2\n")
    assert main(["maxflow", "--input", net, "--prediction", pred]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "value 1" and out[1] == "cut 1 2"


def test_verify(tmp_path, matching_file, capsys):
    assert main(["verify", "--input", matching_file]) == 0
    assert capsys.readouterr().out.strip() == "agree brute-force"
    net = write(tmp_path, "f.txt", "p max 3 2 1 3\na 1 2 2\na 2 3 1\n")
    assert main(["verify", "--input", net, "--oracle", "edmonds-karp"]) == 0
    assert main(["verify", "--input", net, "--oracle", "bellman-ford"]) == 2
    big = write(tmp_path, "big.txt", "p bipartite 20 20 20\n" + "".join(f"e {i} {i} 1\n" for i in range(1, 21)))
    assert main(["verify", "--input", big]) == 2


def test_oracle_budget():
    with pytest.raises(OracleTooLarge):
        brute_force_mwpm(BipartiteInstance(20, 20, [(i, i, 1) for i in range(20)]))


def test_gen_round_trips(tmp_path, capsys):
    out = str(tmp_path / "g.txt")
    assert main(["gen", "--kind", "sp", "--n", "5", "--steps", "3", "--index", "2", "--sigma", "1", "--out", out]) == 0
    assert main(["verify", "--input", out]) == 0


def test_seed_env_override(monkeypatch, capsys):
    main(["gen", "--seed", "7"])
    explicit = capsys.readouterr().out
    monkeypatch.setenv("WARMSTART_SEED", "7")
    main(["gen"])
    assert capsys.readouterr().out == explicit


class TestBench:
    def test_schema(self):
        rows = run_experiment(ExperimentConfig(steps=2, train_steps=1))
        text = rows_to_csv(rows)
        reader = csv.reader(io.StringIO(text))
        assert tuple(next(reader)) == CSV_COLUMNS
        assert CSV_COLUMNS == tuple(RunRecord.__dataclass_fields__)
        assert [r.predictor_name for r in rows] == ["none", "batch", "online"] * 2

    def test_cold_rows_have_empty_errors(self):
        rows = run_experiment(ExperimentConfig(steps=2, train_steps=1))
        for line in rows_to_csv(rows).splitlines()[1:]:
            fields = line.split(",")
            if fields[4] == "none":
                assert fields[5:8] == ["", "", ""]
                assert fields[-1] == ""

    def test_exact_batch_prediction(self):
        rows = run_experiment(ExperimentConfig("matching", 6, steps=1, train_steps=1, sigma=0, seed=4,
                                               predictors=("batch",)))
        assert rows[0].while_iterations == 0 and rows[0].l0 == 0

    @pytest.mark.parametrize("kind", ["matching", "sp", "flow"])
    def test_online_with_no_drift(self, kind):
        rows = run_experiment(ExperimentConfig(kind, 6, steps=4, train_steps=0, sigma=0, seed=2,
                                               predictors=("online",)))
        for row in rows[1:]:
            assert row.l0 == 0
            assert (row.while_iterations, row.round_iterations, row.relabels) == (0, 0, 0)

    def test_warm_and_cold_objectives_agree(self):
        for kind in ("matching", "sp", "flow"):
            rows = run_experiment(ExperimentConfig(kind, 5, steps=3, sigma=3, seed=1))
            for step in range(3):
                assert len({r.objective for r in rows[3 * step:3 * step + 3]}) == 1

    def test_timing_fills_wall_time(self):
        rows = run_experiment(ExperimentConfig(steps=1, train_steps=1, timing=True))
        assert all(r.wall_time_ns is not None and r.wall_time_ns > 0 for r in rows)

    def test_cli_bench(self, tmp_path):
        out = tmp_path / "b.csv"
        assert main(["bench", "--steps", "2", "--train-steps", "1", "--predictor", "online", "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "warmstart", "gen", "--n", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("p bipartite 2 2 4")
