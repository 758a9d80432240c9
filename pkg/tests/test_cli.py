import json

import pytest

from seqclass.cli import main

WORKED = {
    "labels": ["C1", "C2", "C3", "C4"],
    "matrix": [[1, 0, 0, 1], [0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 1, 1]],
    "p": [0.4, 0.2, 0.3, 0.1],
    "c": [3, 1, 4, 1],
}


@pytest.fixture
def worked_file(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(WORKED))
    return str(path)


class TestSolve:
    def test_dp_prints_six_decimals(self, worked_file, tmp_path, capsys):
        out = tmp_path / "tree.json"
        code = main(["solve", "--input", worked_file, "--method", "dp",
                     "--output", str(out)])
        assert code == 0
        assert capsys.readouterr().out == "2.900000\n"
        assert json.loads(out.read_text())["inspect"] == 2

    def test_hybrid(self, worked_file, capsys):
        assert main(["solve", "--input", worked_file, "--method", "hybrid"]) == 0
        assert capsys.readouterr().out == "2.900000\n"

    def test_posterior_rule(self, worked_file, capsys):
        code = main(["--entropy-rule", "posterior-per-cost",
                     "solve", "--input", worked_file, "--method", "entropy"])
        assert code == 0
        assert capsys.readouterr().out == "5.000000\n"

    def test_malformed_file_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["solve", "--input", str(bad), "--method", "dp"]) == 2
        assert "error" in capsys.readouterr().err

    def test_invalid_problem_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "dup.json"
        bad.write_text(json.dumps(dict(WORKED, matrix=[[1, 0, 0, 1]] * 4)))
        assert main(["solve", "--input", str(bad), "--method", "dp"]) == 2

    def test_json_format(self, worked_file, capsys):
        assert main(["--format", "json", "solve", "--input", worked_file,
                     "--method", "signature"]) == 0
        body = json.loads(capsys.readouterr().out)
        assert body["expected_cost"] == pytest.approx(2.9)
        assert body["tree"]["inspect"] == 4

    def test_deterministic_output(self, worked_file, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["solve", "--input", worked_file, "--method", "dp", "--output", str(a)])
        main(["solve", "--input", worked_file, "--method", "dp", "--output", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestEval:
    def test_valid_tree(self, worked_file, tmp_path, capsys):
        out = tmp_path / "tree.json"
        main(["solve", "--input", worked_file, "--method", "dp", "--output", str(out)])
        capsys.readouterr()
        assert main(["eval", "--input", worked_file, "--tree", str(out)]) == 0
        assert capsys.readouterr().out == "valid 2.900000\n"

    def test_corrupted_tree_exits_1(self, worked_file, tmp_path, capsys):
        tree = {
            "inspect": 2,
            "if_false": {"inspect": 4, "if_false": {"class": "C1"}, "if_true": {"class": "C3"}},
            "if_true": {"inspect": 3, "if_false": {"class": "C2"}, "if_true": {"class": "C4"}},
        }
        path = tmp_path / "bad_tree.json"
        path.write_text(json.dumps(tree))
        assert main(["eval", "--input", worked_file, "--tree", str(path)]) == 1
        assert "row 1" in capsys.readouterr().out

    def test_leaf_on_single_row(self, tmp_path, capsys):
        problem = tmp_path / "single.json"
        problem.write_text(json.dumps(
            {"labels": ["x"], "matrix": [[1, 0]], "p": [1.0], "c": [1, 2]}
        ))
        tree = tmp_path / "leaf.json"
        tree.write_text(json.dumps({"class": "x"}))
        assert main(["eval", "--input", str(problem), "--tree", str(tree)]) == 0
        assert capsys.readouterr().out == "valid 0.000000\n"


class TestGen:
    def test_writes_files(self, tmp_path, capsys):
        out = tmp_path / "problems"
        code = main(["--seed", "3", "gen", "--rows", "4", "--cols", "4",
                     "--per-cell", "1", "--out", str(out),
                     "--entropy-bin", "0", "--cv-bin", "0"])
        assert code == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["seed"] == 3
        assert len(manifest["problems"]) == 1


class TestBench:
    def test_tiny_grid(self, tmp_path, capsys):
        out = tmp_path / "bench"
        code = main(["--seed", "2", "bench", "--rows", "4", "--cols", "4",
                     "--per-cell", "1", "--methods", "dp,hybrid", "--out", str(out)])
        assert code == 0
        csv_text = (out / "grid.csv").read_text()
        assert csv_text.splitlines()[0].startswith("method,entropy_bin")
        # dp rows all report zero error
        for line in csv_text.splitlines()[1:]:
            if line.startswith("dp,"):
                assert line.split(",")[4] == "0.0"

    def test_single_method_table(self, capsys):
        assert main(["--seed", "2", "bench", "--rows", "4", "--cols", "4",
                     "--per-cell", "1", "--methods", "hybrid"]) == 0
        out = capsys.readouterr().out
        assert "hybrid" in out and "entropy bin" in out


class TestReduceSetCover:
    def test_yes_instance(self, tmp_path, capsys):
        path = tmp_path / "sc.json"
        path.write_text(json.dumps({"universe": [1, 2], "subsets": [[1], [2], [1, 2]], "k": 1}))
        reduced = tmp_path / "reduced.json"
        code = main(["reduce-setcover", "--input", str(path), "--output", str(reduced)])
        assert code == 0
        assert "yes: subsets {3}" in capsys.readouterr().out
        body = json.loads(reduced.read_text())
        assert body["matrix"] == [[1, 0, 1], [0, 1, 1], [0, 0, 0]]

    def test_k0_no(self, tmp_path, capsys):
        path = tmp_path / "sc.json"
        path.write_text(json.dumps({"universe": [1, 2], "subsets": [[1], [2], [1, 2]], "k": 0}))
        assert main(["reduce-setcover", "--input", str(path)]) == 0
        assert capsys.readouterr().out.startswith("no:")

    def test_degenerate_exits_2(self, tmp_path, capsys):
        path = tmp_path / "sc.json"
        path.write_text(json.dumps({"universe": [1, 2], "subsets": [[1, 2], [1, 2]], "k": 1}))
        assert main(["reduce-setcover", "--input", str(path)]) == 2
        assert "degenerate" in capsys.readouterr().err


class TestUsage:
    def test_unknown_flag_exits_2(self, worked_file):
        with pytest.raises(SystemExit) as err:
            main(["solve", "--input", worked_file, "--method", "dp", "--frobnicate"])
        assert err.value.code == 2

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["--version"])
        assert err.value.code == 0
        assert "seqclass" in capsys.readouterr().out
