"""End-to-end tests of the command-line front end (exit codes and output)."""

import json

import pytest

from bsat_arr import runops
from bsat_arr.cli import main

THREE_LINES = {"n": 2, "hyperplanes": [["1", "0"], ["0", "1"], ["1", "1"]]}
NON_GENERIC = {
    "n": 3,
    "hyperplanes": [["1", "0", "0"], ["0", "1", "0"], ["1", "1", "0"], ["0", "0", "1"]],
}


@pytest.fixture
def three_lines_file(tmp_path):
    path = tmp_path / "three_lines.json"
    path.write_text(json.dumps(THREE_LINES))
    return str(path)


@pytest.fixture
def non_generic_file(tmp_path):
    path = tmp_path / "non_generic.json"
    path.write_text(json.dumps(NON_GENERIC))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBFunctionCommand:
    def test_generic_json_output(self, capsys):
        code, out, _ = run_cli(capsys, "bfunction", "--generic", "--n", "2", "--k", "3")
        assert code == 0
        report = json.loads(out)
        assert report["command"] == "bfunction --generic --n 2 --k 3"
        assert (
            report["results"]["candidates"]["r=1"]["factored"]
            == "(s+2/3)(s+1)^2(s+4/3)"
        )
        # stdout carries exactly the canonical serialization
        assert out == runops.canonical_json(report) + "\n"

    def test_isolated(self, capsys, three_lines_file):
        code, out, _ = run_cli(capsys, "bfunction", "--isolated", "--input", three_lines_file)
        assert code == 0
        report = json.loads(out)
        assert report["results"]["bfunction"]["factored"] == "(s+2/3)(s+1)^2(s+4/3)"

    def test_generic_missing_k_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "bfunction", "--generic", "--n", "2")
        assert code == 2
        assert "error:" in err

    def test_isolated_missing_input_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "bfunction", "--isolated")
        assert code == 2
        assert "--input" in err

    def test_precondition_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "bfunction", "--generic", "--n", "1", "--k", "2")
        assert code == 3
        assert "precondition" in err

    def test_modes_are_exclusive(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["bfunction", "--generic", "--isolated", "--n", "2", "--k", "3"])
        assert exc.value.code == 2


class TestMilnorCommand:
    def test_profile(self, capsys, three_lines_file):
        code, out, _ = run_cli(capsys, "milnor", "--input", three_lines_file)
        assert code == 0
        report = json.loads(out)
        assert report["results"]["u"] == [1, 2, 1]

    def test_non_generic_exits_3_naming_subset(self, capsys, non_generic_file):
        code, _, err = run_cli(capsys, "milnor", "--input", non_generic_file)
        assert code == 3
        assert "{1, 2, 3}" in err

    def test_table_format(self, capsys, three_lines_file):
        code, out, _ = run_cli(
            capsys, "milnor", "--input", three_lines_file, "--format", "table"
        )
        assert code == 0
        assert "results" in out and "checks" in out
        assert "total-matches-lattice-count" in out


class TestVerifyCommand:
    def test_small_grid(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--grid", "n=2,k=3..4")
        assert code == 0
        report = json.loads(out)
        assert report["results"]["instances"] == [{"n": 2, "k": 3}, {"n": 2, "k": 4}]
        assert all(c["status"] != "fail" for c in report["checks"])

    def test_single_file(self, capsys, three_lines_file):
        code, out, _ = run_cli(capsys, "verify", "--input", three_lines_file)
        assert code == 0
        report = json.loads(out)
        names = {c["name"] for c in report["checks"]}
        assert "pair-derivation-annihilation" in names

    def test_grid_and_input_conflict(self, capsys, three_lines_file):
        code, _, err = run_cli(
            capsys, "verify", "--grid", "n=2,k=3", "--input", three_lines_file
        )
        assert code == 2
        assert "not both" in err

    def test_bad_grid(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--grid", "k=3")
        assert code == 2


class TestLengthCommand:
    def test_three_lines(self, capsys, three_lines_file):
        code, out, _ = run_cli(capsys, "length", "--input", three_lines_file)
        assert code == 0
        report = json.loads(out)
        assert report["results"]["length"] == 7
        assert report["results"]["inclusion_exclusion"] == [[1, 12], [2, 6], [3, 1]]


class TestRewriteCommand:
    def test_rewrite(self, capsys, three_lines_file):
        code, out, _ = run_cli(
            capsys,
            "rewrite",
            "--input",
            three_lines_file,
            "--product",
            "1,2",
            "--degree",
            "2",
        )
        assert code == 0
        report = json.loads(out)
        assert report["results"]["basis_coefficients"] == [
            {"monomial": [0, 1, 1], "coefficient": "-1"}
        ]

    def test_degree_mismatch(self, capsys, three_lines_file):
        code, _, err = run_cli(
            capsys,
            "rewrite",
            "--input",
            three_lines_file,
            "--product",
            "1,2",
            "--degree",
            "5",
        )
        assert code == 2

    def test_non_standard_product(self, capsys, three_lines_file):
        code, _, err = run_cli(
            capsys, "rewrite", "--input", three_lines_file, "--product", "1,1"
        )
        assert code == 3
        assert "standard" in err


class TestArgumentHandling:
    def test_missing_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as exc:
            main(["length", "--bogus"])
        assert exc.value.code == 2

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "length", "--input", str(tmp_path / "nope.json"))
        assert code == 2
        assert "cannot read" in err

    def test_invalid_json_file(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run_cli(capsys, "length", "--input", str(path))
        assert code == 2
        assert "not valid JSON" in err

    def test_non_object_json_file(self, capsys, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        code, _, err = run_cli(capsys, "length", "--input", str(path))
        assert code == 2
