"""
命令行测试：输出格式与退出码
"""

import io
import json

import pytest

from config import APP_NAME, APP_VERSION
from conftest import data_path
from file_operations import load_instance
from instance import random_instance
from main import EXIT_INPUT_ERROR, EXIT_INVARIANT, EXIT_NEGATIVE, EXIT_OK, main


@pytest.fixture
def run(tmp_path):
    config_file = str(tmp_path / "config.json")

    def invoke(*argv):
        out, err = io.StringIO(), io.StringIO()
        code = main(["--config", config_file, *argv], out=out, err=err)
        return code, out.getvalue(), err.getvalue()

    invoke.config_file = config_file
    return invoke


def test_solve(run):
    code, out, _ = run("solve", data_path("example1.txt"))
    assert code == EXIT_OK
    assert out == "2 1\n3 2\n"


def test_solve_trace_and_stats(run, tmp_path):
    trace_file = tmp_path / "trace.tsv"
    code, out, _ = run("solve", data_path("example1.txt"), "--trace", str(trace_file), "--stats")
    assert code == EXIT_OK
    lines = trace_file.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "step\tprocess\tM\tS"
    assert len(lines) == 10
    assert "# scan_count\t9\n" in out
    assert "# proposal_count\t6\n" in out


def test_solve_trace_to_stdout(run):
    code, out, _ = run("solve", data_path("no_ssnm.txt"), "--trace", "-")
    assert code == EXIT_OK
    assert out.startswith("step\tprocess\tM\tS\n1\tscan m1, add (m1,w2)\t{(1,2)}\t{m2}\n")
    assert out.endswith("1 2\n")


def test_solve_missing_file(run, tmp_path):
    code, _, err = run("solve", str(tmp_path / "missing.txt"))
    assert code == EXIT_INPUT_ERROR
    assert err


def test_solve_bad_line_number(run, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2 2\n1 2\nx\n1\n2\n", encoding="utf-8")
    code, _, err = run("solve", str(path))
    assert code == EXIT_INPUT_ERROR
    assert "第 3 行" in err


def test_solve_invalid_instance(run, tmp_path):
    path = tmp_path / "dup.txt"
    path.write_text("1 1\n1 1\n1\n", encoding="utf-8")
    code, _, err = run("solve", str(path))
    assert code == EXIT_INPUT_ERROR
    assert "duplicate" in err


def test_solve_invariant_exit_code(run, monkeypatch):
    import solver

    monkeypatch.setattr(solver, "scan_bound", lambda n_men, n_women: 1)
    code, _, err = run("solve", data_path("example1.txt"))
    assert code == EXIT_INVARIANT
    assert "step-bound" in err
    assert "step\tprocess\tM\tS" in err


@pytest.mark.parametrize("pairs,mode,expected_code,expected_out", [
    ("1 2\n", "wsnm", EXIT_OK, "wsnm\tyes\n"),
    ("1 2\n", "ssnm", EXIT_NEGATIVE, "ssnm\tno\n"),
    ("1 2\n2 1\n", "noncrossing", EXIT_NEGATIVE, "noncrossing\tno\n"),
    ("1 2\n2 1\n", "blockingpairs", EXIT_OK, ""),
    ("1 2\n", "blockingpairs", EXIT_NEGATIVE, "2 1\tcrossing\n"),
    ("", "blockingpairs", EXIT_NEGATIVE, "1 1\tnoncrossing\n1 2\tnoncrossing\n2 1\tnoncrossing\n2 2\tnoncrossing\n"),
])
def test_check(run, tmp_path, pairs, mode, expected_code, expected_out):
    matching = tmp_path / "m.txt"
    matching.write_text(pairs, encoding="utf-8")
    code, out, _ = run("check", data_path("no_ssnm.txt"), str(matching), "--mode", mode)
    assert code == expected_code
    assert out == expected_out


def test_check_out_of_range_matching(run, tmp_path):
    matching = tmp_path / "m.txt"
    matching.write_text("3 1\n", encoding="utf-8")
    code, _, _ = run("check", data_path("no_ssnm.txt"), str(matching))
    assert code == EXIT_INPUT_ERROR


def test_enumerate(run):
    code, out, _ = run("enumerate", data_path("no_ssnm.txt"), "--wsnm")
    assert code == EXIT_OK
    assert out == "{(1,2)}\n{(2,1)}\n"

    code, out, _ = run("enumerate", data_path("no_ssnm.txt"))
    assert out.splitlines()[0] == "{}"
    assert len(out.splitlines()) == 6

    code, out, _ = run("enumerate", data_path("no_ssnm.txt"), "--ssnm")
    assert code == EXIT_NEGATIVE
    assert out == "none\n"

    code, out, _ = run("enumerate", data_path("two_sizes.txt"), "--max-size")
    assert code == EXIT_OK
    assert out == "{(2,1),(3,2)}\n"


def test_enumerate_size_guard(run, tmp_path):
    code, out, _ = run("gen", "--men", "11", "--women", "2", "--density", "0.5", "--seed", "3")
    path = tmp_path / "large.txt"
    path.write_text(out, encoding="utf-8")
    code, _, err = run("enumerate", str(path))
    assert code == EXIT_INPUT_ERROR
    assert "allow" in err
    code, _, _ = run("enumerate", str(path), "--wsnm", "--allow-large")
    assert code == EXIT_OK


def test_gen_is_reproducible(run):
    first = run("gen", "--men", "4", "--women", "3", "--density", "0.7", "--seed", "9")
    second = run("gen", "--men", "4", "--women", "3", "--density", "0.7", "--seed", "9")
    assert first == second
    assert first[1].startswith("4 3\n")


def test_loop(run):
    code, out, _ = run("loop", data_path("loop_demo.txt"), "--picks", "1,2,2,1", "--max-steps", "4")
    assert code == EXIT_NEGATIVE
    assert out == ("{(1,2)}\n{(2,2)}\n{(2,1)}\n{(1,1)}\n"
                   "# not terminated\tsteps 4\n")

    code, out, _ = run("loop", data_path("loop_demo.txt"))
    assert code == EXIT_OK
    assert out.endswith("# terminated\tsteps 3\n")


def test_bench(run, tmp_path):
    xlsx = tmp_path / "bench.xlsx"
    code, out, _ = run("bench", "--min", "4", "--max", "16", "--factor", "2", "--reps", "2",
                       "--seed", "1", "--xlsx", str(xlsx))
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].split("\t")[0] == "n_men"
    assert len([line for line in lines[1:] if not line.startswith("#")]) == 6
    assert lines[-1].startswith("# slope\t")
    assert xlsx.exists()


def test_remember_records_recent_file(run):
    run("--remember", "solve", data_path("example1.txt"))
    with open(run.config_file, encoding="utf-8") as f:
        saved = json.load(f)
    assert saved["recent_files"][0] == data_path("example1.txt")


def test_gen_output_file_roundtrip(run, tmp_path):
    path = tmp_path / "gen.txt"
    code, out, _ = run("gen", "--men", "5", "--women", "4", "--density", "0.6", "--seed", "2",
                       "-o", str(path))
    assert code == EXIT_OK
    assert out == ""
    assert load_instance(str(path)) == random_instance(5, 4, 0.6, 2)
    code, out, _ = run("solve", str(path))
    assert code == EXIT_OK


def test_help_and_version_use_given_streams(run):
    code, out, _ = run("--version")
    assert code == EXIT_OK
    assert out.strip() == f"{APP_NAME} {APP_VERSION}"

    code, out, _ = run("solve", "--help")
    assert code == EXIT_OK
    assert "--debug-checks" in out


def test_usage_error_goes_to_given_stream(run):
    code, out, err = run("solve")
    assert code == EXIT_INPUT_ERROR
    assert out == ""
    assert "usage" in err
