"""
基准测试与结果导出测试
"""

import openpyxl
import pytest

import benchmark
from benchmark import BenchRecord, BenchRunner, bench_sizes, run_single, summarize
from file_operations import BENCH_COLUMNS, export_bench_to_excel, format_bench_tsv
from solver import scan_bound


def test_bench_sizes():
    assert bench_sizes(100, 1600, 2) == [100, 200, 400, 800, 1600]
    assert bench_sizes(1, 5, 1.5) == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        bench_sizes(10, 5, 2)
    with pytest.raises(ValueError):
        bench_sizes(1, 5, 1)


def test_run_single_within_bound():
    record = run_single(30, 0.7, 4)
    assert record.n_men == record.n_women == 30
    assert record.within_bound
    assert record.scan_count <= scan_bound(30, 30)
    assert record.wall_time_ns > 0


def test_runner_is_reproducible_across_jobs():
    first = BenchRunner(jobs=1).run(min_n=5, max_n=20, factor=2, reps=3, seed=7)
    second = BenchRunner(jobs=3).run(min_n=5, max_n=20, factor=2, reps=3, seed=7)
    assert [r.n_men for r in first] == [5, 5, 5, 10, 10, 10, 20, 20, 20]
    strip = [(r.n_men, r.seed, r.scan_count, r.proposal_count) for r in first]
    assert strip == [(r.n_men, r.seed, r.scan_count, r.proposal_count) for r in second]


def test_runner_stops_workers_on_failure(monkeypatch):
    original = benchmark.run_single

    def failing(n, density, seed):
        if n == 8:
            raise RuntimeError("模拟失败")
        return original(n, density, seed)

    monkeypatch.setattr(benchmark, "run_single", failing)
    runner = BenchRunner(jobs=3)
    with pytest.raises(RuntimeError):
        runner.run(min_n=4, max_n=64, factor=2, reps=4, seed=0)
    assert runner.task_queue.empty()
    assert not any(worker.is_alive() for worker in runner.workers)


def test_runner_joins_workers_on_success():
    runner = BenchRunner(jobs=2)
    runner.run(min_n=4, max_n=8, factor=2, reps=2, seed=0)
    assert len(runner.workers) == 2
    assert not any(worker.is_alive() for worker in runner.workers)


def test_runner_rejects_bad_reps():
    with pytest.raises(ValueError):
        BenchRunner().run(min_n=4, max_n=8, factor=2, reps=0, seed=0)


def _record(n, wall, scans=1):
    return BenchRecord(n, n, 1.0, 0, scans, 1, wall)


def test_summarize_quadratic_slope():
    records = [_record(n, n * n * 1000) for n in (10, 20, 40, 80)]
    summary = summarize(records)
    assert summary.slope == pytest.approx(2.0)
    assert summary.rows[0] == (10, 100000, 1, scan_bound(10, 10))


def test_summarize_uses_median():
    summary = summarize([_record(10, 5), _record(10, 1), _record(10, 9)])
    assert summary.rows == [(10, 5, 1, scan_bound(10, 10))]
    assert summary.slope is None
    assert summarize([]).slope is None


def test_format_bench_tsv():
    text = format_bench_tsv([_record(3, 42)], slope=1.98766)
    lines = text.splitlines()
    assert lines[0] == "\t".join(BENCH_COLUMNS)
    assert lines[1] == "3\t3\t1.0\t0\t1\t1\t42"
    assert lines[2] == "# slope\t1.9877"


def test_export_bench_to_excel(tmp_path):
    records = [_record(n, n * n) for n in (4, 8)]
    path = str(tmp_path / "bench.xlsx")
    export_bench_to_excel(records, summarize(records), path)

    workbook = openpyxl.load_workbook(path)
    assert workbook.sheetnames == ["Records", "Summary"]
    sheet = workbook["Records"]
    assert [c.value for c in sheet[1]] == list(BENCH_COLUMNS)
    assert sheet.cell(row=3, column=1).value == 8
    summary = workbook["Summary"]
    assert summary.cell(row=2, column=4).value == scan_bound(4, 4)
    assert summary.cell(row=5, column=1).value == "loglog_slope"
    assert summary.cell(row=5, column=2).value == pytest.approx(2.0)


@pytest.mark.slow
def test_scan_count_stays_quadratic():
    records = BenchRunner(jobs=2).run(min_n=50, max_n=400, factor=2, reps=3, seed=0)
    assert all(r.within_bound for r in records)
    summary = summarize(records)
    assert summary.rows[-1][2] <= scan_bound(400, 400)


@pytest.mark.slow
def test_default_scaling_run():
    # 默认规模 100..1600，每个规模 5 次
    records = BenchRunner().run(min_n=100, max_n=1600, factor=2, reps=5, seed=0)
    assert sorted({r.n_men for r in records}) == [100, 200, 400, 800, 1600]
    assert all(r.within_bound for r in records)
    summary = summarize(records)
    assert summary.slope is not None
    assert summary.slope <= 2.4
