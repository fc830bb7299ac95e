"""
基准测试模块
在不同规模的随机方形实例上运行求解器，记录扫描次数和耗时，检验二次复杂度
"""

import logging
import math
import queue
import random
import threading
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from instance import random_instance
from solver import scan_bound, solve

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchRecord:
    """一次运行的记录"""

    n_men: int
    n_women: int
    density: float
    seed: int
    scan_count: int
    proposal_count: int
    wall_time_ns: int

    @property
    def within_bound(self) -> bool:
        return self.scan_count <= scan_bound(self.n_men, self.n_women)


@dataclass
class BenchSummary:
    """按规模汇总：(n, 耗时中位数, 扫描次数中位数, 扫描上界)，以及耗时对 n 的对数斜率"""

    rows: List[Tuple[int, int, int, int]]
    slope: Optional[float]


def bench_sizes(min_n: int, max_n: int, factor: float) -> List[int]:
    """从 min_n 开始按 factor 倍增，不超过 max_n"""
    if min_n < 1 or max_n < min_n:
        raise ValueError(f"规模范围不合法: [{min_n}, {max_n}]")
    if factor <= 1:
        raise ValueError(f"增长倍数必须大于 1: {factor}")
    sizes = []
    n = min_n
    while n <= max_n:
        sizes.append(n)
        n = max(n + 1, int(math.floor(n * factor)))
    return sizes


def run_single(n: int, density: float, seed: int) -> BenchRecord:
    """生成一个 n×n 实例并计时求解（不记录轨迹）"""
    inst = random_instance(n, n, density, seed)
    start = time.perf_counter_ns()
    result = solve(inst, record_trace=False)
    elapsed = time.perf_counter_ns() - start
    stats = result.stats
    return BenchRecord(n, n, density, seed, stats.scan_count, stats.proposal_count, elapsed)


class BenchRunner:
    """基准测试运行器，可用多个工作线程并行跑重复实验，输出顺序与线程数无关"""

    def __init__(self, jobs: int = 1):
        """初始化运行器

        Args:
            jobs: 工作线程数
        """
        self.jobs = max(1, jobs)
        self.task_queue: "queue.Queue[Optional[Tuple[int, int, float, int]]]" = queue.Queue()
        self.result_queue: "queue.Queue[Tuple[str, int, object]]" = queue.Queue()
        self.workers: List[threading.Thread] = []

    def _worker(self) -> None:
        """工作线程：从任务队列取任务，结果放入结果队列"""
        while True:
            task = self.task_queue.get()
            if task is None:
                break
            order, n, density, seed = task
            try:
                self.result_queue.put(("success", order, run_single(n, density, seed)))
            except Exception as e:  # 交给主线程处理
                self.result_queue.put(("error", order, e))

    def _stop_workers(self) -> None:
        """丢弃尚未开始的任务，通知所有工作线程退出并等待它们结束"""
        while True:
            try:
                self.task_queue.get_nowait()
            except queue.Empty:
                break
        for _ in self.workers:
            self.task_queue.put(None)
        for worker in self.workers:
            worker.join()

    def run(self, min_n: int, max_n: int, factor: float, reps: int, seed: int,
            density: float = 1.0) -> List[BenchRecord]:
        """按规模和重复次数运行全部实验

        Returns:
            按 (规模, 重复序号) 排序的记录

        Raises:
            任一次运行抛出的异常；此时其余工作线程已全部退出
        """
        if reps < 1:
            raise ValueError(f"重复次数必须为正: {reps}")
        if not 0.0 <= density <= 1.0:
            raise ValueError(f"density 必须在 [0, 1] 之间: {density}")

        rng = random.Random(seed)
        tasks = []
        for n in bench_sizes(min_n, max_n, factor):
            for _ in range(reps):
                tasks.append((len(tasks), n, density, rng.randrange(2 ** 31)))

        self.workers = [threading.Thread(target=self._worker, name=f"bench-worker-{k}", daemon=True)
                        for k in range(self.jobs)]
        for task in tasks:
            self.task_queue.put(task)
        for worker in self.workers:
            worker.start()

        results: List[Optional[BenchRecord]] = [None] * len(tasks)
        for _ in tasks:
            status, order, payload = self.result_queue.get()
            if status == "error":
                log.error("第 %d 个任务失败: %s", order, payload)
                self._stop_workers()
                raise payload  # type: ignore[misc]
            results[order] = payload  # type: ignore[assignment]
            log.info("n=%d seed=%d: 扫描 %d 次, 耗时 %.3f ms", payload.n_men, payload.seed,
                     payload.scan_count, payload.wall_time_ns / 1e6)
        self._stop_workers()

        return [r for r in results if r is not None]


def summarize(records: List[BenchRecord]) -> BenchSummary:
    """按规模取中位数，并用最小二乘拟合 log(耗时) 对 log(n) 的斜率"""
    if not records:
        return BenchSummary([], None)
    df = pd.DataFrame([r.__dict__ for r in records])
    grouped = df.groupby("n_men").agg(
        wall_time_ns=("wall_time_ns", "median"),
        scan_count=("scan_count", "median"),
    ).sort_index()

    rows = [(int(n), int(row.wall_time_ns), int(row.scan_count), scan_bound(int(n), int(n)))
            for n, row in grouped.iterrows()]

    slope = None
    if len(grouped) >= 2:
        x = np.log(grouped.index.to_numpy(dtype=float))
        y = np.log(np.maximum(grouped["wall_time_ns"].to_numpy(dtype=float), 1.0))
        slope = float(np.polyfit(x, y, 1)[0])
    return BenchSummary(rows, slope)
