"""
文件操作模块
负责实例、匹配、轨迹和基准测试结果的读写与格式化
"""

import logging
from typing import TYPE_CHECKING, Iterable, List, Optional

import xlsxwriter

from instance import Instance, parse_instance, serialize_instance
from solver import Trace, TraceEvent
from stability import Matching

if TYPE_CHECKING:
    from benchmark import BenchRecord, BenchSummary

log = logging.getLogger(__name__)

BENCH_COLUMNS = ("n_men", "n_women", "density", "seed", "scan_count", "proposal_count", "wall_time_ns")
TRACE_COLUMNS = ("step", "process", "M", "S")


def load_text_file(file_path: str) -> str:
    """加载文本文件"""
    with open(file_path, 'r', encoding='utf-8') as f:
        return f.read()


def save_text_file(content: str, file_path: str) -> None:
    """保存文本文件"""
    with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(content)


def load_instance(file_path: str) -> Instance:
    """读取并解析实例文件"""
    return parse_instance(load_text_file(file_path))


def save_instance(inst: Instance, file_path: str) -> None:
    save_text_file(serialize_instance(inst), file_path)


def parse_matching(text: str) -> Matching:
    """解析匹配文本，每行一个 'i j'，忽略空行和 # 注释

    Raises:
        ValueError: 某行不是两个整数，或有人出现在两个匹配对中
    """
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"第 {lineno} 行: '{line}' 应为两个整数")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValueError(f"第 {lineno} 行: '{line}' 含非数字内容")
    return Matching.from_pairs(pairs)


def load_matching(file_path: str) -> Matching:
    return parse_matching(load_text_file(file_path))


def format_matching(m: Matching) -> str:
    """每行一个 'i j'，按男性下标升序"""
    return "".join(f"{i} {j}\n" for i, j in m.pairs)


def format_matching_set(m: Matching) -> str:
    """集合形式，例如 {(2,1),(3,2)}，空匹配为 {}"""
    return "{" + ",".join(f"({i},{j})" for i, j in m.pairs) + "}"


def format_remaining(top: int, n_men: int) -> str:
    """S = {m_top, ..., m_n} 的文本形式"""
    if top > n_men:
        return "{}"
    if top == n_men:
        return f"{{m{top}}}"
    return f"{{m{top}..m{n_men}}}"


def describe_event(event: TraceEvent) -> str:
    """一步的处理过程，例如 'scan m2, add (m2,w3), remove (m1,w3)'"""
    parts = [f"scan m{event.man}"]
    if event.is_proposal:
        parts.append(f"add (m{event.man},w{event.woman})")
        removed = []
        if event.man_dumped is not None:
            removed.append((event.man, event.man_dumped))
        if event.woman_dumped is not None:
            removed.append((event.woman_dumped, event.woman))
        parts.extend(f"remove (m{i},w{j})" for i, j in sorted(removed))
    return ", ".join(parts)


def format_trace_tsv(trace: Trace, n_men: int) -> str:
    """轨迹TSV：表头加每步一行"""
    lines = ["\t".join(TRACE_COLUMNS)]
    for event in trace:
        snapshot = format_matching_set(event.matching) if event.matching is not None else ""
        lines.append("\t".join((str(event.step), describe_event(event), snapshot,
                                format_remaining(event.top, n_men))))
    return "\n".join(lines) + "\n"


def format_bench_tsv(records: Iterable["BenchRecord"], slope: Optional[float] = None) -> str:
    """基准测试TSV；给出斜率时在末尾追加一行注释"""
    lines = ["\t".join(BENCH_COLUMNS)]
    for r in records:
        lines.append("\t".join(str(getattr(r, column)) for column in BENCH_COLUMNS))
    if slope is not None:
        lines.append(f"# slope\t{slope:.4f}")
    return "\n".join(lines) + "\n"


def export_bench_to_excel(records: List["BenchRecord"], summary: "BenchSummary", file_path: str) -> None:
    """导出基准测试结果到Excel

    第一个工作表为原始记录，第二个工作表为按规模汇总的中位数以及对数斜率。

    Args:
        records: 每次运行的记录
        summary: 汇总结果
        file_path: 保存路径
    """
    workbook = xlsxwriter.Workbook(file_path)
    try:
        header_format = workbook.add_format({'border': 1, 'bold': True, 'align': 'center'})
        cell_format = workbook.add_format({'border': 1})
        over_format = workbook.add_format({'border': 1, 'bg_color': '#FFDDDD'})  # 超出上界标红

        sheet = workbook.add_worksheet("Records")
        for col, name in enumerate(BENCH_COLUMNS):
            sheet.write(0, col, name, header_format)
        for row, record in enumerate(records, 1):
            fmt = cell_format if record.within_bound else over_format
            for col, name in enumerate(BENCH_COLUMNS):
                sheet.write(row, col, getattr(record, name), fmt)
        sheet.set_column(0, len(BENCH_COLUMNS) - 1, 15)

        summary_sheet = workbook.add_worksheet("Summary")
        headers = ("n", "median_wall_time_ns", "median_scan_count", "scan_bound")
        for col, name in enumerate(headers):
            summary_sheet.write(0, col, name, header_format)
        for row, (n, wall, scans, bound) in enumerate(summary.rows, 1):
            for col, value in enumerate((n, wall, scans, bound)):
                summary_sheet.write(row, col, value, cell_format)
        last = len(summary.rows) + 2
        summary_sheet.write(last, 0, "loglog_slope", header_format)
        summary_sheet.write(last, 1, summary.slope if summary.slope is not None else "", cell_format)
        summary_sheet.set_column(0, len(headers) - 1, 20)
    finally:
        workbook.close()
    log.info("基准测试结果已导出到 %s", file_path)
