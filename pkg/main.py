"""
弱稳定非交叉匹配 - 命令行入口

子命令：solve / check / enumerate / gen / loop / bench
退出码：0 成功或肯定结果，1 否定结果，2 输入错误，3 内部不变量被违反
"""

import argparse
import contextlib
import logging
import sys
from typing import List, Optional, Sequence

from benchmark import BenchRunner, summarize
from config import APP_NAME, APP_VERSION, CONFIG_FILE, AppConfig
from file_operations import (
    export_bench_to_excel,
    format_bench_tsv,
    format_matching,
    format_matching_set,
    format_trace_tsv,
    load_instance,
    load_matching,
    save_instance,
    save_text_file,
)
from instance import random_instance, serialize_instance, validate
from oracle import (
    PickSequence,
    enumerate_noncrossing_matchings,
    enumerate_wsnm,
    exists_ssnm,
    max_size_wsnm,
    run_arbitrary_order,
)
from solver import InvariantViolation, prepare, solve
from stability import (
    find_blocking_pairs,
    find_noncrossing_blocking_pairs,
    is_noncrossing,
    is_ssnm,
    is_wsnm,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2
EXIT_INVARIANT = 3

# 不变量被违反时，轨迹不超过这么多步才整段打印
MAX_TRACE_DUMP = 200


class CliContext:
    """一次命令行调用共享的配置与输出流"""

    def __init__(self, config: AppConfig, out, err):
        self.config = config
        self.out = out
        self.err = err

    def remember(self, path: str) -> None:
        self.config.add_recent_file(path)
        self.config.save_config()


def _load_checked_instance(ctx: CliContext, path: str, remember: bool):
    inst = load_instance(path)
    violations = validate(inst)
    if violations:
        raise ValueError("实例不合法: " + "; ".join(map(str, violations)))
    if remember:
        ctx.remember(path)
    return inst


def cmd_solve(ctx: CliContext, args: argparse.Namespace) -> int:
    inst = _load_checked_instance(ctx, args.instance, args.remember)
    record = bool(args.trace) or bool(ctx.config.get("record_trace", True))
    debug = args.debug_checks or bool(ctx.config.get("debug_checks", False))
    result = solve(inst, record_trace=record, debug_checks=debug)

    if args.trace:
        tsv = format_trace_tsv(result.trace, inst.n_men)
        if args.trace == "-":
            ctx.out.write(tsv)
        else:
            save_text_file(tsv, args.trace)
    ctx.out.write(format_matching(result.matching))
    if args.stats:
        for key, value in result.stats.as_dict().items():
            ctx.out.write(f"# {key}\t{value}\n")
    return EXIT_OK


def cmd_check(ctx: CliContext, args: argparse.Namespace) -> int:
    inst = _load_checked_instance(ctx, args.instance, args.remember)
    matching = load_matching(args.matching)
    matching.check_bounds(inst.n_men, inst.n_women)
    normalized, ranks = prepare(inst)

    if args.mode == "blockingpairs":
        pairs = find_blocking_pairs(normalized, ranks, matching)
        noncrossing = set(find_noncrossing_blocking_pairs(normalized, ranks, matching))
        for i, j in pairs:
            ctx.out.write(f"{i} {j}\t{'noncrossing' if (i, j) in noncrossing else 'crossing'}\n")
        return EXIT_OK if not pairs else EXIT_NEGATIVE

    if args.mode == "noncrossing":
        ok = is_noncrossing(matching)
    elif args.mode == "wsnm":
        ok = is_wsnm(normalized, ranks, matching)
    else:
        ok = is_ssnm(normalized, ranks, matching)
    ctx.out.write(f"{args.mode}\t{'yes' if ok else 'no'}\n")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_enumerate(ctx: CliContext, args: argparse.Namespace) -> int:
    inst = _load_checked_instance(ctx, args.instance, args.remember)
    max_side = int(ctx.config.get("oracle_max_side"))
    options = dict(max_side=max_side, allow_large=args.allow_large)

    if args.ssnm:
        found = exists_ssnm(inst, **options)
        if found is None:
            ctx.out.write("none\n")
            return EXIT_NEGATIVE
        ctx.out.write(format_matching_set(found) + "\n")
        return EXIT_OK
    if args.max_size:
        ctx.out.write(format_matching_set(max_size_wsnm(inst, **options)) + "\n")
        return EXIT_OK

    matchings = enumerate_wsnm(inst, **options) if args.wsnm else enumerate_noncrossing_matchings(inst, **options)
    for m in matchings:
        ctx.out.write(format_matching_set(m) + "\n")
    return EXIT_OK


def cmd_gen(ctx: CliContext, args: argparse.Namespace) -> int:
    inst = random_instance(args.men, args.women, args.density, args.seed)
    if args.output:
        save_instance(inst, args.output)
    else:
        ctx.out.write(serialize_instance(inst))
    return EXIT_OK


def _parse_picks(text: str) -> List[int]:
    try:
        return [int(token) for token in text.replace(",", " ").split()]
    except ValueError:
        raise ValueError(f"挑选顺序应为逗号分隔的整数: '{text}'")


def cmd_loop(ctx: CliContext, args: argparse.Namespace) -> int:
    inst = _load_checked_instance(ctx, args.instance, args.remember)
    if args.picks:
        picks = PickSequence.cyclic(_parse_picks(args.picks), args.max_steps)
    else:
        picks = PickSequence.topmost_unstable(args.max_steps)
    result = run_arbitrary_order(inst, picks)
    for m in result.matchings:
        ctx.out.write(format_matching_set(m) + "\n")
    status = "terminated" if result.terminated else "not terminated"
    ctx.out.write(f"# {status}\tsteps {result.steps_used}\n")
    return EXIT_OK if result.terminated else EXIT_NEGATIVE


def cmd_bench(ctx: CliContext, args: argparse.Namespace) -> int:
    config = ctx.config

    def pick(value, key):
        return config.bench_default(key) if value is None else value

    runner = BenchRunner(jobs=pick(args.jobs, "jobs"))
    records = runner.run(
        min_n=pick(args.min, "min"),
        max_n=pick(args.max, "max"),
        factor=pick(args.factor, "factor"),
        reps=pick(args.reps, "reps"),
        seed=pick(args.seed, "seed"),
        density=pick(args.density, "density"),
    )
    summary = summarize(records)
    ctx.out.write(format_bench_tsv(records, summary.slope))
    if summary.slope is not None:
        log.info("中位耗时对 n 的对数斜率: %.3f", summary.slope)
    if args.xlsx:
        export_bench_to_excel(records, summary, args.xlsx)

    over = [r for r in records if not r.within_bound]
    if over:
        ctx.err.write(f"{len(over)} 次运行的扫描次数超过上界\n")
        return EXIT_INVARIANT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=APP_NAME, description="弱稳定非交叉匹配求解与校验工具")
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument("--config", default=CONFIG_FILE, help="配置文件路径")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="输出更多日志")
    parser.add_argument("--remember", action="store_true", help="把实例文件记入最近使用列表")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="求一个 WSNM")
    p.add_argument("instance")
    p.add_argument("--trace", metavar="FILE", help="写出轨迹TSV，'-' 表示标准输出")
    p.add_argument("--stats", action="store_true", help="输出扫描统计")
    p.add_argument("--debug-checks", action="store_true", help="每次越过男性时穷举检查其稳定性")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("check", help="校验给定匹配")
    p.add_argument("instance")
    p.add_argument("matching")
    p.add_argument("--mode", choices=("noncrossing", "wsnm", "ssnm", "blockingpairs"), default="wsnm")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("enumerate", help="穷举小规模实例")
    p.add_argument("instance")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--wsnm", action="store_true", help="列出所有 WSNM")
    group.add_argument("--ssnm", action="store_true", help="找一个 SSNM，不存在时输出 none")
    group.add_argument("--max-size", action="store_true", help="规模最大的 WSNM")
    p.add_argument("--allow-large", action="store_true", help="忽略穷举规模上限")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("gen", help="生成随机实例")
    p.add_argument("--men", type=int, required=True)
    p.add_argument("--women", type=int, required=True)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", metavar="FILE", help="写入文件而不是标准输出")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("loop", help="按任意顺序挑选男性执行求婚")
    p.add_argument("instance")
    p.add_argument("--picks", help="循环使用的挑选顺序，例如 1,2,2,1；省略时总挑最上方的不稳定男性")
    p.add_argument("--max-steps", type=int, default=100)
    p.set_defaults(handler=cmd_loop)

    p = sub.add_parser("bench", help="规模扩展基准测试")
    p.add_argument("--min", type=int)
    p.add_argument("--max", type=int)
    p.add_argument("--factor", type=float)
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--density", type=float)
    p.add_argument("--jobs", type=int)
    p.add_argument("--xlsx", metavar="FILE", help="同时导出Excel")
    p.set_defaults(handler=cmd_bench)

    return parser


def _setup_logging(config: AppConfig, verbose: int) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, str(config.get("log_level", "WARNING")).upper(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 对 --help/--version 返回 0，对用法错误返回 2
        return int(e.code or 0)

    config = AppConfig(args.config)
    _setup_logging(config, args.verbose)
    ctx = CliContext(config, out, err)

    try:
        return args.handler(ctx, args)
    except InvariantViolation as e:
        err.write(f"内部不变量被违反: {e}\n")
        if len(e.trace) <= MAX_TRACE_DUMP:
            err.write(format_trace_tsv(e.trace, e.stats.n_men if e.stats else 0))
        return EXIT_INVARIANT
    except (ValueError, OSError) as e:
        err.write(f"错误: {e}\n")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
