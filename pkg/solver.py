"""
求解模块
按“最上方可能不稳定男性”扫描的方式求弱稳定非交叉匹配（WSNM），记录完整轨迹和统计

集合 S = {m_t, ..., m_n1} 只用最上方的下标 t 表示。每一步扫描 m_t，按以下三种情况处理：
    skip        没有可选女性，或最优可选女性就是现任，跳过（向下跳）；
    take-first  m_prev 存在且最优为 w_first，抢走 m_prev 的伴侣，向上跳到 m_prev；
    propose     其余情况，求婚后向下跳。
向下换人以及在 m_next 存在时向 w_last 求婚都不可能出现，出现即视为实现错误。
"""

import logging
from bisect import bisect_left, insort
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Tuple

import rmq
from instance import UNRANKED, Instance, RankTable, normalize_mutual, rank_tables, validate
from stability import Matching, crosses, is_noncrossing, is_wsnm

log = logging.getLogger(__name__)


class EventKind(Enum):
    SCAN = "scan"
    SKIP = "skip"
    PROPOSE = "propose"
    JUMP_UP = "jump_up"
    JUMP_DOWN = "jump_down"


class InvariantViolation(RuntimeError):
    """求解过程中出现了理论上不可能的情况，说明实现有错误

    Attributes:
        rule: 被违反的规则（downward-switch, propose-w-last, step-bound, prefix-stability）
        trace: 出错前的完整轨迹
        stats: 出错时的统计
    """

    def __init__(self, rule: str, message: str, trace: Optional[List["TraceEvent"]] = None,
                 stats: Optional["SolverStats"] = None):
        super().__init__(f"[{rule}] {message}")
        self.rule = rule
        self.trace = trace if trace is not None else []
        self.stats = stats


@dataclass(frozen=True)
class TraceEvent:
    """一次扫描的记录"""

    step: int
    kinds: Tuple[EventKind, ...]
    man: int
    woman: Optional[int] = None          # 求婚对象
    man_dumped: Optional[int] = None     # 男方抛弃的原伴侣（女性下标）
    woman_dumped: Optional[int] = None   # 女方抛弃的原伴侣（男性下标）
    matching: Optional[Matching] = None  # 本步结束时的匹配
    top: int = 0                         # 本步结束时 S 的最上方下标
    case: str = "skip"

    @property
    def is_proposal(self) -> bool:
        return EventKind.PROPOSE in self.kinds

    @property
    def jump(self) -> EventKind:
        return EventKind.JUMP_UP if EventKind.JUMP_UP in self.kinds else EventKind.JUMP_DOWN


Trace = List[TraceEvent]


@dataclass
class SolverStats:
    """扫描统计；upward_by_woman[j] 为与 w_j 相关的向上跳跃大小之和"""

    n_men: int
    n_women: int
    scan_count: int = 0
    skip_count: int = 0
    proposal_count: int = 0
    upward_jump_count: int = 0
    upward_jump_size_sum: int = 0
    downward_jump_count: int = 0
    upward_by_woman: List[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.upward_by_woman:
            self.upward_by_woman = [0] * (self.n_women + 1)

    @property
    def scan_bound(self) -> int:
        return scan_bound(self.n_men, self.n_women)

    def as_dict(self) -> Dict[str, int]:
        return {
            "scan_count": self.scan_count,
            "skip_count": self.skip_count,
            "proposal_count": self.proposal_count,
            "upward_jump_count": self.upward_jump_count,
            "upward_jump_size_sum": self.upward_jump_size_sum,
            "downward_jump_count": self.downward_jump_count,
            "max_upward_per_woman": max(self.upward_by_woman, default=0),
        }


def scan_bound(n_men: int, n_women: int) -> int:
    """扫描次数的上界 2·n1·n2 + n1 + n2"""
    return 2 * n_men * n_women + n_men + n_women


@dataclass(frozen=True)
class ScanContext:
    """扫描 m_i 时的可达窗口；lo > hi 表示没有可选女性"""

    m_prev: Optional[int]
    m_next: Optional[int]
    w_first: int
    w_last: int
    lo: int
    hi: int

    @property
    def empty(self) -> bool:
        return self.lo > self.hi


class SolverState:
    """一次求解独占的可变状态"""

    def __init__(self, inst: Instance, ranks: RankTable):
        self.inst = inst
        self.ranks = ranks
        self.n_men = inst.n_men
        self.n_women = inst.n_women
        # 0 表示未匹配
        self.man_partner = [0] * (self.n_men + 1)
        self.woman_partner = [0] * (self.n_women + 1)
        self.matched_men: List[int] = []
        self.top = 1
        self.stats = SolverStats(self.n_men, self.n_women)
        # 没有女性时窗口恒为空，不需要建表
        self.rmq_rows: List[Optional[rmq.RangeArgmin]] = [None] * (self.n_men + 1)
        if self.n_women:
            for i in range(1, self.n_men + 1):
                self.rmq_rows[i] = rmq.build(ranks.men_row(i))

    @property
    def matching(self) -> Matching:
        return Matching({i: self.man_partner[i] for i in self.matched_men})

    @property
    def finished(self) -> bool:
        return self.top > self.n_men

    def is_available(self, w: int, i: int) -> bool:
        """w 是否愿意接受 m_i（不考虑是否可达）"""
        if not 1 <= w <= self.n_women:
            return False
        row = self.ranks.women_rank[w]
        if row[i] == UNRANKED:
            return False
        partner = self.woman_partner[w]
        return partner == 0 or partner == i or row[i] < row[partner]

    def apply_proposal(self, i: int, j: int) -> Tuple[Optional[int], Optional[int]]:
        """m_i 抛弃现任并向 w_j 求婚，w_j 抛弃现任并接受

        Returns:
            (男方抛弃的女性, 女方抛弃的男性)，没有则为 None
        """
        old_w = self.man_partner[i]
        old_m = self.woman_partner[j]
        if old_w:
            self.woman_partner[old_w] = 0
        if old_m:
            self.man_partner[old_m] = 0
            del self.matched_men[bisect_left(self.matched_men, old_m)]
        self.man_partner[i] = j
        self.woman_partner[j] = i
        if not old_w:
            insort(self.matched_men, i)
        self.stats.proposal_count += 1
        return old_w or None, old_m or None


def scan_context(state: SolverState, i: int) -> ScanContext:
    """计算 m_prev、m_next、w_first、w_last 以及可选女性区间 [lo, hi]"""
    matched = state.matched_men
    pos = bisect_left(matched, i)
    m_prev = matched[pos - 1] if pos > 0 else None
    if pos < len(matched) and matched[pos] == i:
        pos += 1
    m_next = matched[pos] if pos < len(matched) else None

    w_first = state.man_partner[m_prev] if m_prev is not None else 1
    w_last = state.man_partner[m_next] if m_next is not None else state.n_women

    lo = w_first if state.is_available(w_first, i) else w_first + 1
    hi = w_last if state.is_available(w_last, i) else w_last - 1
    return ScanContext(m_prev, m_next, w_first, w_last, lo, hi)


def best_available(state: SolverState, i: int, ctx: ScanContext) -> Optional[int]:
    """m_i 在窗口内最喜欢的女性；窗口为空或全部未列出时为 None"""
    if ctx.empty:
        return None
    j = rmq.query_argmin(state.rmq_rows[i], ctx.lo, ctx.hi)
    if state.ranks.men_rank[i, j] == UNRANKED:
        return None
    return j


def is_man_stable(state: SolverState, i: int) -> bool:
    """穷举检查 m_i 是否稳定：现任之前的每个条目都不可达或不可用"""
    pairs = [(a, state.man_partner[a]) for a in state.matched_men]
    current = state.man_partner[i]
    for w in state.inst.man_prefs(i):
        if w == current:
            return True
        accessible = not any(a != i and b != w and crosses((i, w), (a, b)) for a, b in pairs)
        if accessible and state.is_available(w, i):
            return False
    return True


def step(state: SolverState, record_snapshot: bool = True) -> TraceEvent:
    """扫描 S 中最上方的男性并执行相应情况

    Raises:
        InvariantViolation: 男性试图向下换人，或在 m_next 存在时向 w_last 求婚
    """
    i = state.top
    if i > state.n_men:
        raise ValueError("S 已为空，不能继续扫描")

    stats = state.stats
    stats.scan_count += 1
    ctx = scan_context(state, i)
    j = best_available(state, i, ctx)
    current = state.man_partner[i] or None

    man_dumped = woman_dumped = None
    if j is None or j == current:
        case = "skip"
        kinds = (EventKind.SCAN, EventKind.SKIP, EventKind.JUMP_DOWN)
        stats.skip_count += 1
        stats.downward_jump_count += 1
        state.top = i + 1
    elif ctx.m_prev is not None and j == ctx.w_first:
        case = "take-first"
        kinds = (EventKind.SCAN, EventKind.PROPOSE, EventKind.JUMP_UP)
        man_dumped, woman_dumped = state.apply_proposal(i, j)
        size = i - ctx.m_prev
        stats.upward_jump_count += 1
        stats.upward_jump_size_sum += size
        stats.upward_by_woman[j] += size
        state.top = ctx.m_prev
    else:
        if current is not None and j > current:
            raise InvariantViolation(
                "downward-switch", f"m{i} 试图从 w{current} 向下换到 w{j}", stats=stats)
        if ctx.m_next is not None and j == ctx.w_last:
            raise InvariantViolation(
                "propose-w-last", f"m{i} 试图向 w_last = w{j} 求婚，而 m_next = m{ctx.m_next} 存在", stats=stats)
        case = "propose"
        kinds = (EventKind.SCAN, EventKind.PROPOSE, EventKind.JUMP_DOWN)
        man_dumped, woman_dumped = state.apply_proposal(i, j)
        stats.downward_jump_count += 1
        state.top = i + 1

    log.debug("第 %d 步: 扫描 m%d, 情况 %s, 求婚 %s, top -> %d",
              stats.scan_count, i, case, j if case != "skip" else None, state.top)

    return TraceEvent(
        step=stats.scan_count,
        kinds=kinds,
        man=i,
        woman=j if case != "skip" else None,
        man_dumped=man_dumped,
        woman_dumped=woman_dumped,
        matching=state.matching if record_snapshot else None,
        top=state.top,
        case=case,
    )


class SolveResult(NamedTuple):
    matching: Matching
    trace: Trace
    stats: SolverStats


def prepare(inst: Instance) -> Tuple[Instance, RankTable]:
    """校验并互相可接受化，返回实例及其名次表"""
    violations = validate(inst)
    if violations:
        raise ValueError("实例不合法: " + "; ".join(map(str, violations)))
    normalized = normalize_mutual(inst)
    return normalized, rank_tables(normalized)


def solve(inst: Instance, record_trace: bool = True, debug_checks: bool = False) -> SolveResult:
    """求一个弱稳定非交叉匹配

    Args:
        inst: 偏好实例，会先做校验和互相可接受化
        record_trace: 是否记录轨迹（含每步的匹配快照）
        debug_checks: 每次 S 越过某位男性时穷举确认他已稳定

    Returns:
        (匹配, 轨迹, 统计)

    Raises:
        ValueError: 实例不合法
        InvariantViolation: 实现错误，异常中附带轨迹
    """
    normalized, ranks = prepare(inst)
    state = SolverState(normalized, ranks)
    bound = scan_bound(normalized.n_men, normalized.n_women)
    trace: Trace = []

    try:
        while not state.finished:
            if state.stats.scan_count >= bound:
                raise InvariantViolation("step-bound", f"扫描次数超过上界 {bound}", stats=state.stats)
            i = state.top
            event = step(state, record_snapshot=record_trace)
            if record_trace:
                trace.append(event)
            if debug_checks and state.top > i and not is_man_stable(state, i):
                raise InvariantViolation("prefix-stability", f"S 越过 m{i} 时他仍不稳定", stats=state.stats)
    except InvariantViolation as e:
        e.trace = trace
        e.stats = state.stats
        log.error("求解失败: %s（已记录 %d 步轨迹）", e, len(trace))
        raise

    result = state.matching
    log.info("求解完成: n_men=%d n_women=%d 扫描 %d 次, 求婚 %d 次, 匹配大小 %d",
             normalized.n_men, normalized.n_women, state.stats.scan_count,
             state.stats.proposal_count, len(result))
    return SolveResult(result, trace, state.stats)


def check_trace(inst: Instance, result: SolveResult) -> List[str]:
    """在记录下来的轨迹上检查求解过程的各项性质，返回违反项的描述"""
    normalized, ranks = prepare(inst)
    n_men, n_women = normalized.n_men, normalized.n_women
    matching, trace, stats = result
    problems: List[str] = []

    partners_over_time: Dict[int, List[int]] = defaultdict(list)
    for event in trace:
        snapshot = event.matching
        if snapshot is not None and not is_noncrossing(snapshot):
            problems.append(f"第 {event.step} 步后匹配出现交叉")
        if not event.is_proposal:
            continue
        i, j = event.man, event.woman
        if snapshot is not None and (i, j) not in snapshot:
            problems.append(f"第 {event.step} 步的求婚 (m{i},w{j}) 未被接受")
        if event.man_dumped is not None and not j < event.man_dumped:
            problems.append(f"第 {event.step} 步 m{i} 从 w{event.man_dumped} 向下换到 w{j}")
        if event.woman_dumped is not None and not i > event.woman_dumped:
            problems.append(f"第 {event.step} 步 w{j} 抛弃了下方的 m{event.woman_dumped} 而接受 m{i}")
        partners_over_time[j].append(i)

    for j, sequence in sorted(partners_over_time.items()):
        if any(a >= b for a, b in zip(sequence, sequence[1:])):
            problems.append(f"w{j} 的伴侣序列不是严格下移: {sequence}")

    for j in range(1, n_women + 1):
        if stats.upward_by_woman[j] > max(n_men - 1, 0):
            problems.append(f"w{j} 的向上跳跃大小之和 {stats.upward_by_woman[j]} 超过 n_men - 1")
    if sum(stats.upward_by_woman) > n_women * max(n_men - 1, 0):
        problems.append("向上跳跃总大小超过 n_women·(n_men - 1)")
    if stats.scan_count > scan_bound(n_men, n_women):
        problems.append(f"扫描次数 {stats.scan_count} 超过上界 {scan_bound(n_men, n_women)}")
    if trace and len(trace) != stats.scan_count:
        problems.append("轨迹长度与扫描次数不一致")
    if stats.downward_jump_count != stats.upward_jump_size_sum + n_men:
        problems.append("向下跳跃次数不等于向上跳跃大小之和加 n_men")
    if not is_wsnm(normalized, ranks, matching):
        problems.append("输出不是弱稳定非交叉匹配")
    return problems
