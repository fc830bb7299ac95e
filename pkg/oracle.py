"""
穷举验证模块
小规模实例上的参考实现：枚举非交叉匹配与WSNM、判定SSNM是否存在、求最大WSNM，
以及按任意顺序挑选男性时可能不终止的演示
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from config import DEFAULT_ORACLE_MAX_SIDE
from instance import Instance, RankTable
from solver import SolverState, best_available, prepare, scan_context
from stability import Matching, Pair, is_ssnm, is_wsnm

log = logging.getLogger(__name__)


class OracleSizeError(ValueError):
    """实例超出穷举规模上限"""


def _guard(inst: Instance, max_side: Optional[int], allow_large: bool) -> None:
    limit = DEFAULT_ORACLE_MAX_SIDE if max_side is None else max_side
    if not allow_large and (inst.n_men > limit or inst.n_women > limit):
        raise OracleSizeError(
            f"实例规模 {inst.n_men}x{inst.n_women} 超过穷举上限 {limit}，可用 allow_large 强制执行")


def _iter_noncrossing(inst: Instance) -> Iterator[Tuple[Pair, ...]]:
    """按匹配对序列的字典序生成所有非交叉匹配"""
    options = [()] + [tuple(sorted(inst.man_prefs(i))) for i in range(1, inst.n_men + 1)]

    def extend(prefix: Tuple[Pair, ...], next_man: int, next_woman: int) -> Iterator[Tuple[Pair, ...]]:
        yield prefix
        for a in range(next_man, inst.n_men + 1):
            for b in options[a]:
                # 上一个女性之上的都会交叉，直接剪掉
                if b >= next_woman:
                    yield from extend(prefix + ((a, b),), a + 1, b + 1)

    return extend((), 1, 1)


def _iter_wsnm(inst: Instance, ranks: RankTable) -> Iterator[Tuple[Pair, ...]]:
    """按字典序生成所有 WSNM

    与 _iter_noncrossing 相同的扩展顺序；选定下一对 (a, b) 时，上一对的男性以及两对之间
    被跳过的男性的可达窗口和窗口内女性的伴侣都已确定，此时检查他们是否稳定并剪枝。
    """
    n_men, n_women = inst.n_men, inst.n_women
    prefs = [()] + [inst.man_prefs(i) for i in range(1, n_men + 1)]
    options = [()] + [tuple(sorted(p)) for p in prefs[1:]]
    women_rank = ranks.women_rank.tolist()

    def blocked(i: int, partner: Optional[int], lo: int, hi: int, holders: Dict[int, int]) -> bool:
        # 现任之前是否有窗口内且愿意接受他的女性
        for w in prefs[i]:
            if w == partner:
                return False
            if lo <= w <= hi:
                holder = holders.get(w)
                if holder is None or women_rank[w][i] < women_rank[w][holder]:
                    return True
        return False

    def segment_stable(prev_pair: Optional[Pair], last_pair: Optional[Pair], next_pair: Optional[Pair]) -> bool:
        a1, b1 = last_pair if last_pair else (0, 0)
        a2, b2 = next_pair if next_pair else (n_men + 1, n_women)
        holders: Dict[int, int] = {}
        if last_pair:
            holders[b1] = a1
        if next_pair:
            holders[b2] = a2
        if last_pair:
            around = dict(holders)
            lo = 1
            if prev_pair:
                around[prev_pair[1]] = prev_pair[0]
                lo = prev_pair[1]
            if blocked(a1, b1, lo, b2, around):
                return False
        lo = b1 if last_pair else 1
        return not any(blocked(i, None, lo, b2, holders) for i in range(a1 + 1, a2))

    def extend(prefix: Tuple[Pair, ...], prev_pair: Optional[Pair],
               last_pair: Optional[Pair]) -> Iterator[Tuple[Pair, ...]]:
        if segment_stable(prev_pair, last_pair, None):
            yield prefix
        next_man = last_pair[0] + 1 if last_pair else 1
        next_woman = last_pair[1] + 1 if last_pair else 1
        for a in range(next_man, n_men + 1):
            for b in options[a]:
                if b >= next_woman and segment_stable(prev_pair, last_pair, (a, b)):
                    yield from extend(prefix + ((a, b),), last_pair, (a, b))

    return extend((), None, None)


def _prepared(inst: Instance, max_side: Optional[int], allow_large: bool) -> Tuple[Instance, RankTable]:
    _guard(inst, max_side, allow_large)
    return prepare(inst)


def enumerate_noncrossing_matchings(inst: Instance, max_side: Optional[int] = None,
                                    allow_large: bool = False) -> List[Matching]:
    """所有由互相可接受对组成的非交叉匹配，按字典序排列"""
    normalized, _ = _prepared(inst, max_side, allow_large)
    return [Matching.from_pairs(pairs) for pairs in _iter_noncrossing(normalized)]


def enumerate_wsnm(inst: Instance, max_side: Optional[int] = None,
                   allow_large: bool = False) -> List[Matching]:
    """所有弱稳定非交叉匹配，按字典序排列"""
    normalized, ranks = _prepared(inst, max_side, allow_large)
    found = [Matching.from_pairs(pairs) for pairs in _iter_wsnm(normalized, ranks)]
    log.debug("共找到 %d 个 WSNM", len(found))
    return found


def filter_wsnm(inst: Instance, max_side: Optional[int] = None,
                allow_large: bool = False) -> List[Matching]:
    """逐个用 is_wsnm 过滤全部非交叉匹配，作为剪枝枚举的对照"""
    normalized, ranks = _prepared(inst, max_side, allow_large)
    return [m for m in map(Matching.from_pairs, _iter_noncrossing(normalized))
            if is_wsnm(normalized, ranks, m)]


def enumerate_ssnm(inst: Instance, max_side: Optional[int] = None,
                   allow_large: bool = False) -> List[Matching]:
    """所有强稳定非交叉匹配（可能为空）"""
    normalized, ranks = _prepared(inst, max_side, allow_large)
    # SSNM 一定也是 WSNM
    return [m for m in map(Matching.from_pairs, _iter_wsnm(normalized, ranks))
            if is_ssnm(normalized, ranks, m)]


def exists_ssnm(inst: Instance, max_side: Optional[int] = None,
                allow_large: bool = False) -> Optional[Matching]:
    """返回字典序最小的 SSNM，不存在时返回 None"""
    normalized, ranks = _prepared(inst, max_side, allow_large)
    for pairs in _iter_wsnm(normalized, ranks):
        m = Matching.from_pairs(pairs)
        if is_ssnm(normalized, ranks, m):
            return m
    return None


def max_size_wsnm(inst: Instance, max_side: Optional[int] = None,
                  allow_large: bool = False) -> Matching:
    """规模最大的 WSNM，同样大小时取字典序最小的"""
    best: Optional[Matching] = None
    for m in enumerate_wsnm(inst, max_side, allow_large):
        if best is None or len(m) > len(best):
            best = m
    # WSNM 总是存在
    assert best is not None
    return best


@dataclass(frozen=True)
class PickSequence:
    """任意顺序演示中每一步挑选的男性

    order 循环使用；topmost 为 True 时忽略 order，每次挑选最上方的不稳定男性。
    """

    order: Tuple[int, ...] = ()
    max_steps: int = 100
    topmost: bool = False

    @classmethod
    def cyclic(cls, order: Sequence[int], max_steps: int = 100) -> "PickSequence":
        if not order:
            raise ValueError("挑选顺序不能为空")
        return cls(tuple(order), max_steps)

    @classmethod
    def topmost_unstable(cls, max_steps: int = 100) -> "PickSequence":
        return cls((), max_steps, topmost=True)


@dataclass
class ArbitraryOrderResult:
    terminated: bool
    steps_used: int
    matchings: List[Matching] = field(default_factory=list)


def _proposal_target(state: SolverState, i: int) -> Optional[int]:
    """不稳定时返回 m_i 最喜欢的可用女性，稳定时返回 None"""
    j = best_available(state, i, scan_context(state, i))
    if j is None or j == state.man_partner[i]:
        return None
    return j


def run_arbitrary_order(inst: Instance, picks: PickSequence) -> ArbitraryOrderResult:
    """按给定顺序挑选男性执行求婚操作

    挑到已稳定的男性时跳过该条目，不计步数；连续一整轮挑选都落在稳定男性上时停止。

    Returns:
        是否在用完步数前所有男性都稳定、执行的求婚步数以及每步之后的匹配
    """
    normalized, ranks = prepare(inst)
    state = SolverState(normalized, ranks)
    result = ArbitraryOrderResult(terminated=False, steps_used=0)
    order = itertools.cycle(picks.order) if picks.order else iter(())
    skipped = 0

    while True:
        unstable = [i for i in range(1, normalized.n_men + 1) if _proposal_target(state, i) is not None]
        if not unstable:
            result.terminated = True
            break
        if result.steps_used >= picks.max_steps:
            break
        if picks.topmost:
            i = unstable[0]
        else:
            i = next(order, None)
            if i is None:
                break
            if not 1 <= i <= normalized.n_men:
                raise ValueError(f"挑选的男性 {i} 超出范围 [1, {normalized.n_men}]")
            if i not in unstable:
                skipped += 1
                if skipped >= len(picks.order):
                    log.debug("一整轮挑选都是稳定的男性，停止")
                    break
                continue

        skipped = 0
        j = _proposal_target(state, i)
        state.apply_proposal(i, j)
        result.steps_used += 1
        result.matchings.append(state.matching)

    log.info("任意顺序演示: %s, 共 %d 步",
             "已终止" if result.terminated else "未终止", result.steps_used)
    return result
