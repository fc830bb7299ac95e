"""
稳定性模块
几何交叉判定以及四种稳定性定义（阻塞对、非交叉阻塞对、弱稳定、强稳定）的校验
"""

from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from instance import UNRANKED, Instance, RankTable

Pair = Tuple[int, int]


class ContractViolation(ValueError):
    """调用方违反了函数的前置条件"""


class MatchingError(ContractViolation):
    """匹配中有人出现在两个对里，或下标越界"""


class Matching:
    """不相交的男女对集合，附带双向查找"""

    __slots__ = ("_by_man", "_by_woman", "_pairs")

    def __init__(self, by_man: Dict[int, int]):
        self._by_man = dict(by_man)
        self._by_woman = {j: i for i, j in self._by_man.items()}
        if len(self._by_woman) != len(self._by_man):
            raise MatchingError("同一位女性出现在两个匹配对中")
        self._pairs = tuple(sorted(self._by_man.items()))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Pair]) -> "Matching":
        by_man: Dict[int, int] = {}
        for i, j in pairs:
            if i in by_man:
                raise MatchingError(f"男性 {i} 出现在两个匹配对中")
            by_man[i] = j
        return cls(by_man)

    @classmethod
    def empty(cls) -> "Matching":
        return cls({})

    @property
    def pairs(self) -> Tuple[Pair, ...]:
        """按男性下标升序排列的匹配对"""
        return self._pairs

    def partner_of_man(self, i: int) -> Optional[int]:
        return self._by_man.get(i)

    def partner_of_woman(self, j: int) -> Optional[int]:
        return self._by_woman.get(j)

    def __contains__(self, pair: Pair) -> bool:
        return self._by_man.get(pair[0]) == pair[1]

    def __iter__(self) -> Iterator[Pair]:
        return iter(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Matching):
            return self._pairs == other._pairs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __repr__(self) -> str:
        return "Matching({" + ",".join(f"({i},{j})" for i, j in self._pairs) + "})"

    def check_bounds(self, n_men: int, n_women: int) -> None:
        """确认所有下标都在实例范围内"""
        for i, j in self._pairs:
            if not (1 <= i <= n_men and 1 <= j <= n_women):
                raise MatchingError(f"匹配对 ({i},{j}) 超出实例范围")


def crosses(e1: Pair, e2: Pair) -> bool:
    """边 (m_i,w_x) 与 (m_j,w_y) 交叉当且仅当 (i-j)(x-y) < 0"""
    (i, x), (j, y) = e1, e2
    if i == j or x == y:
        raise ContractViolation(f"边 {e1} 与 {e2} 有公共端点")
    return (i - j) * (x - y) < 0


def is_noncrossing(m: Matching) -> bool:
    # 按男性排序后女性下标严格递增即无交叉
    women = [j for _, j in m.pairs]
    return all(a < b for a, b in zip(women, women[1:]))


def _prefers(rank_row, candidate: int, current: Optional[int]) -> bool:
    """candidate 是否严格优于 current；未匹配按 UNRANKED 比较"""
    current_rank = UNRANKED if current is None else rank_row[current]
    return rank_row[candidate] < current_rank


def is_blocking_pair(inst: Instance, ranks: RankTable, m: Matching, i: int, j: int) -> bool:
    """(m_i, w_j) 是否为阻塞对"""
    if (i, j) in m:
        return False
    if ranks.men_rank[i, j] == UNRANKED or ranks.women_rank[j, i] == UNRANKED:
        return False
    return (_prefers(ranks.men_rank[i], j, m.partner_of_man(i))
            and _prefers(ranks.women_rank[j], i, m.partner_of_woman(j)))


def _crosses_any(m: Matching, i: int, j: int) -> bool:
    for a, b in m.pairs:
        if a == i or b == j:
            continue
        if (i - a) * (j - b) < 0:
            return True
    return False


def is_noncrossing_blocking_pair(inst: Instance, ranks: RankTable, m: Matching, i: int, j: int) -> bool:
    """阻塞对且线段 (m_i, w_j) 不与 M 中任何边交叉"""
    return is_blocking_pair(inst, ranks, m, i, j) and not _crosses_any(m, i, j)


def find_blocking_pairs(inst: Instance, ranks: RankTable, m: Matching) -> List[Pair]:
    """所有阻塞对，按 (i, j) 排序"""
    return [
        (i, j)
        for i in range(1, inst.n_men + 1)
        for j in range(1, inst.n_women + 1)
        if is_blocking_pair(inst, ranks, m, i, j)
    ]


def find_noncrossing_blocking_pairs(inst: Instance, ranks: RankTable, m: Matching) -> List[Pair]:
    """所有非交叉阻塞对，按 (i, j) 排序"""
    return [(i, j) for i, j in find_blocking_pairs(inst, ranks, m) if not _crosses_any(m, i, j)]


def is_wsnm(inst: Instance, ranks: RankTable, m: Matching) -> bool:
    """弱稳定非交叉匹配：无交叉且没有非交叉阻塞对"""
    return is_noncrossing(m) and not find_noncrossing_blocking_pairs(inst, ranks, m)


def is_ssnm(inst: Instance, ranks: RankTable, m: Matching) -> bool:
    """强稳定非交叉匹配：无交叉且没有任何阻塞对"""
    return is_noncrossing(m) and not find_blocking_pairs(inst, ranks, m)
