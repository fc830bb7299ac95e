"""
实例模块
负责偏好实例的数据模型：解析、序列化、校验、互相可接受化、名次表和随机生成

男性 m_1..m_n1 自上而下排列在一条直线上，女性 w_1..w_n2 排列在另一条平行线上；
所有对外接口的下标均从 1 开始。
"""

import logging
import random
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

log = logging.getLogger(__name__)

# 未列出的对象的名次，大于任何有限名次
UNRANKED = int(np.iinfo(np.int32).max)

MEN = "man"
WOMEN = "woman"


class InstanceParseError(ValueError):
    """实例文件格式错误，附带出错的行号"""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"第 {lineno} 行: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Violation:
    """实例不变量的一次违反"""

    side: str
    person: int
    kind: str  # "duplicate" 或 "range"
    value: int

    def __str__(self) -> str:
        return f"{self.side} {self.person}: {self.kind} {self.value}"


@dataclass(frozen=True)
class Instance:
    """偏好实例

    men_prefs[i-1] 是 m_i 的偏好列表（女性下标，偏好递减），women_prefs 对称。
    """

    n_men: int
    n_women: int
    men_prefs: Tuple[Tuple[int, ...], ...]
    women_prefs: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.n_men < 0 or self.n_women < 0:
            raise ValueError("人数不能为负")
        object.__setattr__(self, "men_prefs", tuple(tuple(p) for p in self.men_prefs))
        object.__setattr__(self, "women_prefs", tuple(tuple(p) for p in self.women_prefs))
        if len(self.men_prefs) != self.n_men or len(self.women_prefs) != self.n_women:
            raise ValueError("偏好列表数量与人数不一致")

    @classmethod
    def from_lists(cls, men_prefs: Sequence[Iterable[int]], women_prefs: Sequence[Iterable[int]]) -> "Instance":
        """由两组偏好列表构造实例，人数取列表个数"""
        return cls(len(men_prefs), len(women_prefs), tuple(map(tuple, men_prefs)), tuple(map(tuple, women_prefs)))

    def man_prefs(self, i: int) -> Tuple[int, ...]:
        return self.men_prefs[i - 1]

    def woman_prefs(self, j: int) -> Tuple[int, ...]:
        return self.women_prefs[j - 1]

    def is_mutual(self) -> bool:
        """w 在 P_m 中当且仅当 m 在 P_w 中"""
        men_side = {(i, j) for i, prefs in enumerate(self.men_prefs, 1) for j in prefs}
        women_side = {(i, j) for j, prefs in enumerate(self.women_prefs, 1) for i in prefs}
        return men_side == women_side

    def total_entries(self) -> int:
        return sum(map(len, self.men_prefs)) + sum(map(len, self.women_prefs))


class RankTable:
    """名次表，r_a(b) 的 O(1) 查询

    men_rank[i][j] 为 w_j 在 P_{m_i} 中的名次（首位为 1），缺席为 UNRANKED；
    数组多留第 0 行第 0 列，使下标可以直接从 1 开始。
    """

    __slots__ = ("n_men", "n_women", "men_rank", "women_rank")

    def __init__(self, n_men: int, n_women: int, men_rank: np.ndarray, women_rank: np.ndarray):
        self.n_men = n_men
        self.n_women = n_women
        self.men_rank = men_rank
        self.women_rank = women_rank
        self.men_rank.setflags(write=False)
        self.women_rank.setflags(write=False)

    def man_rank(self, i: int, j: int) -> int:
        """m_i 对 w_j 的名次"""
        return int(self.men_rank[i, j])

    def woman_rank(self, j: int, i: int) -> int:
        """w_j 对 m_i 的名次"""
        return int(self.women_rank[j, i])

    def men_row(self, i: int) -> np.ndarray:
        """m_i 的名次行，第 k 个元素对应 w_{k+1}"""
        return self.men_rank[i, 1:]


def parse_instance(text: str) -> Instance:
    """解析实例文本

    Args:
        text: 实例文件内容

    Returns:
        按文件顺序保存偏好列表的实例

    Raises:
        InstanceParseError: 表头错误、非数字内容或行数不符
    """
    significant: List[Tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        significant.append((lineno, line))

    if not significant:
        raise InstanceParseError(1, "缺少表头 'n_men n_women'")

    header_lineno, header = significant[0]
    parts = header.split()
    if len(parts) != 2:
        raise InstanceParseError(header_lineno, f"表头应为两个整数: '{header}'")
    try:
        n_men, n_women = int(parts[0]), int(parts[1])
    except ValueError:
        raise InstanceParseError(header_lineno, f"表头含非数字内容: '{header}'")
    if n_men < 0 or n_women < 0:
        raise InstanceParseError(header_lineno, "人数不能为负")

    body = significant[1:]
    expected = n_men + n_women
    if len(body) != expected:
        lineno = body[expected][0] if len(body) > expected else (body[-1][0] if body else header_lineno)
        raise InstanceParseError(lineno, f"需要 {expected} 行偏好列表，实际为 {len(body)} 行")

    lists: List[Tuple[int, ...]] = []
    for lineno, line in body:
        if line == '-':
            lists.append(())
            continue
        try:
            lists.append(tuple(int(token) for token in line.split()))
        except ValueError:
            raise InstanceParseError(lineno, f"偏好列表含非数字内容: '{line}'")

    return Instance(n_men, n_women, tuple(lists[:n_men]), tuple(lists[n_men:]))


def serialize_instance(inst: Instance) -> str:
    """把实例写成与 parse_instance 相同的文本格式"""
    lines = [f"{inst.n_men} {inst.n_women}"]
    for prefs in inst.men_prefs + inst.women_prefs:
        lines.append(" ".join(map(str, prefs)) if prefs else "-")
    return "\n".join(lines) + "\n"


def validate(inst: Instance) -> List[Violation]:
    """返回实例违反的所有不变量（重复与越界），空列表表示合法"""
    violations: List[Violation] = []
    for side, lists, bound in ((MEN, inst.men_prefs, inst.n_women), (WOMEN, inst.women_prefs, inst.n_men)):
        for person, prefs in enumerate(lists, 1):
            seen = set()
            for value in prefs:
                if not 1 <= value <= bound:
                    violations.append(Violation(side, person, "range", value))
                elif value in seen:
                    violations.append(Violation(side, person, "duplicate", value))
                seen.add(value)
    return violations


def normalize_mutual(inst: Instance) -> Instance:
    """删除非互相的条目，保持其余条目的相对顺序"""
    men_side = {(i, j) for i, prefs in enumerate(inst.men_prefs, 1) for j in prefs}
    women_side = {(i, j) for j, prefs in enumerate(inst.women_prefs, 1) for i in prefs}
    mutual = men_side & women_side

    men_prefs = tuple(
        tuple(j for j in prefs if (i, j) in mutual) for i, prefs in enumerate(inst.men_prefs, 1)
    )
    women_prefs = tuple(
        tuple(i for i in prefs if (i, j) in mutual) for j, prefs in enumerate(inst.women_prefs, 1)
    )
    removed = inst.total_entries() - 2 * len(mutual)
    if removed:
        log.debug("删除了 %d 个非互相条目", removed)
    return Instance(inst.n_men, inst.n_women, men_prefs, women_prefs)


def rank_tables(inst: Instance) -> RankTable:
    """由偏好列表构造名次表"""
    men_rank = np.full((inst.n_men + 1, inst.n_women + 1), UNRANKED, dtype=np.int64)
    women_rank = np.full((inst.n_women + 1, inst.n_men + 1), UNRANKED, dtype=np.int64)
    for i, prefs in enumerate(inst.men_prefs, 1):
        if prefs:
            men_rank[i, list(prefs)] = np.arange(1, len(prefs) + 1)
    for j, prefs in enumerate(inst.women_prefs, 1):
        if prefs:
            women_rank[j, list(prefs)] = np.arange(1, len(prefs) + 1)
    return RankTable(inst.n_men, inst.n_women, men_rank, women_rank)


def random_instance(n_men: int, n_women: int, density: float, seed: int) -> Instance:
    """生成随机实例

    每个男女对以概率 density 独立地互相可接受，双方列表顺序为各自可接受对象的均匀随机排列。

    Args:
        n_men: 男性人数
        n_women: 女性人数
        density: 互相可接受的概率
        seed: 随机种子，相同参数得到相同实例
    """
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density 必须在 [0, 1] 之间: {density}")

    rng = random.Random(seed)
    men_prefs: List[List[int]] = [[] for _ in range(n_men)]
    women_prefs: List[List[int]] = [[] for _ in range(n_women)]
    for i in range(1, n_men + 1):
        for j in range(1, n_women + 1):
            if rng.random() < density:
                men_prefs[i - 1].append(j)
                women_prefs[j - 1].append(i)

    for prefs in men_prefs:
        rng.shuffle(prefs)
    for prefs in women_prefs:
        rng.shuffle(prefs)

    return Instance.from_lists(men_prefs, women_prefs)
