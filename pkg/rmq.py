"""
区间最小值下标查询（RMQ）
提供与Rust核心稀疏表的接口，Rust模块不可用时使用numpy实现

每位男性的名次行在求解开始时建表一次，之后只读；查询返回区间内名次最小的女性下标，
并列时返回最小的下标。所有下标从 1 开始。
"""

import logging
from typing import Sequence, Union

import numpy as np

log = logging.getLogger(__name__)

# 尝试导入Rust模块
RUST_AVAILABLE = False
try:
    import wsnm_core
    RustSparseTable = wsnm_core.SparseTable
    RUST_AVAILABLE = True
    log.info("成功导入Rust模块 wsnm_core，将使用Rust稀疏表")
except ImportError as e:
    log.info("未找到Rust模块 (%s)，将使用numpy稀疏表", e)


class PyRangeArgmin:
    """稀疏表的numpy实现：建表 O(n log n)，查询 O(1)"""

    __slots__ = ("_values", "_table", "_length")

    def __init__(self, values: Sequence[int]):
        """建表

        Args:
            values: 名次数组（可含 UNRANKED），不能为空
        """
        data = np.asarray(values, dtype=np.int64)
        if data.ndim != 1 or data.size == 0:
            raise ValueError("RMQ 数组不能为空")

        length = int(data.size)
        index_type = np.int32 if length < 2 ** 31 else np.int64
        # _table[k][p] 为区间 [p, p + 2**k) 的最小值下标（0 起）
        table = [np.arange(length, dtype=index_type)]
        k = 1
        while (1 << k) <= length:
            prev = table[k - 1]
            half = 1 << (k - 1)
            left = prev[: length - (1 << k) + 1]
            right = prev[half: half + left.size]
            # 相等时取左侧，保证返回最小下标
            table.append(np.where(data[left] <= data[right], left, right))
            k += 1

        self._values = data
        self._table = table
        self._length = length

    def __len__(self) -> int:
        return self._length

    def query_argmin(self, lo: int, hi: int) -> int:
        """返回 [lo, hi] 中取最小值的最小下标"""
        if not 1 <= lo <= hi <= self._length:
            raise ValueError(f"非法的查询区间 [{lo}, {hi}]，数组长度 {self._length}")
        a = lo - 1
        span = hi - lo + 1
        k = span.bit_length() - 1
        left = int(self._table[k][a])
        right = int(self._table[k][hi - (1 << k)])
        if self._values[left] <= self._values[right]:
            return left + 1
        return right + 1


RangeArgmin = Union[PyRangeArgmin, "RustSparseTable"]


def build(values: Sequence[int]) -> RangeArgmin:
    """建表，自动选择Rust或Python实现"""
    if RUST_AVAILABLE:
        if len(values) == 0:
            raise ValueError("RMQ 数组不能为空")
        return RustSparseTable([int(v) for v in values])
    return PyRangeArgmin(values)


def query_argmin(s: RangeArgmin, lo: int, hi: int) -> int:
    """区间 [lo, hi] 的最小值下标，并列取最小下标"""
    return s.query_argmin(lo, hi)


def linear_argmin(values: Sequence[int], lo: int, hi: int) -> int:
    """线性扫描的参考实现，用于校验"""
    if not 1 <= lo <= hi <= len(values):
        raise ValueError(f"非法的查询区间 [{lo}, {hi}]")
    best = lo
    for k in range(lo + 1, hi + 1):
        if values[k - 1] < values[best - 1]:
            best = k
    return best
