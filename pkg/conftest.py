"""
测试公共夹具：示例实例文件和随机实例语料
"""

import os

import pytest

from file_operations import load_instance
from instance import random_instance

ROOT = os.path.dirname(os.path.abspath(__file__))


def data_path(name: str) -> str:
    return os.path.join(ROOT, name)


@pytest.fixture
def example1():
    """三男三女的扫描示例，九步得到 {(2,1),(3,2)}"""
    return load_instance(data_path("example1.txt"))


@pytest.fixture
def no_ssnm():
    return load_instance(data_path("no_ssnm.txt"))


@pytest.fixture
def loop_demo():
    return load_instance(data_path("loop_demo.txt"))


@pytest.fixture
def two_sizes():
    return load_instance(data_path("two_sizes.txt"))


def small_corpus(count: int, max_side: int = 7, seed: int = 0):
    """n1、n2 在 [1, max_side] 内、密度轮流取 0.3/0.7/1.0 的随机实例"""
    densities = (0.3, 0.7, 1.0)
    for k in range(count):
        n_men = 1 + (k * 7 + seed) % max_side
        n_women = 1 + (k * 3 + seed // 7) % max_side
        yield random_instance(n_men, n_women, densities[k % 3], seed * 100003 + k)
