"""
稳定性校验测试
"""

import pytest

from instance import Instance, normalize_mutual, random_instance, rank_tables
from stability import (
    ContractViolation,
    Matching,
    MatchingError,
    crosses,
    find_blocking_pairs,
    find_noncrossing_blocking_pairs,
    is_blocking_pair,
    is_noncrossing,
    is_noncrossing_blocking_pair,
    is_ssnm,
    is_wsnm,
)


def _ranks(inst: Instance):
    normalized = normalize_mutual(inst)
    return normalized, rank_tables(normalized)


def test_crosses():
    assert crosses((1, 2), (2, 1))
    assert not crosses((1, 1), (2, 2))
    assert not crosses((2, 2), (1, 1))


@pytest.mark.parametrize("e1,e2", [((1, 1), (1, 2)), ((1, 3), (2, 3))])
def test_crosses_rejects_shared_endpoint(e1, e2):
    with pytest.raises(ContractViolation):
        crosses(e1, e2)


def test_matching_rejects_duplicates():
    with pytest.raises(MatchingError):
        Matching.from_pairs([(1, 1), (1, 2)])
    with pytest.raises(MatchingError):
        Matching.from_pairs([(1, 1), (2, 1)])


def test_matching_lookup_and_order():
    m = Matching.from_pairs([(3, 2), (2, 1)])
    assert m.pairs == ((2, 1), (3, 2))
    assert m.partner_of_man(3) == 2
    assert m.partner_of_woman(1) == 2
    assert m.partner_of_man(1) is None
    assert (2, 1) in m and (2, 2) not in m
    assert m == Matching({2: 1, 3: 2})
    assert len(Matching.empty()) == 0


def test_check_bounds():
    Matching.from_pairs([(2, 3)]).check_bounds(2, 3)
    with pytest.raises(MatchingError):
        Matching.from_pairs([(3, 1)]).check_bounds(2, 3)


def test_is_noncrossing():
    assert is_noncrossing(Matching.empty())
    assert is_noncrossing(Matching.from_pairs([(1, 1), (3, 2)]))
    assert not is_noncrossing(Matching.from_pairs([(1, 2), (2, 1)]))


def test_no_ssnm_instance(no_ssnm):
    inst, ranks = _ranks(no_ssnm)
    stable = Matching.from_pairs([(1, 2), (2, 1)])
    assert find_blocking_pairs(inst, ranks, stable) == []
    assert not is_noncrossing(stable)
    assert not is_wsnm(inst, ranks, stable)

    left = Matching.from_pairs([(1, 2)])
    # (m2,w1) 是阻塞对，但与 (m1,w2) 交叉
    assert find_blocking_pairs(inst, ranks, left) == [(2, 1)]
    assert find_noncrossing_blocking_pairs(inst, ranks, left) == []
    assert is_wsnm(inst, ranks, left)
    assert not is_ssnm(inst, ranks, left)


def test_example1_output_is_wsnm(example1):
    inst, ranks = _ranks(example1)
    m = Matching.from_pairs([(2, 1), (3, 2)])
    assert is_wsnm(inst, ranks, m)
    # m1 想要 w3，但 (m1,w3) 与两条边都交叉
    assert is_blocking_pair(inst, ranks, m, 1, 3)
    assert not is_noncrossing_blocking_pair(inst, ranks, m, 1, 3)


def test_unacceptable_pair_never_blocks():
    inst, ranks = _ranks(Instance.from_lists([[1], []], [[1], []]))
    assert not is_blocking_pair(inst, ranks, Matching.empty(), 1, 2)
    assert is_blocking_pair(inst, ranks, Matching.empty(), 1, 1)


def test_empty_matching_on_empty_lists():
    inst, ranks = _ranks(Instance.from_lists([[], []], [[]]))
    assert is_ssnm(inst, ranks, Matching.empty())


def test_ssnm_implies_wsnm(loop_demo):
    inst, ranks = _ranks(loop_demo)
    m = Matching.from_pairs([(1, 1), (2, 2)])
    assert is_ssnm(inst, ranks, m)
    assert is_wsnm(inst, ranks, m)


def test_crosses_is_symmetric():
    for e1 in [(1, 1), (1, 3), (2, 2), (3, 1)]:
        for e2 in [(4, 2), (5, 5), (6, 4)]:
            if e1[1] != e2[1]:
                assert crosses(e1, e2) == crosses(e2, e1)


def test_every_mutual_pair_blocks_empty_matching():
    inst, ranks = _ranks(random_instance(6, 5, 0.5, 3))
    expected = [(i, j) for i in range(1, 7) for j in inst.man_prefs(i)]
    assert find_noncrossing_blocking_pairs(inst, ranks, Matching.empty()) == sorted(expected)
