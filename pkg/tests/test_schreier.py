import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from embrank.ordinal import classify, parse_ordinal
from embrank.schreier import (
    decompose,
    enumerate_truncated,
    finset,
    format_finset,
    member,
    member_exhaustive,
    parse_finset,
    prec_star,
    truncated_relation,
)
from embrank.wellfounded import BudgetExceeded

ALPHAS = [0, 1, 2, 3, parse_ordinal("w"), parse_ordinal("w+1")]


def subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), r)


def test_member_examples():
    assert member({1}, 0)
    assert not member({1, 2}, 1)
    assert member({2, 3, 4, 5}, 2)
    assert member({3, 4, 5}, parse_ordinal("w"))


def test_decompose_examples():
    assert decompose({2, 5}, 1) == [(2,), (5,)]
    assert decompose({1, 2}, 1) is None
    assert decompose({2, 3, 4, 5}, 2) == [(2, 3), (4, 5)]


def test_decompose_preconditions():
    with pytest.raises(ValueError):
        decompose({2, 3}, parse_ordinal("w"))
    with pytest.raises(ValueError):
        decompose((), 1)


def test_enumerate_examples():
    assert enumerate_truncated(0, 3) == [(), (1,), (2,), (3,)]
    # pinned from the |A| <= min A oracle: empty set, 4 singletons, {2,3}, {2,4}, {3,4}
    assert len(enumerate_truncated(1, 4)) == 8


def test_first_level_is_size_bounded_by_minimum():
    for a in subsets(10):
        assert member(a, 1) == (not a or len(a) <= a[0])


@pytest.mark.parametrize("alpha", ALPHAS, ids=str)
def test_enumeration_matches_membership(alpha):
    listed = set(enumerate_truncated(alpha, 8))
    assert listed == {a for a in subsets(8) if member(a, alpha)}


@pytest.mark.parametrize("alpha", ALPHAS, ids=str)
def test_hereditary(alpha):
    for a in subsets(9):
        if member(a, alpha):
            for r in range(len(a)):
                for b in itertools.combinations(a, r):
                    assert member(b, alpha)


@pytest.mark.parametrize("alpha", ALPHAS, ids=str)
def test_spreading(alpha):
    top = 9
    for a in subsets(7):
        if not a or not member(a, alpha):
            continue
        # shift every element up by its own non-negative amount, keeping order
        for b in itertools.combinations(range(a[0], top + 1), len(a)):
            if all(y >= x for x, y in zip(a, b)):
                assert member(b, alpha)


@pytest.mark.parametrize("alpha", [1, 2, 3, parse_ordinal("w+1")], ids=str)
def test_greedy_agrees_with_exhaustive(alpha):
    for a in subsets(9):
        assert member(a, alpha) == member_exhaustive(a, alpha)


@pytest.mark.parametrize("alpha", [1, 2, 3, parse_ordinal("w+1")], ids=str)
def test_decomposition_blocks_are_valid(alpha):
    pred = classify(alpha)[1]
    for a in subsets(8):
        if not a:
            continue
        blocks = decompose(a, alpha)
        if blocks is None:
            continue
        assert tuple(x for blk in blocks for x in blk) == a
        assert len(blocks) <= a[0]
        assert all(member(blk, pred) for blk in blocks)


def test_prec_star_examples():
    assert prec_star({1, 3}, {1})
    assert not prec_star({1, 3}, {3})
    assert prec_star({5}, ())


@given(st.frozensets(st.integers(1, 12), max_size=5), st.frozensets(st.integers(1, 12), max_size=5))
def test_prec_star_shape(a, b):
    a, b = finset(a), finset(b)
    if prec_star(a, b):
        assert len(a) == len(b) + 1 and set(b) < set(a)


@given(st.frozensets(st.integers(1, 50), max_size=8))
def test_finset_text_round_trip(a):
    a = finset(a)
    assert parse_finset(format_finset(a)) == a


@pytest.mark.parametrize("text", ["{2,1}", "{1,1}", "{0}", "1,2", "{a}"])
def test_parse_finset_rejects(text):
    with pytest.raises(ValueError):
        parse_finset(text)


def test_truncated_relation_edges_are_end_extensions():
    rel = truncated_relation(1, 7)
    assert set(rel.nodes) == set(enumerate_truncated(1, 7))
    for y, x in rel.edges:
        assert prec_star(y, x)
    expected = {(a, b) for a in rel.nodes for b in rel.nodes if prec_star(a, b)}
    assert set(rel.edges) == expected


def test_truncated_relation_budget():
    with pytest.raises(BudgetExceeded):
        truncated_relation(2, 12, budget=10)
