import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from embrank.ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    add,
    classify,
    compare,
    fundamental_sequence,
    omega_pow,
    parse_ordinal,
)
from strategies import ordinals

W = OMEGA
P = parse_ordinal


def test_compare_examples():
    assert compare(0, 1) == "less"
    assert compare(W, W) == "equal"
    assert compare(P("w+1"), P("w*2")) == "less"


def test_add_examples():
    assert add(1, W) == W
    assert add(W, 1) == P("w+1")
    assert add(P("w+1"), W) == P("w*2")


def test_omega_pow_examples():
    assert omega_pow(0) == ONE
    assert omega_pow(1) == W
    assert omega_pow(W) == P("w^w")


def test_classify_examples():
    assert classify(P("w+3")) == ("successor", P("w+2"))
    assert classify(P("w^2")) == ("limit", None)
    assert classify(0) == ("zero", None)


def test_fundamental_sequence_examples():
    assert fundamental_sequence(W, 3) == Ordinal.of(3)
    assert fundamental_sequence(P("w^2"), 2) == P("w*2")
    assert fundamental_sequence(P("w^w"), 3) == P("w^3")
    assert fundamental_sequence(P("w^2+w"), 4) == P("w^2+4")
    assert fundamental_sequence(P("w^(w+1)"), 2) == P("w^w*2")


def test_fundamental_sequence_rejects_non_limits():
    for bad in (0, 5, P("w+1")):
        with pytest.raises(ValueError):
            fundamental_sequence(bad, 1)
    with pytest.raises(ValueError):
        fundamental_sequence(W, 0)


@pytest.mark.parametrize("text", ["0", "7", "w", "w+5", "w^2*3 + w + 5", "w^(w + 1)", "w^w^2"])
def test_parse_format_round_trip(text):
    a = P(text)
    assert P(str(a)) == a


@pytest.mark.parametrize("text", ["w + w^2", "w^0", "w*0", "1 + w", "w^", "x", "w^2*3 + w^2", ""])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        P(text)


def _order_type_sum_oracle(a, b):
    # finite ordinals embedded as w^0 coefficients: plain integer addition
    return Ordinal.of(a + b)


def test_finite_arithmetic_matches_integers():
    for a, b in itertools.product(range(8), repeat=2):
        assert add(a, b) == _order_type_sum_oracle(a, b)
        assert compare(a, b) == ("less" if a < b else "equal" if a == b else "greater")


@given(ordinals(), ordinals(), ordinals())
def test_compare_total_order(a, b, c):
    ab, ba = compare(a, b), compare(b, a)
    assert {ab, ba} in ({"equal"}, {"less", "greater"})
    assert (ab == "equal") == (a == b)
    if compare(a, b) == "less" and compare(b, c) == "less":
        assert compare(a, c) == "less"


@given(ordinals(), ordinals(), ordinals())
def test_add_associative(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))


@given(ordinals())
def test_add_zero_identity(a):
    assert add(a, ZERO) == a
    assert add(ZERO, a) == a


@given(ordinals(), ordinals())
def test_add_right_monotone(a, b):
    # a + b >= a and b <= a + b
    assert compare(add(a, b), a) != "less"
    assert compare(add(a, b), b) != "less"


@given(ordinals(), ordinals())
def test_omega_pow_strictly_monotone(a, b):
    if compare(a, b) == "less":
        assert compare(omega_pow(a), omega_pow(b)) == "less"


@given(ordinals(), st.integers(1, 10))
def test_fundamental_sequence_increasing_below_limit(lam, n):
    if classify(lam)[0] != "limit":
        return
    x, y = fundamental_sequence(lam, n), fundamental_sequence(lam, n + 1)
    assert compare(x, y) == "less"
    assert compare(y, lam) == "less"


@given(ordinals())
def test_successor_predecessor(a):
    kind, pred = classify(a)
    if kind == "successor":
        assert add(pred, 1) == a
    elif kind == "limit":
        assert all(compare(add(x, 1), a) == "less" for x in (fundamental_sequence(a, 1),))


@given(ordinals())
def test_text_round_trip(a):
    assert P(str(a)) == a
