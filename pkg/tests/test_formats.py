import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from embrank.formats import (
    ParseError,
    format_family,
    format_map,
    format_metric_space,
    format_modulus,
    format_rational,
    format_relation,
    parse_family,
    parse_map,
    parse_metric_space,
    parse_modulus,
    parse_rational,
    parse_relation,
)
from embrank.moduli import INF, Modulus, grid_identity
from embrank.schreier import format_finset, truncated_relation
from embrank.wellfounded import FiniteRelation
from embrank.zschreier import enumerate_points, to_metric_space
from instances import random_metric
from strategies import seqfns

LINE = "points 3\na\nb\nc\n1 2 1\n2 3 2\n1 3 3\n"


def test_metric_space_examples():
    space = parse_metric_space(LINE)
    assert space.d("a", "c") == 3
    with pytest.raises(ParseError) as info:
        parse_metric_space("points 3\na\nb\nc\n1 2 1\n2 3 2\n1 3 5\n")
    assert info.value.kind == "triangle" and info.value.line == 7
    with pytest.raises(ParseError) as info:
        parse_metric_space(LINE + "2 2 1\n")
    assert info.value.kind == "diagonal" and info.value.line == 8
    with pytest.raises(ParseError) as info:
        parse_metric_space(LINE + "3 1 4\n")
    assert info.value.kind == "symmetry"


@pytest.mark.parametrize(
    "text",
    [
        "",
        "points 0\n",
        "points 2\na\n",
        "points 2\na\nb\n",
        "points 2\na\nb\n1 3 1\n",
        "points 2\na\nb\n1 2 0.5\n",
        "points 2\na\nb\n1 2\n",
    ],
)
def test_metric_space_rejects(text):
    with pytest.raises(ParseError):
        parse_metric_space(text)


def test_modulus_examples():
    mod = parse_modulus("window 2\ntail diverges\nhead vanishes\n-2 1/3\n-1 1/2\n1 1\n2 2\n")
    assert mod == grid_identity(2)
    with pytest.raises(ParseError) as info:
        parse_modulus("window 1\n-1 2\n1 1\n")
    assert info.value.kind == "monotonicity" and "-1 and 1" in str(info.value)
    with pytest.raises(ParseError) as info:
        parse_modulus("window 1\nhead vanishes\n-1 inf\n1 inf\n")
    assert info.value.kind == "flag"
    with pytest.raises(ParseError) as info:
        parse_modulus("window 1\n0 1\n")
    assert info.value.kind == "code"
    with pytest.raises(ParseError) as info:
        parse_modulus("window 1\n-1 x/2\n1 1\n")
    assert info.value.kind == "rational" and info.value.line == 2


def test_rational_tokens():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("inf", allow_inf=True) == INF
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(INF) == "inf"
    for bad in ("0.5", "1e3", "1/0", "inf"):
        with pytest.raises(ParseError):
            parse_rational(bad)


@given(st.integers(0, 2**32 - 1))
def test_metric_space_round_trip(seed):
    rng = random.Random(seed)
    space = random_metric(rng, [f"p{i}" for i in range(rng.randint(1, 7))])
    assert parse_metric_space(format_metric_space(space)) == space


def test_lattice_space_round_trip():
    space = to_metric_space(enumerate_points(1, 4, 1))
    assert parse_metric_space(format_metric_space(space)) == space


@given(st.integers(1, 5), st.lists(st.sampled_from([0, 1, 2, 3]), min_size=10, max_size=10), st.booleans())
def test_modulus_round_trip(window, bumps, with_inf):
    vals, cur = [], Fraction(0)
    for b in bumps[: 2 * window]:
        cur += Fraction(b, 3)
        vals.append(cur)
    if with_inf:
        vals[-1] = INF
    codes = list(range(-window, 0)) + list(range(1, window + 1))
    mod = Modulus(window, dict(zip(codes, vals)), "unspecified", "positive")
    assert parse_modulus(format_modulus(mod)) == mod


def test_relation_round_trip():
    rel = truncated_relation(1, 6)
    named = FiniteRelation(
        tuple(format_finset(a) for a in rel.nodes),
        tuple((format_finset(y), format_finset(x)) for y, x in rel.edges),
    )
    assert parse_relation(format_relation(named)) == named
    with pytest.raises(ParseError):
        parse_relation("node a\nedge a b\n")
    with pytest.raises(ParseError):
        parse_relation("node a\nnode a\n")


def test_map_round_trip():
    plain = {"a": "p", "b": "q"}
    assert parse_map(format_map(plain)) == plain
    spaced = {"1:1 2:-1": "0", "0": "1:1"}
    assert parse_map(format_map(spaced)) == spaced
    with pytest.raises(ParseError):
        parse_map("a p\na q\n")


@given(st.lists(st.tuples(seqfns(), seqfns(diverging=False)), min_size=1, max_size=5))
def test_family_round_trip(pairs):
    assert parse_family(format_family(pairs)) == pairs


def test_family_rejects():
    with pytest.raises(ParseError):
        parse_family("prefix 1 ; slope 1\n")
    with pytest.raises(ParseError):
        parse_family("# nothing\n")
