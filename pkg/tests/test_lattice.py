import pytest
from hypothesis import given, settings, strategies as st

from pairknot.codes import UNKNOT, parse_code
from pairknot.lattice import (
    TREFOIL_24,
    UNIT_SQUARE,
    AlphabetError,
    crossing_free,
    exchange,
    format_word,
    is_valid,
    iter_polygons,
    knot_of_polygon,
    pair_annihilate,
    pair_create,
    parse_word,
    preferred,
    project_to_code,
    reduce_lattice,
    rotation_min,
    validate_polygon,
    vertices,
)
from pairknot.planarity import is_realizable
from oracles import closed_walks, polygon_count

TREFOIL = parse_code("1:4 3:6 5:2")
RECTANGLE = (1, 1, 2, 2, 6, 6, 5, 5)


def test_word_text():
    assert parse_word("1,2,6,5") == UNIT_SQUARE
    assert format_word(UNIT_SQUARE) == "1,2,6,5"
    with pytest.raises(AlphabetError):
        parse_word("1,2,7,5")
    with pytest.raises(AlphabetError):
        parse_word("a,b")


def test_validation_examples():
    assert validate_polygon(UNIT_SQUARE) is None
    assert validate_polygon(TREFOIL_24) is None
    assert validate_polygon((1, 6)) is not None
    assert "unbalanced" in str(validate_polygon((1, 2, 6, 6)))
    bad = validate_polygon((1, 2, 6, 5, 1, 2, 6, 5))
    assert bad.reason == "balanced proper sub-word"
    assert (bad.start, bad.stop) == (0, 4)


def test_vertices_close():
    pts = vertices(TREFOIL_24)
    assert pts[0] == pts[-1] == (0, 0, 0)
    assert len(set(pts[:-1])) == 24


def test_exchange_cases():
    assert exchange(RECTANGLE, 0) == RECTANGLE
    assert exchange(UNIT_SQUARE, 0) is None
    w = exchange(RECTANGLE, 1)
    assert w == (1, 2, 1, 2, 6, 6, 5, 5)
    assert exchange(w, 1) == RECTANGLE


def test_create_and_annihilate():
    w = pair_create(UNIT_SQUARE, 0, 3)
    assert w == (3, 1, 4, 2, 6, 5)
    assert pair_annihilate(w, 0) == UNIT_SQUARE
    assert pair_annihilate(UNIT_SQUARE, 0) is None
    with pytest.raises(AlphabetError):
        pair_create(UNIT_SQUARE, 0, 9)


def test_preference():
    assert preferred(UNIT_SQUARE, (1, 1, 2, 6, 6, 5)) == rotation_min(UNIT_SQUARE)
    assert preferred(RECTANGLE, RECTANGLE) == rotation_min(RECTANGLE)


def test_reduce_examples():
    assert reduce_lattice(UNIT_SQUARE).word == UNIT_SQUARE
    assert reduce_lattice(RECTANGLE).word == UNIT_SQUARE
    res = reduce_lattice(TREFOIL_24, length_budget=24)
    assert len(res.word) == 24
    assert not res.exhausted


def test_reduce_budget_flag():
    res = reduce_lattice(TREFOIL_24, length_budget=26, step_budget=50)
    assert res.exhausted
    assert res.steps == 50


def test_projections():
    assert project_to_code(UNIT_SQUARE) == UNKNOT
    raw = project_to_code(TREFOIL_24)
    assert raw.n >= 3
    assert is_realizable(raw)
    assert knot_of_polygon(TREFOIL_24) == TREFOIL
    for axis in ("x", "y"):
        assert knot_of_polygon(TREFOIL_24, axis) == TREFOIL


def test_crossing_free():
    assert crossing_free(UNIT_SQUARE)
    assert not crossing_free(TREFOIL_24)


@pytest.mark.parametrize("length, known", [(4, 3), (6, 22), (8, 207), (10, 2412), (12, 31754)])
def test_polygon_counts(length, known):
    assert sum(1 for _ in iter_polygons(length)) == known


@pytest.mark.parametrize("length", [4, 6, 8])
def test_polygons_match_walk_oracle(length):
    mine = list(iter_polygons(length))
    assert polygon_count(mine) == len(mine)
    assert polygon_count(closed_walks(length)) == len(mine)
    assert all(is_valid(w) for w in mine)


# properties ---------------------------------------------------------------------

def polygons_upto(n):
    return [w for L in range(4, n + 1, 2) for w in iter_polygons(L)]


SMALL = polygons_upto(8)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 40))
def test_exchange_involution(w, k):
    k %= len(w)
    v = exchange(w, k)
    if v is not None:
        assert exchange(v, k) == tuple(w)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 40), st.integers(1, 6))
def test_create_then_annihilate(w, k, d):
    k %= len(w)
    v = pair_create(w, k, d)
    if v is not None:
        assert pair_annihilate(v, k) == tuple(w)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL))
def test_small_polygons_are_unknots(w):
    assert knot_of_polygon(w) == UNKNOT
    assert len(reduce_lattice(w).word) == 4
