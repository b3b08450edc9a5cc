import pytest
from hypothesis import assume, given, settings, strategies as st

from pairknot.codes import PairCode, UNKNOT, canonical_relabel, parse_code
from pairknot.enumerate import simplify
from pairknot.moves import (
    EmptyCode,
    FruitlessInsertion,
    InconsistentRoles,
    NotNeighboringSegments,
    R3Site,
    SiteNotFound,
    apply_r1_down,
    apply_r1_up,
    apply_r2_down,
    apply_r2_up,
    apply_r3,
    arrays_of,
    canonical_arrays,
    code_of,
    fruitful_r1_positions,
    m_statistic,
    neighboring_segments,
    r1_site,
    r2_site,
    r2_sites_arr,
    r3_orbit,
    r3_sites,
)
from pairknot.planarity import is_realizable
from strategies import codes, realizable_codes

TREFOIL = parse_code("1:4 3:6 5:2")


def r2_sites(code):
    P, O, _ = arrays_of(code)
    partner = code.partner()

    def pair(label):
        return (label, partner[label]) if code.is_over(label) else (partner[label], label)

    return [(pair(x + 1), pair(x1 + 1)) for x, x1 in r2_sites_arr(P, O)]


def test_r1_site_examples():
    assert r1_site(parse_code("1:2 4:7 6:9 8:5 10:3")) == (1, 2)
    assert r1_site(TREFOIL) is None
    assert r1_site(parse_code("1:6 3:2 5:4")) is not None


def test_r1_site_wraparound():
    c = parse_code("1:8 3:6 5:2 7:4")
    assert r1_site(c) == (1, 8)


def test_r2_sites():
    plus = parse_code("1:6 3:8 4:9 5:2 7:10")
    assert ((3, 8), (4, 9)) in r2_sites(plus)
    minus = parse_code("1:4 2:7 3:8 5:10 9:6")
    assert ((2, 7), (3, 8)) in r2_sites(minus)
    assert r2_site(TREFOIL) is None
    assert apply_r2_down(minus, ((2, 7), (3, 8))).n == 3


def test_kink_removal():
    assert apply_r1_down(parse_code("1:2"), (1, 2)) == UNKNOT
    with pytest.raises(SiteNotFound):
        apply_r1_down(TREFOIL, (1, 4))


def test_double_kink_is_unknot():
    c = parse_code("1:4 3:2")
    assert simplify(c) == UNKNOT
    assert apply_r1_down(apply_r1_down(c, (3, 2)), (1, 2)) == UNKNOT


def test_r2_down_rejects_non_sites():
    with pytest.raises(SiteNotFound):
        apply_r2_down(TREFOIL, ((1, 4), (3, 6)))


def test_r3_on_trefoil_sum_of_kinks():
    c = parse_code("1:6 2:9 4:7 5:10 8:3")
    for site in r3_sites(c):
        d = apply_r3(c, site)
        assert d.n == c.n


def test_r3_bad_site():
    with pytest.raises(SiteNotFound):
        apply_r3(TREFOIL, R3Site(((1, 2), (3, 4), (5, 6))))


def test_r3_inconsistent_roles():
    # the middle strand of an alternating triangle is on top at one end only
    c = parse_code("1:6 4:7 5:10 8:3 9:2")
    P, O, _ = arrays_of(c)
    bad = []
    for x in range(len(P)):
        x1 = (x + 1) % len(P)
        a, b = P[x], P[x1]
        if (b - a) % len(P) in (1, len(P) - 1):
            c1, c2 = (a, b) if (b - a) % len(P) == 1 else (b, a)
            strands = ((x + 1, x1 + 1), (a + 1, c1 + 1), (b + 1, c2 + 1))
            if O[x] == O[c1] and O[x] != O[x1]:
                bad.append(strands)
    for strands in bad:
        with pytest.raises((InconsistentRoles, SiteNotFound)):
            apply_r3(c, R3Site(strands))


def test_r3_orbit_cases():
    assert r3_orbit(UNKNOT) == ({UNKNOT}, False)
    orb, hit = r3_orbit(TREFOIL)
    assert not hit
    assert canonical_relabel(TREFOIL) in orb


def test_m_statistic():
    assert m_statistic(parse_code("1:2 3:6 5:4")) == 1
    assert m_statistic(TREFOIL) == 3
    with pytest.raises(EmptyCode):
        m_statistic(UNKNOT)


def test_r1_up_fruitless():
    with pytest.raises(FruitlessInsertion):
        apply_r1_up(UNKNOT, 1)
    with pytest.raises(FruitlessInsertion):
        apply_r1_up(TREFOIL, 40)


def test_r2_up_needs_common_face():
    segs = neighboring_segments(TREFOIL)
    assert segs
    # arcs 1 and 2 lie on different triangles and bigons
    assert (1, 2) not in segs
    with pytest.raises(NotNeighboringSegments):
        apply_r2_up(TREFOIL, (1, 2), True)


def test_canonical_arrays_matches_orbit_minimum():
    c = parse_code("1:6 3:10 5:12 7:14 9:4 11:2 13:8")
    P, O, _ = arrays_of(c)
    _, CP, CO, _ = canonical_arrays(P, O)
    assert code_of(CP, CO) == canonical_relabel(c)


# properties --------------------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(codes(3, 7))
def test_canonical_arrays_agree(c):
    P, O, _ = arrays_of(c)
    _, CP, CO, _ = canonical_arrays(P, O)
    assert code_of(CP, CO) == canonical_relabel(c)


@settings(max_examples=80, deadline=None)
@given(realizable_codes(3, 6))
def test_r3_self_inverse(c):
    for site in r3_sites(c):
        d = apply_r3(c, site)
        assert any(apply_r3(d, t) == c for t in r3_sites(d))


@settings(max_examples=60, deadline=None)
@given(realizable_codes(1, 5), st.data())
def test_r1_up_then_down(c, data):
    spots = [i for i in fruitful_r1_positions(c) if i >= 2]
    assume(spots)
    i = data.draw(st.sampled_from(spots))
    for over_first in (True, False):
        try:
            d = apply_r1_up(c, i, over_first)
        except FruitlessInsertion:
            continue
        pair = (i, i + 1) if over_first else (i + 1, i)
        assert pair in d.pairs
        assert apply_r1_down(d, pair) == c


@settings(max_examples=60, deadline=None)
@given(realizable_codes(1, 4), st.data(), st.booleans())
def test_r2_up_then_down(c, data, over_first):
    segs = neighboring_segments(c)
    assume(segs)
    seg = data.draw(st.sampled_from(segs))
    d = apply_r2_up(c, seg, over_first)
    assert d.n == c.n + 2
    assert is_realizable(d)
    back = []
    for site in r2_sites(d):
        try:
            back.append(apply_r2_down(d, site))
        except SiteNotFound:
            pass
    assert c in back


@settings(max_examples=60, deadline=None)
@given(codes(1, 7))
def test_m_is_one_with_kink(c):
    if r1_site(c) is not None:
        assert m_statistic(c) == 1
    assert 1 <= m_statistic(c) <= c.n


def test_kink_chain_unknot():
    c = PairCode(tuple((2 * i - 1, 2 * i) for i in range(1, 5)))
    assert simplify(c) == UNKNOT
