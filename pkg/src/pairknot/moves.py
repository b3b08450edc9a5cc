"""Reidemeister moves acting on names.

Internally a diagram is a triple of tuples indexed by 0-based label:
``P`` (partner label), ``O`` (True where the label is the overcrossing) and
``E`` (rotation sign, see :mod:`pairknot.planarity`; may be None when the
planar structure is not needed).  Upward second moves need ``E`` to know
which arcs share a face; every other move only permutes or drops entries.

The public functions take and return :class:`~pairknot.codes.PairCode`
with 1-based labels.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .codes import PairCode, canonical_relabel, wrap
from .planarity import Shadow, find_embedding, is_planar_embedding, trace_faces


class MoveError(ValueError):
    pass


class SiteNotFound(MoveError):
    pass


class InconsistentRoles(MoveError):
    pass


class FruitlessInsertion(MoveError):
    pass


class NotNeighboringSegments(MoveError):
    pass


class EmptyCode(MoveError):
    pass


Arrays = tuple  # (P, O, E)


# conversions -----------------------------------------------------------------

def arrays_of(code: PairCode, with_signs: bool = False) -> Arrays:
    m = 2 * code.n
    P = [0] * m
    O = [False] * m
    for a, b in code.pairs:
        P[a - 1] = b - 1
        P[b - 1] = a - 1
        O[a - 1] = True
    P = tuple(P)
    E = find_embedding(P) if with_signs else None
    return P, tuple(O), E


def code_of(P: Sequence[int], O: Sequence[bool]) -> PairCode:
    pairs = [(x + 1, P[x] + 1) for x in range(len(P)) if O[x]]
    if pairs and not O[0]:
        pairs = [(b, a) for a, b in pairs]
    return PairCode(tuple(sorted(pairs)))


def _tokens(P, O, E):
    return [(min(x, P[x]), O[x], E[x] if E is not None else 0) for x in range(len(P))]


def _rebuild(tokens, with_signs: bool) -> Arrays:
    m = len(tokens)
    P = [0] * m
    first: dict = {}
    for x, (cid, _, _) in enumerate(tokens):
        if cid in first:
            y = first.pop(cid)
            P[x] = y
            P[y] = x
        else:
            first[cid] = x
    O = tuple(t[1] for t in tokens)
    E = tuple(t[2] for t in tokens) if with_signs else None
    return tuple(P), O, E


# canonical form ----------------------------------------------------------------

def canonical_arrays(P, O, E=None):
    """Preferred relabeling of a diagram.

    Returns ``(key, P, O, E)`` where ``key`` is the ``f`` sequence followed
    by the ``g`` bits, and ``E`` (if given) is normalised so ``E[0] = +1``.
    Candidate relabelings are compared entry by entry and dropped as soon as
    they fall behind.
    """
    m = len(P)
    n = m // 2
    if m == 0:
        return (), P, O, E
    # a relabeling is (k, s): old label x becomes (s*x + k) % m, s = +1 or -1
    best_key = None
    winners = []
    for s in (1, -1):
        for k in range(m):
            f = []
            # old label carrying new label y is s*(y - k) % m
            behind = False
            ahead = best_key is None
            for i in range(n):
                x = (s * (2 * i - k)) % m
                v = ((s * P[x] + k) % m + 1) // 2
                if not ahead:
                    b = best_key[i]
                    if v > b:
                        behind = True
                        break
                    if v < b:
                        ahead = True
                f.append(v)
            if behind:
                continue
            x0 = (-s * k) % m
            flip = not O[x0]
            g = [0 if O[(s * (2 * i - k)) % m] != flip else 1 for i in range(n)]
            key = tuple(f) + tuple(g)
            if best_key is None or key < best_key:
                best_key = key
                winners = [(k, s)]
            elif key == best_key:
                winners.append((k, s))
    best = None
    for k, s in winners:
        NP = [0] * m
        NO = [False] * m
        flip = not O[(-s * k) % m]
        for x in range(m):
            y = (s * x + k) % m
            NP[y] = (s * P[x] + k) % m
            NO[y] = O[x] != flip
        NE = None
        if E is not None:
            NE = [0] * m
            for x in range(m):
                NE[(s * x + k) % m] = E[x]
            if NE[0] < 0:
                NE = [-e for e in NE]
            NE = tuple(NE)
        # symmetric names tie on the key; the signs break the tie
        if best is None or (NE is not None and NE < best[3]):
            best = (best_key, tuple(NP), tuple(NO), NE)
    return best


# sites -----------------------------------------------------------------------------

def r1_sites_arr(P) -> list[int]:
    """Labels ``x`` with ``P[x] == x+1`` (mod m)."""
    m = len(P)
    return [x for x in range(m) if P[x] == (x + 1) % m]


def r2_sites_arr(P, O) -> list[tuple[int, int]]:
    """Consecutive labels ``x, x+1`` whose partners are adjacent with equal roles."""
    m = len(P)
    out = []
    for x in range(m):
        x1 = (x + 1) % m
        y, y1 = P[x], P[x1]
        if O[x] != O[x1] or y == x1:
            continue
        if (y1 - y) % m in (1, m - 1):
            out.append((x, x1))
    return out


def r3_sites_arr(P, O) -> list[tuple[tuple[int, int], tuple[int, int], tuple[int, int]]]:
    """Triangles whose strand roles are transitive.

    A site is three strands ``((x, x+1), (a, c1), (b, c2))`` where ``x, a``
    share a crossing, ``x+1, b`` share one and ``c1, c2`` share the third.
    """
    m = len(P)
    seen = set()
    out = []
    for x in range(m):
        x1 = (x + 1) % m
        a, b = P[x], P[x1]
        if a == x1:
            continue
        for da in (1, m - 1):
            c1 = (a + da) % m
            for db in (1, m - 1):
                c2 = (b + db) % m
                if P[c1] != c2:
                    continue
                labels = {x, x1, a, b, c1, c2}
                if len(labels) != 6:
                    continue
                if O[x] == O[c1] and O[x] != O[x1]:
                    # S1 > S2 > S3 > S1 or the reverse: no top strand
                    continue
                # the same six labels can carry two different triangles
                key = frozenset((frozenset((x, x1)), frozenset((a, c1)), frozenset((b, c2))))
                if key in seen:
                    continue
                seen.add(key)
                out.append(((x, x1), (a, c1), (b, c2)))
    return out


# move application ------------------------------------------------------------------

def drop_labels(P, O, E, labels) -> Arrays:
    keep = [x for x in range(len(P)) if x not in labels]
    index = {x: i for i, x in enumerate(keep)}
    NP = tuple(index[P[x]] for x in keep)
    NO = tuple(O[x] for x in keep)
    NE = tuple(E[x] for x in keep) if E is not None else None
    return NP, NO, NE


def r3_arr(P, O, E, site) -> Arrays:
    """Slide one strand across the crossing of the other two.

    Along each strand the two crossings swap, so every label takes the role
    (and rotation sign) of its neighbour on the same strand.
    """
    (x, x1), (a, c1), (b, c2) = site
    NP = list(P)
    NO = list(O)
    NE = list(E) if E is not None else None
    NP[x], NP[c2] = c2, x
    NP[x1], NP[c1] = c1, x1
    NP[a], NP[b] = b, a
    for u, v in ((x, x1), (a, c1), (b, c2)):
        NO[u], NO[v] = O[v], O[u]
        if NE is not None:
            NE[u], NE[v] = E[v], E[u]
    return tuple(NP), tuple(NO), tuple(NE) if NE is not None else None


def r3_planar_arr(P, O, E, site) -> Optional[Arrays]:
    """Third move on a drawn diagram; None unless the triangle is a face."""
    NP, NO, NE = r3_arr(P, O, E, site)
    if not is_planar_embedding(NP, NE):
        return None
    return NP, NO, NE


def r1_up_arr(P, O, E, x, over_first: bool, side: int = 1) -> Arrays:
    """Insert a kink on the arc leaving label ``x`` (x = -1: before label 0)."""
    tokens = _tokens(P, O, E)
    cid = ("k",)
    kink = [(cid, over_first, side), (cid, not over_first, -side)]
    tokens[x + 1:x + 1] = kink
    return _rebuild(tokens, E is not None)


def r2_up_arr(P, O, E, a, b, sa, sb, over_first: bool) -> Arrays:
    """Push arc ``a`` across arc ``b`` inside a face they both bound.

    ``sa``/``sb`` are +1 when the face boundary runs along the arc in the
    knot's direction.  The strand of ``a`` lies over when ``over_first``.
    """
    tokens = _tokens(P, O, E)
    c1, c2 = ("p", 1), ("p", 2)
    # same boundary direction means the strands run opposite to each other
    parallel = sa != sb
    e1 = sb
    xa = [(c1, over_first, e1), (c2, over_first, -e1)]
    if parallel:
        xb = [(c1, not over_first, -e1), (c2, not over_first, e1)]
    else:
        xb = [(c2, not over_first, e1), (c1, not over_first, -e1)]
    inserts = sorted([(a, xa), (b, xb)], key=lambda t: -t[0])
    for pos, toks in inserts:
        tokens[pos + 1:pos + 1] = toks
    return _rebuild(tokens, E is not None)


def face_arc_pairs(P, E) -> Iterator[tuple[int, int, int, int]]:
    """Pairs of distinct arcs bounding a common face: ``(a, b, sa, sb)``."""
    seen = set()
    for face in trace_faces(P, E):
        arcs = [(h >> 1, 1 if h & 1 == 0 else -1) for h in face]
        for i in range(len(arcs)):
            for j in range(i + 1, len(arcs)):
                (a, sa), (b, sb) = arcs[i], arcs[j]
                if a == b:
                    continue
                if a > b:
                    a, b, sa, sb = b, a, sb, sa
                key = (a, b, sa, sb)
                if key in seen:
                    continue
                seen.add(key)
                yield key


def new_crossing_in_r3(P, O, labels) -> bool:
    return any(labels & {u for strand in site for u in strand} for site in r3_sites_arr(P, O))


# PairCode-level API --------------------------------------------------------------

@dataclass(frozen=True)
class R3Site:
    """Three strands ``(i, i')``, ``(j, j')``, ``(k, k')`` of a triangle (1-based)."""

    strands: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]

    @property
    def pairs(self) -> tuple[tuple[int, int], tuple[int, int], tuple[int, int]]:
        (x, x1), (a, c1), (b, c2) = self.strands
        return (x, a), (x1, b), (c1, c2)

    def to0(self):
        return tuple(tuple(u - 1 for u in s) for s in self.strands)


def _pair_of(code: PairCode, label: int) -> tuple[int, int]:
    for a, b in code.pairs:
        if label in (a, b):
            return a, b
    raise SiteNotFound(label)


def r1_site(code: PairCode) -> Optional[tuple[int, int]]:
    P, _, _ = arrays_of(code)
    sites = r1_sites_arr(P)
    if not sites:
        return None
    return _pair_of(code, sites[0] + 1)


def r2_site(code: PairCode) -> Optional[tuple[tuple[int, int], tuple[int, int]]]:
    P, O, _ = arrays_of(code)
    sites = r2_sites_arr(P, O)
    if not sites:
        return None
    x, x1 = sites[0]
    return _pair_of(code, x + 1), _pair_of(code, x1 + 1)


def r3_sites(code: PairCode) -> list[R3Site]:
    P, O, _ = arrays_of(code)
    return [R3Site(tuple(tuple(u + 1 for u in s) for s in site)) for site in r3_sites_arr(P, O)]


def apply_r1_down(code: PairCode, site: tuple[int, int]) -> PairCode:
    if site not in code.pairs:
        raise SiteNotFound(site)
    a, b = site
    m = 2 * code.n
    if (b - a) % m not in (1, m - 1):
        raise SiteNotFound(f"{site} is not a kink")
    P, O, _ = arrays_of(code)
    P, O, _ = drop_labels(P, O, None, {a - 1, b - 1})
    return code_of(P, O)


def apply_r2_down(code: PairCode, site) -> PairCode:
    p, q = site
    if p not in code.pairs or q not in code.pairs:
        raise SiteNotFound(site)
    P, O, _ = arrays_of(code)
    ends = {p[0] - 1, p[1] - 1, q[0] - 1, q[1] - 1}
    if len(ends) != 4 or not any({x, x1} <= ends for x, x1 in r2_sites_arr(P, O)):
        raise SiteNotFound(site)
    P, O, _ = drop_labels(P, O, None, ends)
    return code_of(P, O)


def apply_r3(code: PairCode, site: R3Site) -> PairCode:
    P, O, _ = arrays_of(code)
    m = len(P)
    s0 = site.to0()
    (x, x1), (a, c1), (b, c2) = s0
    if m < 6 or len({x, x1, a, b, c1, c2}) != 6 or not all(0 <= u < m for u in (x, x1, a, b, c1, c2)):
        raise SiteNotFound(site)
    adjacent = all((v - u) % m in (1, m - 1) for u, v in s0)
    if not adjacent or P[x] != a or P[x1] != b or P[c1] != c2:
        raise SiteNotFound(site)
    if O[x] == O[c1] and O[x] != O[x1]:
        raise InconsistentRoles(f"triangle {site.pairs} has no top strand")
    P, O, _ = r3_arr(P, O, None, s0)
    return code_of(P, O)


def r3_orbit(code: PairCode, max_size: int = 20_000) -> tuple[set[PairCode], bool]:
    """Canonical names reachable by third moves; second item flags a budget hit."""
    start = canonical_relabel(code)
    P, O, _ = arrays_of(start)
    seen = {start}
    frontier = [(P, O)]
    while frontier:
        nxt = []
        for P, O in frontier:
            for site in r3_sites_arr(P, O):
                NP, NO, _ = r3_arr(P, O, None, site)
                _, CP, CO, _ = canonical_arrays(NP, NO)
                c = code_of(CP, CO)
                if c in seen:
                    continue
                if len(seen) >= max_size:
                    return seen, True
                seen.add(c)
                nxt.append((CP, CO))
        frontier = nxt
    return seen, False


def m_statistic(code: PairCode) -> int:
    """Smallest circular gap between companions, or between neighbours' companions.

    A value of 1 flags a removable kink (first gap) or a removable bigon
    (second gap, counted only between labels with equal over/under roles).
    """
    n = code.n
    if n == 0:
        raise EmptyCode("M is undefined for the empty name")
    m = 2 * n
    comp = code.companions()

    def circ(u: int, v: int) -> int:
        d = (u - v) % m
        return min(d, m - d)

    a_gap = min(circ(abs(comp[i]), i) for i in range(1, m + 1))
    c_gap = m
    for i in range(1, m + 1):
        u, v = comp[i], comp[wrap(i + 1, m)]
        if (u > 0) == (v > 0):
            c_gap = min(c_gap, circ(abs(u), abs(v)))
    return min(a_gap, c_gap)


def apply_r1_up(code: PairCode, i: int, over_first: bool = True) -> PairCode:
    """Insert the pair ``(i, i+1)``; labels ``>= i`` move up by two.

    Rejected unless the new crossing takes part in some third move.
    """
    m = 2 * code.n
    if not 1 <= i <= m + 1:
        raise FruitlessInsertion(f"position {i} outside 1..{m + 1}")
    P, O, _ = arrays_of(code)
    NP, NO, _ = r1_up_arr(P, O, None, i - 2, over_first)
    if not new_crossing_in_r3(NP, NO, {i - 1, i}):
        raise FruitlessInsertion(f"kink at {i} enables no third move")
    return code_of(NP, NO)


def fruitful_r1_positions(code: PairCode) -> list[int]:
    out = []
    for i in range(1, 2 * code.n + 1):
        for over_first in (True, False):
            try:
                apply_r1_up(code, i, over_first)
            except FruitlessInsertion:
                continue
            out.append(i)
            break
    return out


def apply_r2_up(code: PairCode, seg_pair: tuple[int, int], over_first: bool) -> PairCode:
    """Push arc ``seg_pair[0]`` over (or under) arc ``seg_pair[1]``.

    Arcs are named by their tail label; both must bound a common face.
    """
    P, O, E = arrays_of(code, with_signs=True)
    if E is None:
        raise NotNeighboringSegments("name is not realizable")
    a, b = (s - 1 for s in seg_pair)
    for fa, fb, sa, sb in face_arc_pairs(P, E):
        if (fa, fb) == (a, b):
            NP, NO, _ = r2_up_arr(P, O, E, a, b, sa, sb, over_first)
            return code_of(NP, NO)
        if (fa, fb) == (b, a):
            NP, NO, _ = r2_up_arr(P, O, E, b, a, sb, sa, not over_first)
            return code_of(NP, NO)
    raise NotNeighboringSegments(f"arcs {seg_pair} share no face")


def neighboring_segments(code: PairCode) -> list[tuple[int, int]]:
    P, _, E = arrays_of(code, with_signs=True)
    if E is None:
        return []
    return sorted({(a + 1, b + 1) for a, b, _, _ in face_arc_pairs(P, E)})


def shadow_of(code: PairCode) -> Shadow:
    return Shadow.of(code)
