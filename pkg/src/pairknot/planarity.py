"""Realizability of shadows on the sphere.

A shadow forgets over/under and keeps only the pairing ``h`` of labels.
Its drawing is a 4-valent graph: one vertex per crossing and one edge per
unit arc ``i -> i+1``.  A *loop* is a simple cycle of that graph; at each of
its vertices it either goes straight through or turns (a "corner").  Two
loops that share no arc must cross an even number of times, counting only
vertices that both pass straight through.  A shadow is realizable exactly
when no pair of loops violates this.

The module also computes a rotation system (which way the second strand
crosses the first at every vertex) by face tracing.  Moves that add
crossings need it to know which arcs bound a common face.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Sequence

from .codes import PairCode, wrap

log = logging.getLogger(__name__)

DEFAULT_LOOP_CAP = 200_000


class SharedSegment(ValueError):
    pass


class LoopCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Shadow:
    """Involution on labels ``1..2n``; ``h[i-1]`` is the partner of ``i``."""

    h: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.h) // 2

    def partner(self, i: int) -> int:
        m = len(self.h)
        return self.h[wrap(i, m) - 1]

    @classmethod
    def of(cls, code: PairCode) -> "Shadow":
        p = code.partner()
        return cls(tuple(p[i] for i in range(1, 2 * code.n + 1)))

    @classmethod
    def from_pairs(cls, pairs) -> "Shadow":
        pairs = list(pairs)
        h = [0] * (2 * len(pairs))
        for a, b in pairs:
            h[a - 1] = b
            h[b - 1] = a
        return cls(tuple(h))

    @classmethod
    def from_f(cls, f: Sequence[int]) -> "Shadow":
        return cls.from_pairs((2 * i - 1, 2 * j) for i, j in enumerate(f, start=1))

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.h, start=1) if i < j]

    def f(self) -> tuple[int, ...]:
        return tuple(self.h[2 * i] // 2 for i in range(self.n))

    def relabel(self, k: int, reverse: bool = False) -> "Shadow":
        m = len(self.h)
        if m == 0:
            return self
        h = [0] * m
        for i, j in enumerate(self.h, start=1):
            a, b = (wrap(k - i, m), wrap(k - j, m)) if reverse else (wrap(k + i, m), wrap(k + j, m))
            h[a - 1] = b
        return Shadow(tuple(h))

    def crossing_of(self) -> list[int]:
        """Crossing index (0-based, by smaller label) for every label."""
        ids: dict[int, int] = {}
        out = []
        for i, j in enumerate(self.h, start=1):
            c = ids.setdefault(min(i, j), len(ids))
            out.append(c)
        return out


@dataclass(frozen=True)
class Loop:
    """A simple closed walk on the shadow graph.

    ``corners`` name the crossings where the walk turns, each by the label
    whose incoming arc the loop uses (the smaller label if both or neither); ``arcs`` holds the tail label ``i`` of every unit arc
    ``i -> i+1`` used; ``through`` holds labels passed straight.
    """

    corners: tuple[int, ...]
    arcs: frozenset[int]
    through: frozenset[int]
    arc_mask: int = field(repr=False, compare=False)
    straight_mask: int = field(repr=False, compare=False)

    def closes(self, shadow: Shadow) -> bool:
        """Walk the corners and check that the arcs form one closed loop."""
        m = 2 * shadow.n
        if not self.arcs:
            return False
        deg: dict[int, int] = {}
        for a in self.arcs:
            for lab in (a, wrap(a + 1, m)):
                deg[lab] = deg.get(lab, 0) + 1
        for lab, d in deg.items():
            partner = shadow.partner(lab)
            if lab in self.through:
                if d != 2 or partner in deg:
                    return False
            elif d != 1 or deg.get(partner) != 1:
                return False
        return True


def _halves(x: int, m: int) -> tuple[int, int]:
    """(incoming, outgoing) half-edge ids at label ``x`` (0-based)."""
    return 2 * ((x - 1) % m) + 1, 2 * x


def _shadow_arrays(shadow: Shadow):
    m = len(shadow.h)
    partner0 = [j - 1 for j in shadow.h]
    vid = shadow.crossing_of()
    return m, partner0, vid


@lru_cache(maxsize=4096)
def _loops_cached(shadow: Shadow, cap: int) -> tuple[Loop, ...]:
    m, partner0, vid = _shadow_arrays(shadow)
    n = m // 2
    if n == 0:
        return ()
    # half-edge h: edge h >> 1, end h & 1 (0 = tail at label e, 1 = head at e+1)
    half_label = [(h >> 1) + (h & 1) for h in range(2 * m)]
    half_label = [x % m for x in half_label]
    vertex_halves: list[list[int]] = [[] for _ in range(n)]
    for x in range(m):
        hin, hout = _halves(x, m)
        vertex_halves[vid[x]].extend((hin, hout))
    found: dict[int, list[tuple[int, int]]] = {}

    def record(path: list[tuple[int, int]]) -> None:
        mask = 0
        for hout, _hin in path:
            mask |= 1 << (hout >> 1)
        if mask not in found:
            found[mask] = list(path)
            if len(found) > cap:
                raise LoopCapExceeded(f"more than {cap} loops on shadow of size {n}")

    # path entries: (half-edge leaving a vertex, half-edge arriving at the next)
    for s in range(n):
        visited = [False] * n
        visited[s] = True
        path: list[tuple[int, int]] = []

        def extend(v: int, arrived: int, first: int) -> None:
            for hout in vertex_halves[v]:
                if hout == arrived:
                    continue
                harr = hout ^ 1
                w = vid[half_label[harr]]
                if w == s:
                    if harr != first:
                        path.append((hout, harr))
                        record(path)
                        path.pop()
                    continue
                if w < s or visited[w]:
                    continue
                visited[w] = True
                path.append((hout, harr))
                extend(w, harr, first)
                path.pop()
                visited[w] = False

        for h0 in vertex_halves[s]:
            harr = h0 ^ 1
            w = vid[half_label[harr]]
            if w == s:
                if harr != h0:
                    path.append((h0, harr))
                    record(path)
                    path.pop()
                continue
            if w < s:
                continue
            visited[w] = True
            path.append((h0, harr))
            extend(w, harr, h0)
            path.pop()
            visited[w] = False

    loops = []
    for mask, path in found.items():
        loops.append(_build_loop(path, mask, half_label, vid, m))
    loops.sort(key=lambda lp: (len(lp.corners), lp.corners, sorted(lp.arcs)))
    return tuple(loops)


def _build_loop(path, mask, half_label, vid, m) -> Loop:
    k = len(path)
    corners = []
    through = []
    straight_mask = 0
    for idx in range(k):
        arrive = path[idx - 1][1]
        leave = path[idx][0]
        la, ll = half_label[arrive], half_label[leave]
        if la == ll:
            through.append(la + 1)
            straight_mask |= 1 << vid[la]
        else:
            # name the corner by the label the knot enters along the loop
            in_a, in_l = arrive & 1, leave & 1
            if in_a != in_l:
                corners.append((la if in_a else ll) + 1)
            else:
                corners.append(min(la, ll) + 1)
    arcs = frozenset(e + 1 for e in range(m) if mask >> e & 1)
    return Loop(_normal_cycle(corners), arcs, frozenset(through), mask, straight_mask)


def _normal_cycle(seq: list[int]) -> tuple[int, ...]:
    if not seq:
        return ()
    best = None
    for s in (seq, seq[::-1]):
        for r in range(len(s)):
            cand = tuple(s[r:] + s[:r])
            if best is None or cand < best:
                best = cand
    return best


def enumerate_loops(shadow: Shadow, cap: int = DEFAULT_LOOP_CAP) -> tuple[Loop, ...]:
    """Every simple loop of the shadow, each once, in a deterministic order."""
    try:
        return _loops_cached(shadow, cap)
    except LoopCapExceeded:
        log.warning("loop cap %d hit for shadow %s", cap, shadow.h)
        raise


def loops_share_segment(a: Loop, b: Loop) -> bool:
    return bool(a.arc_mask & b.arc_mask)


def intersection_parity(a: Loop, b: Loop) -> int:
    """+1 when the loops cross an even number of times, -1 when odd.

    Shared corners are touching points and are not counted.
    """
    if loops_share_segment(a, b):
        raise SharedSegment("loops share an arc")
    return -1 if bin(a.straight_mask & b.straight_mask).count("1") % 2 else 1


def odd_pair(shadow: Shadow, cap: int = DEFAULT_LOOP_CAP) -> tuple[Loop, Loop] | None:
    """First arc-disjoint loop pair crossing an odd number of times."""
    loops = enumerate_loops(shadow, cap)
    masks = [(lp.arc_mask, lp.straight_mask) for lp in loops]
    for i, (am, sm) in enumerate(masks):
        for j in range(i + 1, len(masks)):
            bm, tm = masks[j]
            if am & bm:
                continue
            if bin(sm & tm).count("1") & 1:
                return loops[i], loops[j]
    return None


def is_realizable(shadow: Shadow | PairCode, cap: int = DEFAULT_LOOP_CAP) -> bool:
    if isinstance(shadow, PairCode):
        shadow = Shadow.of(shadow)
    if shadow.n == 0:
        return True
    return odd_pair(shadow, cap) is None


def uncrossed_loops(shadow: Shadow, cap: int = DEFAULT_LOOP_CAP) -> list[Loop]:
    """Loops that no arc-disjoint loop crosses at all.

    Every face boundary qualifies, but so do some separating loops that turn
    at every vertex; see :func:`free_loops`.
    """
    loops = enumerate_loops(shadow, cap)
    out = []
    for lp in loops:
        if all(
            lp.arc_mask & other.arc_mask or not (lp.straight_mask & other.straight_mask)
            for other in loops
            if other is not lp
        ):
            out.append(lp)
    return out


def free_loops(shadow: Shadow, cap: int = DEFAULT_LOOP_CAP) -> list[Loop]:
    """Loops leaving the rest of the curve on one side: simple face boundaries.

    Any two arcs of such a loop can be pushed across each other to create a
    bigon without producing an undrawable name.
    """
    faces = faces_of(shadow)
    if not faces:
        return []
    boundaries = {frozenset(arc for arc, _ in face) for face in faces}
    return [lp for lp in enumerate_loops(shadow, cap) if lp.arcs in boundaries]


# rotation systems -------------------------------------------------------------
#
# eps[x] (0-based label x) is the sign of d_x cross d_h(x): +1 when the strand
# through the partner label crosses from right to left.  eps[h(x)] == -eps[x].
# Half-edges: 2x is the outgoing end at label x, 2(x-1)+1 the incoming end.


def _rotation(partner0: Sequence[int], eps: Sequence[int]) -> list[int]:
    """Clockwise successor of every half-edge."""
    m = len(partner0)
    cw = [0] * (2 * m)
    for x in range(m):
        y = partner0[x]
        if x > y:
            continue
        in_x, out_x = _halves(x, m)
        in_y, out_y = _halves(y, m)
        if eps[x] > 0:
            order = (out_x, in_y, in_x, out_y)
        else:
            order = (out_x, out_y, in_x, in_y)
        for a, b in zip(order, order[1:] + order[:1]):
            cw[a] = b
    return cw


def trace_faces(partner0: Sequence[int], eps: Sequence[int]) -> list[list[int]]:
    """Face boundaries as lists of half-edges; each face lies on the left."""
    m = len(partner0)
    cw = _rotation(partner0, eps)
    seen = [False] * (2 * m)
    faces = []
    for start in range(2 * m):
        if seen[start]:
            continue
        face = []
        h = start
        while not seen[h]:
            seen[h] = True
            face.append(h)
            h = cw[h ^ 1]
        faces.append(face)
    return faces


def count_faces(partner0: Sequence[int], eps: Sequence[int]) -> int:
    m = len(partner0)
    cw = _rotation(partner0, eps)
    seen = [False] * (2 * m)
    count = 0
    for start in range(2 * m):
        if seen[start]:
            continue
        count += 1
        h = start
        while not seen[h]:
            seen[h] = True
            h = cw[h ^ 1]
    return count


def is_planar_embedding(partner0: Sequence[int], eps: Sequence[int]) -> bool:
    m = len(partner0)
    if m == 0:
        return True
    return count_faces(partner0, eps) == m // 2 + 2


def find_embedding(partner0: Sequence[int]) -> tuple[int, ...] | None:
    """A sign vector making the drawing spherical, normalised so eps[0] = +1."""
    partner0 = tuple(partner0)
    return _find_embedding(partner0)


@lru_cache(maxsize=65536)
def _find_embedding(partner0: tuple[int, ...]) -> tuple[int, ...] | None:
    m = len(partner0)
    if m == 0:
        return ()
    lows = [x for x in range(m) if x < partner0[x]]
    target = m // 2 + 2
    eps = [0] * m
    for bits in product((1, -1), repeat=len(lows) - 1):
        for x, s in zip(lows, (1,) + bits):
            eps[x] = s
            eps[partner0[x]] = -s
        if count_faces(partner0, eps) == target:
            if eps[0] < 0:
                return tuple(-e for e in eps)
            return tuple(eps)
    return None


def faces_of(shadow: Shadow) -> list[list[tuple[int, int]]] | None:
    """Faces of a realizable shadow as ``(arc tail label, direction)`` lists.

    ``direction`` is +1 when the face boundary runs along the arc in the
    orientation of the knot.  Returns None for unrealizable shadows.
    """
    partner0 = [j - 1 for j in shadow.h]
    eps = find_embedding(partner0)
    if eps is None:
        return None
    out = []
    for face in trace_faces(partner0, eps):
        out.append([((h >> 1) + 1, 1 if h & 1 == 0 else -1) for h in face])
    return out
