"""Knots as closed self-avoiding polygons on the cubic lattice.

A polygon is a word over ``1..6``: letters 1, 2, 3 step along +x, +y, +z
and 4, 5, 6 along -z, -y, -x, so ``7 - a`` is the reverse of ``a``.  Two
moves preserve the knot type as long as the polygon stays self-avoiding:
swapping two neighbouring letters, and inserting (or removing) a letter
``d`` before and ``7 - d`` after a letter.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .codes import PairCode

STEPS = {
    1: (1, 0, 0),
    2: (0, 1, 0),
    3: (0, 0, 1),
    4: (0, 0, -1),
    5: (0, -1, 0),
    6: (-1, 0, 0),
}
UNIT_SQUARE = (1, 2, 6, 5)
TREFOIL_24 = (1, 1, 1, 2, 2, 3, 6, 6, 5, 5, 5, 4, 4, 1, 2, 2, 3, 3, 3, 6, 6, 5, 4, 4)

Word = tuple


class AlphabetError(ValueError):
    pass


class IrregularProjection(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    reason: str
    start: int = 0
    stop: int = 0

    def __str__(self) -> str:
        if self.stop > self.start:
            return f"{self.reason} at letters {self.start + 1}..{self.stop}"
        return self.reason


def parse_word(text: str) -> Word:
    parts = [p.strip() for p in text.replace(" ", ",").split(",") if p.strip()]
    try:
        word = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise AlphabetError(f"not a digit list: {text!r}") from exc
    check_alphabet(word)
    return word


def format_word(word: Sequence[int]) -> str:
    return ",".join(str(a) for a in word)


def check_alphabet(word: Sequence[int]) -> None:
    bad = [a for a in word if a not in STEPS]
    if bad:
        raise AlphabetError(f"letters outside 1..6: {bad}")


def vertices(word: Sequence[int]) -> list[tuple[int, int, int]]:
    """Visited points, starting at the origin (closing point included)."""
    x = y = z = 0
    out = [(0, 0, 0)]
    for a in word:
        dx, dy, dz = STEPS[a]
        x, y, z = x + dx, y + dy, z + dz
        out.append((x, y, z))
    return out


def validate_polygon(word: Sequence[int]) -> Optional[Violation]:
    """None for a valid polygon, else the first violation found."""
    check_alphabet(word)
    n = len(word)
    if n < 4:
        return Violation(f"length {n} is below the minimal closed polygon")
    pts = vertices(word)
    if pts[-1] != (0, 0, 0):
        counts = {a: word.count(a) for a in STEPS}
        return Violation(
            "unbalanced letters: "
            + ", ".join(f"#{a}={counts[a]} vs #{7 - a}={counts[7 - a]}" for a in (1, 2, 3) if counts[a] != counts[7 - a])
        )
    first: dict[tuple[int, int, int], int] = {}
    for k, p in enumerate(pts[:-1]):
        if p in first:
            return Violation("balanced proper sub-word", first[p], k)
        first[p] = k
    return None


def is_valid(word: Sequence[int]) -> bool:
    return validate_polygon(word) is None


# moves ---------------------------------------------------------------------------

def exchange(word: Sequence[int], k: int) -> Optional[Word]:
    """Swap letters ``k`` and ``k+1`` (0-based, cyclic) if the result is valid."""
    n = len(word)
    w = list(word)
    k1 = (k + 1) % n
    w[k], w[k1] = w[k1], w[k]
    w = tuple(w)
    return w if is_valid(w) else None


def pair_create(word: Sequence[int], k: int, d: int) -> Optional[Word]:
    """Insert ``d`` before letter ``k`` and ``7 - d`` after it."""
    if d not in STEPS:
        raise AlphabetError(f"letter {d} outside 1..6")
    w = tuple(word[:k]) + (d, word[k], 7 - d) + tuple(word[k + 1:])
    return w if is_valid(w) else None


def pair_annihilate(word: Sequence[int], k: int) -> Optional[Word]:
    """Drop letters ``k`` and ``k+2`` (cyclic) when they are reverses of each other."""
    n = len(word)
    if n < 6:
        return None
    k2 = (k + 2) % n
    if word[k2] != 7 - word[k]:
        return None
    # dropping both letters keeps the cyclic order of the rest
    w = tuple(a for i, a in enumerate(word) if i not in (k, k2))
    return w if is_valid(w) else None


def rotation_min(word: Sequence[int]) -> Word:
    word = tuple(word)
    return min(word[k:] + word[:k] for k in range(len(word))) if word else word


def preference_key(word: Sequence[int]) -> tuple:
    return (len(word), tuple(word))


def preferred(a: Sequence[int], b: Sequence[int]) -> Word:
    """Shorter word wins; ties go to the lexicographically smaller one."""
    a, b = rotation_min(a), rotation_min(b)
    return a if preference_key(a) <= preference_key(b) else b


def neighbours(word: Word, length_budget: int) -> Iterator[Word]:
    n = len(word)
    for k in range(n):
        w = exchange(word, k)
        if w is not None:
            yield w
        w = pair_annihilate(word, k)
        if w is not None:
            yield w
    if n + 2 <= length_budget:
        for k in range(n):
            for d in STEPS:
                if d in (word[k], 7 - word[k]):
                    continue
                w = pair_create(word, k, d)
                if w is not None:
                    yield w


@dataclass(frozen=True)
class LatticeReduction:
    word: Word
    steps: int
    exhausted: bool


def reduce_lattice(word: Sequence[int], length_budget: Optional[int] = None,
                   step_budget: int = 20_000) -> LatticeReduction:
    """Best-first search for the preferred equivalent word.

    ``exhausted`` is True when the step budget ran out before the reachable
    set (within ``length_budget`` letters) was closed.
    """
    start = rotation_min(word)
    if validate_polygon(start) is not None:
        raise ValueError(f"invalid polygon {format_word(start)}")
    if length_budget is None:
        length_budget = len(start)
    best = start
    seen = {start}
    heap = [(preference_key(start), start)]
    steps = 0
    while heap:
        if steps >= step_budget:
            return LatticeReduction(best, steps, True)
        _, w = heapq.heappop(heap)
        steps += 1
        for v in neighbours(w, length_budget):
            v = rotation_min(v)
            if v in seen:
                continue
            seen.add(v)
            if preference_key(v) < preference_key(best):
                best = v
            heapq.heappush(heap, (preference_key(v), v))
    return LatticeReduction(best, steps, False)


# projection ----------------------------------------------------------------------

AXES = {"x": 0, "y": 1, "z": 2}


def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def project_arrays(word: Sequence[int], axis: str = "z"):
    """Regular projection as ``(P, O, E)`` arrays (0-based labels).

    The polygon is sheared slightly before projecting along ``axis``: with
    ``K`` above the coordinate span, ``(u, v, h) -> (K^2 u + K h, K^2 v + h)``.
    Distinct lattice edges then never overlap, touch or meet three at a point.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of x, y, z, not {axis!r}")
    if validate_polygon(word) is not None:
        raise ValueError(f"invalid polygon {format_word(word)}")
    a = AXES[axis]
    u_i, v_i = [i for i in range(3) if i != a]
    pts = vertices(word)[:-1]
    span = max(max(p[i] for p in pts) - min(p[i] for p in pts) for i in range(3))
    K = 2 * span + 3
    flat = [(K * K * p[u_i] + K * p[a], K * K * p[v_i] + p[a]) for p in pts]
    height = [p[a] for p in pts]
    n = len(pts)
    segs = [(flat[i], flat[(i + 1) % n]) for i in range(n)]
    hits: list[list[tuple[Fraction, int]]] = [[] for _ in range(n)]
    crossings = []
    for i, j in _candidate_pairs(pts, u_i, v_i):
        p1, p2 = segs[i]
        q1, q2 = segs[j]
        o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
        o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
        if 0 in (o1, o2, o3, o4):
            if _touches(p1, p2, q1, q2, o1, o2, o3, o4):
                raise IrregularProjection(f"edges {i} and {j} meet degenerately")
            continue
        if o1 == o2 or o3 == o4:
            continue
        d = (p2[0] - p1[0]) * (q2[1] - q1[1]) - (p2[1] - p1[1]) * (q2[0] - q1[0])
        t = Fraction((q1[0] - p1[0]) * (q2[1] - q1[1]) - (q1[1] - p1[1]) * (q2[0] - q1[0]), d)
        s = Fraction((q1[0] - p1[0]) * (p2[1] - p1[1]) - (q1[1] - p1[1]) * (p2[0] - p1[0]), d)
        hi = height[i] + t * (height[(i + 1) % n] - height[i])
        hj = height[j] + s * (height[(j + 1) % n] - height[j])
        if hi == hj:
            raise IrregularProjection(f"edges {i} and {j} intersect in space")
        c = len(crossings)
        # cross sign of the two projected directions
        dp = (p2[0] - p1[0], p2[1] - p1[1])
        dq = (q2[0] - q1[0], q2[1] - q1[1])
        cross = dp[0] * dq[1] - dp[1] * dq[0]
        crossings.append((i, j, hi > hj, 1 if cross > 0 else -1))
        hits[i].append((t, c))
        hits[j].append((s, c))
    m = 2 * len(crossings)
    seq = []
    for i in range(n):
        for _, c in sorted(hits[i]):
            seq.append((i, c))
    P = [0] * m
    O = [False] * m
    E = [0] * m
    first: dict[int, int] = {}
    for label, (edge, c) in enumerate(seq):
        i, j, i_over, sign = crossings[c]
        on_i = edge == i
        O[label] = i_over if on_i else not i_over
        E[label] = sign if on_i else -sign
        if c in first:
            P[label] = first[c]
            P[first[c]] = label
        else:
            first[c] = label
    return tuple(P), tuple(O), tuple(E)


def _candidate_pairs(pts, u_i: int, v_i: int) -> list[tuple[int, int]]:
    """Non-adjacent edge pairs whose unsheared shadows share a lattice point.

    The shear moves every edge by less than half a lattice unit, so no other
    pair can meet in the projection.
    """
    n = len(pts)
    at: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for q in {(a[u_i], a[v_i]), (b[u_i], b[v_i])}:
            at.setdefault(q, []).append(i)
    out = set()
    for edges in at.values():
        for x in range(len(edges)):
            for y in range(x + 1, len(edges)):
                i, j = edges[x], edges[y]
                if i > j:
                    i, j = j, i
                if j - i >= 2 and not (i == 0 and j == n - 1):
                    out.add((i, j))
    return sorted(out)


def _touches(p1, p2, q1, q2, o1, o2, o3, o4) -> bool:
    """Whether segments with some zero orientation actually meet."""

    def on(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    return ((o1 == 0 and on(p1, p2, q1)) or (o2 == 0 and on(p1, p2, q2))
            or (o3 == 0 and on(q1, q2, p1)) or (o4 == 0 and on(q1, q2, p2)))


def project_to_code(word: Sequence[int], axis: str = "z") -> PairCode:
    """Pair code of the projected polygon, label 1 on the left."""
    P, O, _ = project_arrays(word, axis)
    pairs = [(x + 1, P[x] + 1) for x in range(len(P)) if O[x]]
    if pairs and not O[0]:
        pairs = [(b, a) for a, b in pairs]
    return PairCode(tuple(sorted(pairs)))


def knot_of_polygon(word: Sequence[int], axis: str = "z", up_budget: int = 1) -> PairCode:
    """Project, then simplify the diagram to its preferred name."""
    from .enumerate import simplify_arrays

    P, O, E = project_arrays(word, axis)
    if len(P) <= 4:
        return PairCode(())
    return simplify_arrays(P, O, E, up_budget)


# small polygon sweep -------------------------------------------------------------

def iter_polygons(length: int) -> Iterator[Word]:
    """Every polygon of the given length once, up to translation and direction.

    The walk starts at its lexicographically smallest vertex, and of the two
    directions the one whose first letter beats the reversed last is kept.
    """
    if length < 4 or length % 2:
        return
    word = [0] * length
    visited = {(0, 0, 0)}

    def rec(k, x, y, z):
        remaining = length - k
        if remaining == 0:
            return
        for a in range(1, 7):
            if k == 0 and a > 3:
                break
            dx, dy, dz = STEPS[a]
            nx, ny, nz = x + dx, y + dy, z + dz
            dist = abs(nx) + abs(ny) + abs(nz)
            if remaining == 1:
                if dist == 0 and word[0] < 7 - a:
                    word[k] = a
                    yield tuple(word)
                continue
            if dist > remaining - 1 or dist == 0:
                continue
            if (nx, ny, nz) < (0, 0, 0) or (nx, ny, nz) in visited:
                continue
            visited.add((nx, ny, nz))
            word[k] = a
            yield from rec(k + 1, nx, ny, nz)
            visited.discard((nx, ny, nz))

    yield from rec(0, 0, 0, 0)


def crossing_free(word: Sequence[int]) -> bool:
    """True when no vertical column is entered twice along the polygon.

    Projected along z, the drawing then has no crossings at all.
    """
    pts = vertices(word)[:-1]
    entered: set[tuple[int, int]] = set()
    for k, (x, y, _) in enumerate(pts):
        px, py, _ = pts[k - 1]
        if (px, py) != (x, y):
            if (x, y) in entered:
                return False
            entered.add((x, y))
    return True


@dataclass
class SweepResult:
    polygons: int = 0
    crossing_free: int = 0
    few_crossings: int = 0
    simplified: int = 0
    knotted: list = None

    def __post_init__(self):
        if self.knotted is None:
            self.knotted = []


def sweep(max_length: int = 14, axis: str = "z") -> dict[int, SweepResult]:
    """Project and simplify every polygon up to ``max_length`` edges.

    Diagrams with at most two crossings are unknots outright; the rest go
    through the full simplifier.  Any polygon not reaching the unknot is
    listed in ``knotted``.
    """
    from .enumerate import simplify_arrays

    out = {}
    for length in range(4, max_length + 1, 2):
        res = SweepResult()
        for word in iter_polygons(length):
            res.polygons += 1
            if crossing_free(word):
                res.crossing_free += 1
                continue
            P, O, E = project_arrays(word, axis)
            if len(P) <= 4:
                res.few_crossings += 1
                continue
            res.simplified += 1
            if simplify_arrays(P, O, E).n:
                res.knotted.append(word)
        out[length] = res
    return out
