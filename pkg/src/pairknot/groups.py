"""Knot groups and conjugacy-class colorings.

A name gives a Wirtinger presentation: one generator per arc running from
one undercrossing to the next, one relation per crossing.  Mapping the
generators onto a conjugacy class of the symmetric group ``S_m`` so that the
relations hold, and asking whether the images generate the whole class
under mutual conjugation, yields a YES/NO answer that does not depend on
the diagram.  Differing answers prove two knots distinct.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from bisect import bisect_right
from itertools import permutations
from typing import Iterable, Iterator, Optional, Sequence

from .codes import PairCode
from .moves import arrays_of


class NotRealizable(ValueError):
    pass


class ClassTooLarge(ValueError):
    pass


DEFAULT_M_MAX = 5
HARD_M_MAX = 7

Perm = tuple


@dataclass(frozen=True)
class Relation:
    """``g[target] = g[conj]^s * g[source] * g[conj]^-s``."""

    target: int
    conj: int
    source: int
    sign: int


@dataclass(frozen=True)
class Presentation:
    generators: int
    relations: tuple[Relation, ...]
    names: tuple[int, ...] = ()  # starting under label of each arc

    def __str__(self) -> str:
        letters = "abcdefghijklmnopqrstuvwxyz"

        def name(k: int) -> str:
            return letters[k] if self.generators <= len(letters) else f"g{k + 1}"

        out = []
        for r in self.relations:
            c, s, t = name(r.conj), name(r.source), name(r.target)
            if r.sign > 0:
                out.append(f"{t}={c}{s}{c}^-1")
            else:
                out.append(f"{t}={c}^-1{s}{c}")
        return ", ".join(out)


# presentations ----------------------------------------------------------------

def arc_index(code: PairCode) -> tuple[list[int], dict[int, int]]:
    """Under labels in order, and the arc (by position) holding every label."""
    unders = sorted(b for _, b in code.pairs)
    # arc k runs from unders[k] up to the next under label; the last one wraps
    arc = {x: (bisect_right(unders, x) - 1) % len(unders) for x in range(1, 2 * code.n + 1)}
    return unders, arc


def crossing_signs(code: PairCode) -> list[int]:
    """Relation form of every pair (sorted by over label), relative to the first.

    The sign of a crossing is read off the rotation system of the drawn
    diagram; the first pair gets ``+1``.
    """
    if code.n == 0:
        return []
    P, _, E = arrays_of(code, with_signs=True)
    if E is None:
        raise NotRealizable(str(code))
    raw = [E[i - 1] for i, _ in code.pairs]
    first = raw[0]
    return [s * first for s in raw]


def wirtinger(code: PairCode) -> Presentation:
    if code.n == 0:
        return Presentation(1, (), (0,))
    unders, arc = arc_index(code)
    signs = crossing_signs(code)
    m = 2 * code.n
    rels = []
    for (i, j), s in zip(code.pairs, signs):
        target = arc[j]
        source = arc[(j - 2) % m + 1]
        # the first relation reads t = c^-1 s c
        rels.append(Relation(target, arc[i], source, -s))
    return Presentation(code.n, tuple(rels), tuple(unders))


def l_rule_factor(code: PairCode, i: int) -> int:
    """The sign rule relating the forms of the pairs holding ``i`` and ``i+1``.

    Start at -1, flip when ``i`` and ``i+1`` differ in role, and flip for
    every label strictly between ``j+1`` and ``j'-1`` (inclusive) that is
    paired with a label from ``i+2`` to ``j-1``; ``j`` and ``j'`` are the
    partners of ``i`` and ``i+1``.  +1 means equal forms.
    """
    partner = code.partner()
    comp = code.companions()
    m = 2 * code.n
    i1 = i % m + 1
    j, j2 = partner[i], partner[i1]
    L = -1
    if (comp[i] > 0) != (comp[i1] > 0):
        L = -L
    for y in range(j + 1, j2):
        if i + 2 <= partner[y] <= j - 1:
            L = -L
    return L


def l_rule_applies(code: PairCode, i: int) -> bool:
    """Whether the sign rule's layout ``i < i+1 < j < j'`` holds at ``i``."""
    partner = code.partner()
    m = 2 * code.n
    if i >= m:
        return False
    return i + 1 < partner[i] < partner[i + 1]


# partitions ----------------------------------------------------------------------

def next_partition(p: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Successor in the order running from ``(m)`` down to ``(1, ..., 1)``."""
    p = list(p)
    m = sum(p)
    sigma = max((k for k, v in enumerate(p) if v >= 2), default=None)
    if sigma is None:
        return None
    v = p[sigma] - 1
    out = p[:sigma] + [v]
    total = sum(out)
    while total + v <= m:
        out.append(v)
        total += v
    if total < m:
        out.append(m - total)
    return tuple(out)


def partitions(m: int) -> Iterator[tuple[int, ...]]:
    p: Optional[tuple[int, ...]] = (m,)
    while p is not None:
        yield p
        p = next_partition(p)


def partition_text(p: Sequence[int]) -> str:
    return "+".join(str(v) for v in p)


# permutations ----------------------------------------------------------------------

def compose(a: Perm, b: Perm) -> Perm:
    """``(a*b)(x) = a(b(x))``."""
    return tuple(a[x] for x in b)


def invert(a: Perm) -> Perm:
    out = [0] * len(a)
    for x, y in enumerate(a):
        out[y] = x
    return tuple(out)


def cycle_type(a: Perm) -> tuple[int, ...]:
    seen = [False] * len(a)
    lengths = []
    for s in range(len(a)):
        if seen[s]:
            continue
        k = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = a[x]
            k += 1
        lengths.append(k)
    return tuple(sorted(lengths, reverse=True))


def conjugacy_class(p: Sequence[int]) -> list[Perm]:
    return list(_class(tuple(p)))


@lru_cache(maxsize=None)
def _class(p: tuple[int, ...]) -> tuple[Perm, ...]:
    m = sum(p)
    return tuple(a for a in permutations(range(m)) if cycle_type(a) == p)


@lru_cache(maxsize=None)
def _centralizer(p: tuple[int, ...]) -> tuple[Perm, ...]:
    r = representative(p)
    return tuple(z for z in permutations(range(sum(p))) if compose(z, r) == compose(r, z))


def _conj(z: Perm, q: Perm) -> Perm:
    return compose(compose(z, q), invert(z))


def representative(p: Sequence[int]) -> Perm:
    out = list(range(sum(p)))
    start = 0
    for length in p:
        for k in range(length):
            out[start + k] = start + (k + 1) % length
        start += length
    return tuple(out)


def conjugation_closure(perms: Iterable) -> set:
    """Close a set under ``q -> p q p^-1`` and ``q -> p^-1 q p``.

    Every member is a conjugate of the seeds by the group they generate, so
    conjugating by the seeds alone reaches the same set.
    """
    seeds = list(set(perms))
    movers = [(p, invert(p)) for p in seeds]
    out = set(seeds)
    frontier = list(seeds)
    while frontier:
        nxt = []
        for q in frontier:
            for p, pi in movers:
                for r in (compose(compose(p, q), pi), compose(compose(pi, q), p)):
                    if r not in out:
                        out.add(r)
                        nxt.append(r)
        frontier = nxt
    return out


# class realization -------------------------------------------------------------------

def _propagate(pres: Presentation, assign: list) -> bool:
    """Fill in forced generators; False on a contradiction."""
    changed = True
    while changed:
        changed = False
        for r in pres.relations:
            c, s, t = assign[r.conj], assign[r.source], assign[r.target]
            if c is None:
                continue
            ci = invert(c)
            left, right = (c, ci) if r.sign > 0 else (ci, c)
            if s is not None:
                val = compose(compose(left, s), right)
                if t is None:
                    assign[r.target] = val
                    changed = True
                elif t != val:
                    return False
            elif t is not None:
                assign[r.source] = compose(compose(right, t), left)
                changed = True
    return True


def _orbit_heads(cls, group) -> list:
    """One member of every orbit of ``cls`` under conjugation by ``group``."""
    if len(group) == 1:
        return list(cls)
    return [q for q in cls if all(_conj(z, q) >= q for z in group)]


def _pick(pres: Presentation, assign: list) -> int:
    """The free generator whose value settles the most relations."""
    best, best_score = None, -1
    for g in range(pres.generators):
        if assign[g] is not None:
            continue
        score = 0
        for r in pres.relations:
            known = {r.conj, r.source, r.target}
            if g in known and all(assign[x] is not None for x in known if x != g):
                score += 1
        if score > best_score:
            best, best_score = g, score
    return best


def realizing_assignments(pres: Presentation, p: Sequence[int]) -> Iterator[list]:
    """Assignments into class ``p`` satisfying every relation, first generator fixed.

    Conjugating a solution by a permutation commuting with every value
    already chosen gives another solution with the same closure, so each
    branch only tries one value per orbit of that centralizer.
    """
    p = tuple(p)
    cls = _class(p)
    k = pres.generators
    start = [None] * k
    start[0] = representative(p)

    def search(assign, group):
        if not _propagate(pres, assign):
            return
        fixed = {v for v in assign if v is not None}
        group = [z for z in group if all(compose(z, v) == compose(v, z) for v in fixed)]
        free = _pick(pres, assign)
        if free is None:
            yield assign
            return
        for q in _orbit_heads(cls, group):
            trial = list(assign)
            trial[free] = q
            yield from search(trial, group)

    yield from search(start, list(_centralizer(p)))


def realizes_class(pres: Presentation, p: Sequence[int], m_max: int = HARD_M_MAX) -> bool:
    m = sum(p)
    if m > m_max:
        raise ClassTooLarge(f"m={m} exceeds {m_max}")
    size = len(_class(tuple(p)))
    for assign in realizing_assignments(pres, p):
        if len(set(assign)) == size:
            return True
        if len(conjugation_closure(set(assign))) == size:
            return True
    return False


def invariant_vector(code: PairCode, m_max: int = DEFAULT_M_MAX) -> dict[str, str]:
    """YES/NO per partition, for ``m = 1..m_max`` in successor order."""
    pres = wirtinger(code)
    out = {}
    for m in range(1, m_max + 1):
        for p in partitions(m):
            out[partition_text(p)] = "Y" if realizes_class(pres, p, max(m_max, HARD_M_MAX)) else "N"
    return out


def certificate(vector: dict[str, str]) -> str:
    return ";".join(f"partition={k};answer={v}" for k, v in vector.items())


def parse_certificate(text: str) -> dict[str, str]:
    fields = [f for f in text.split(";") if f]
    out = {}
    for key, val in zip(fields[::2], fields[1::2]):
        if not key.startswith("partition=") or not val.startswith("answer="):
            raise ValueError(f"bad certificate entry {key};{val}")
        out[key[len("partition="):]] = val[len("answer="):]
    return out


def separating_partition(a: dict[str, str], b: dict[str, str]) -> Optional[str]:
    for k, v in a.items():
        if k in b and b[k] != v:
            return k
    return None
