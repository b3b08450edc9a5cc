"""The knot table sweep.

Shadows are visited in lexicographic order of ``f``.  Each admissible shadow
contributes ``2^(n-1)`` names (label 1 over).  Every name seeds a bounded
search over drawn diagrams.  Third moves and downward moves are allowed at
any size.  Upward moves start only from the original size: first moves that
enable a third move, and second moves when ``up_budget`` is 1.  Names whose
searches meet are merged, and any search reaching fewer crossings rejects
its whole class.
"""
from __future__ import annotations

import heapq
import json
import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .codes import PairCode, closed_intervals, code_from_fg, serialize
from .moves import (
    arrays_of,
    canonical_arrays,
    code_of,
    drop_labels,
    face_arc_pairs,
    r1_sites_arr,
    r1_up_arr,
    r2_sites_arr,
    r2_up_arr,
    r3_planar_arr,
    r3_sites_arr,
)
from .planarity import Shadow, find_embedding, is_realizable

log = logging.getLogger(__name__)

DEFAULT_STATE_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    pass


# shadows ----------------------------------------------------------------------

def next_shadow(f: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Lexicographic successor of the permutation ``f``; None after the last."""
    f = list(f)
    n = len(f)
    l = n - 2
    while l >= 0 and f[l] > f[l + 1]:
        l -= 1
    if l < 0:
        return None
    # smallest entry to the right that exceeds f[l]
    r = min((i for i in range(l + 1, n) if f[i] > f[l]), key=lambda i: f[i])
    f[l], f[r] = f[r], f[l]
    f[l + 1:] = sorted(f[l + 1:])
    return tuple(f)


def iter_shadows(n: int) -> Iterator[tuple[int, ...]]:
    f: Optional[tuple[int, ...]] = tuple(range(1, n + 1))
    while f is not None:
        yield f
        f = next_shadow(f)


def shadow_admissible(s: Shadow) -> tuple[bool, str]:
    """Run the four shadow tests in order; the reason names the first failure."""
    m = len(s.h)
    if m == 0:
        return True, "ok"
    for i in range(1, m + 1):
        if (s.partner(i) - i) % m in (1, m - 1):
            return False, "kink"
    partner = {i: s.h[i - 1] for i in range(1, m + 1)}
    if next(closed_intervals(partner, m), None) is not None:
        return False, "composite"
    f = s.f()
    for rev in (False, True):
        for k in range(m):
            if s.relabel(k, rev).f() < f:
                return False, "not preferred"
    if not is_realizable(s):
        return False, "unrealizable"
    return True, "ok"


def admissible_shadows(n: int) -> list[Shadow]:
    out = []
    for f in iter_shadows(n):
        s = Shadow.from_f(f)
        if shadow_admissible(s)[0]:
            out.append(s)
    return out


def assignments(s: Shadow) -> Iterator[tuple[str, PairCode]]:
    """Names over ``s`` with label 1 on the left, in binary-counter order.

    Yields ``(bits, code)`` where ``bits`` is ``g_1..g_n``; the first name is
    the alternating one.
    """
    f = s.f()
    n = len(f)
    if n == 0:
        yield "", PairCode(())
        return
    for counter in range(2 ** (n - 1)):
        bits = "0" + format(counter, f"0{n - 1}b") if n > 1 else "0"
        g = tuple(int(b) for b in bits)
        yield bits, code_from_fg(f, g)


def is_alternating(code: PairCode) -> bool:
    comp = code.companions()
    m = 2 * code.n
    return all((comp[i] > 0) != (comp[i % m + 1] > 0) for i in range(1, m + 1))


# search --------------------------------------------------------------------------

@dataclass(frozen=True)
class Keep:
    code: PairCode


@dataclass(frozen=True)
class RejectedBy:
    code: PairCode
    reason: str


def _state(P, O, E):
    key, P, O, E = canonical_arrays(P, O, E)
    return (key, E), (P, O, E)


def _down_moves(P, O, E):
    m = len(P)
    for x in r1_sites_arr(P):
        yield drop_labels(P, O, E, {x, (x + 1) % m})
    for x, x1 in r2_sites_arr(P, O):
        yield drop_labels(P, O, E, {x, x1, P[x], P[x1]})


def _r3_moves(P, O, E):
    for site in r3_sites_arr(P, O):
        out = r3_planar_arr(P, O, E, site)
        if out is not None:
            yield out


def _fruitful(P, O, E, new: set[int]) -> bool:
    for site in r3_sites_arr(P, O):
        if new & {u for strand in site for u in strand} and r3_planar_arr(P, O, E, site) is not None:
            return True
    return False


def _r1_up_moves(P, O, E):
    m = len(P)
    for x in range(m):
        for over_first in (True, False):
            for side in (1, -1):
                NP, NO, NE = r1_up_arr(P, O, E, x, over_first, side)
                if _fruitful(NP, NO, NE, {x + 1, x + 2}):
                    yield NP, NO, NE


def _r2_up_moves(P, O, E):
    for a, b, sa, sb in face_arc_pairs(P, E):
        for over_first in (True, False):
            yield r2_up_arr(P, O, E, a, b, sa, sb, over_first)


class Reducer:
    """Shared search state for all names with ``n`` crossings.

    Every explored diagram is assigned to a class; classes merge when a
    search runs into an earlier one.  Union-find keeps this cheap.
    """

    def __init__(self, n: int, up_budget: int = 1, state_budget: int = DEFAULT_STATE_BUDGET):
        if up_budget not in (0, 1):
            raise ValueError("up_budget must be 0 or 1")
        self.n = n
        self.up_budget = up_budget
        self.state_budget = state_budget
        self.cls: dict = {}
        self.parent: list[int] = []
        self.lower: dict[int, PairCode] = {}
        self.best: dict[int, tuple] = {}

    def find(self, c: int) -> int:
        while self.parent[c] != c:
            self.parent[c] = self.parent[self.parent[c]]
            c = self.parent[c]
        return c

    def _union(self, a: int, b: int) -> int:
        a, b = self.find(a), self.find(b)
        if a == b:
            return a
        if b < a:
            a, b = b, a
        self.parent[b] = a
        if b in self.lower and a not in self.lower:
            self.lower[a] = self.lower[b]
        if b in self.best and (a not in self.best or self.best[b] < self.best[a]):
            self.best[a] = self.best[b]
        return a

    def _note(self, c: int, key) -> None:
        if len(key[0]) == 2 * self.n:
            cur = self.best.get(c)
            if cur is None or key < cur:
                self.best[c] = key

    def explore(self, code: PairCode) -> int:
        """Class id of ``code`` (searching if it is new)."""
        P, O, _ = arrays_of(code)
        E = find_embedding(P)
        if E is None:
            raise ValueError(f"{code} cannot be drawn")
        return self.explore_arrays(P, O, E)

    def explore_arrays(self, P, O, E) -> int:
        n = self.n
        key, arr = _state(P, O, E)
        if key in self.cls:
            return self.find(self.cls[key])
        c = len(self.parent)
        self.parent.append(c)
        self.cls[key] = c
        self._note(c, key)
        heap = [(len(arr[0]), 0, key, arr)]
        tick = 1
        while heap:
            size, _, key, (P, O, E) = heapq.heappop(heap)
            nbrs = [*_down_moves(P, O, E), *_r3_moves(P, O, E)]
            if size == 2 * n:
                nbrs.extend(_r1_up_moves(P, O, E))
                if self.up_budget:
                    nbrs.extend(_r2_up_moves(P, O, E))
            for NP, NO, NE in nbrs:
                if len(NP) < 2 * n:
                    root = self.find(c)
                    self.lower.setdefault(root, (NP, NO, NE))
                    return root
                nkey, narr = _state(NP, NO, NE)
                other = self.cls.get(nkey)
                if other is not None:
                    other = self.find(other)
                    if other != self.find(c):
                        c = self._union(c, other)
                        if c in self.lower:
                            return c
                    continue
                self.cls[nkey] = c
                self._note(self.find(c), nkey)
                if len(self.cls) > self.state_budget:
                    raise BudgetExceeded(f"orbit budget of {self.state_budget} diagrams exhausted at n={n}")
                heapq.heappush(heap, (len(NP), tick, nkey, narr))
                tick += 1
        return self.find(c)

    def reducible(self, c: int) -> bool:
        return self.find(c) in self.lower

    def lower_code(self, c: int) -> PairCode:
        P, O, _ = self.lower[self.find(c)]
        return code_of(*canonical_arrays(P, O)[1:3])

    def preferred(self, c: int) -> PairCode:
        key = self.best[self.find(c)][0]
        n = len(key) // 2
        return code_from_fg(key[:n], key[n:])


def reduce_to_preferred(code: PairCode, up_budget: int = 1,
                        state_budget: int = DEFAULT_STATE_BUDGET) -> Keep | RejectedBy:
    """Search one name on its own.

    ``Keep`` carries the preferred name of the class when nothing smaller
    is reached and the name itself is that preferred name.
    """
    if code.n == 0:
        return Keep(code)
    P, O, _ = arrays_of(code)
    kinks = r1_sites_arr(P)
    if kinks:
        x = kinks[0]
        NP, NO, _ = drop_labels(P, O, None, {x, P[x]})
        return RejectedBy(code_of(NP, NO), "first move")
    bigons = r2_sites_arr(P, O)
    if bigons:
        x, x1 = bigons[0]
        NP, NO, _ = drop_labels(P, O, None, {x, x1, P[x], P[x1]})
        return RejectedBy(code_of(NP, NO), "second move")
    red = Reducer(code.n, up_budget, state_budget)
    c = red.explore(code)
    if red.reducible(c):
        return RejectedBy(red.lower_code(c), "fewer crossings")
    best = red.preferred(c)
    if best != code:
        return RejectedBy(best, "preferred name")
    return Keep(code)


def simplify_arrays(P, O, E, up_budget: int = 1, state_budget: int = DEFAULT_STATE_BUDGET) -> PairCode:
    """Reduce a drawn diagram as far as the bounded search allows."""
    while True:
        while True:
            step = next(_down_moves(P, O, E), None)
            if step is None:
                break
            P, O, E = step
        if not P:
            return PairCode(())
        red = Reducer(len(P) // 2, up_budget, state_budget)
        c = red.explore_arrays(P, O, E)
        if not red.reducible(c):
            return red.preferred(c)
        P, O, E = red.lower[red.find(c)]


def simplify(code: PairCode, up_budget: int = 1, state_budget: int = DEFAULT_STATE_BUDGET) -> PairCode:
    """Smallest name this engine can reach from ``code``."""
    P, O, _ = arrays_of(code)
    E = find_embedding(P)
    if E is None:
        raise ValueError(f"{code} cannot be drawn")
    return simplify_arrays(P, O, E, up_budget, state_budget)


# catalog -----------------------------------------------------------------------

@dataclass
class KnotRecord:
    n: int
    code: PairCode
    shadow_id: int
    assignment_bits: str
    invariants: dict = field(default_factory=dict)
    status: str = "confirmed"

    def invariants_text(self) -> str:
        return ";".join(f"partition={k};answer={v}" for k, v in self.invariants.items())

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "code": serialize(self.code),
            "shadow_id": self.shadow_id,
            "assignment_bits": self.assignment_bits,
            "invariants": self.invariants_text(),
            "status": self.status,
        }


@dataclass
class LevelSummary:
    n: int
    shadows: int
    projections: int
    knots: int


FIELDS = ("n", "code", "shadow_id", "assignment_bits", "invariants", "status")


def enumerate_level(n: int, up_budget: int = 1, state_budget: int = DEFAULT_STATE_BUDGET,
                    ) -> tuple[list[KnotRecord], LevelSummary]:
    """Survivors with exactly ``n`` crossings."""
    if n == 0:
        return [KnotRecord(0, PairCode(()), 0, "")], LevelSummary(0, 1, 1, 1)
    shadows = admissible_shadows(n)
    red = Reducer(n, up_budget, state_budget)
    origin: dict[PairCode, tuple[int, str]] = {}
    classes: list[int] = []
    for sid, s in enumerate(shadows, start=1):
        for bits, code in assignments(s):
            origin[code] = (sid, bits)
            P, O, _ = arrays_of(code)
            if r2_sites_arr(P, O):
                continue
            try:
                classes.append(red.explore(code))
            except BudgetExceeded as exc:
                raise BudgetExceeded(f"{exc} (shadow {sid}, bits {bits})") from exc
        log.info("n=%d shadow %d/%d: %d diagrams", n, sid, len(shadows), len(red.cls))
    roots = sorted({red.find(c) for c in classes if not red.reducible(c)})
    records = []
    for root in roots:
        code = red.preferred(root)
        sid, bits = origin.get(code, (0, ""))
        records.append(KnotRecord(n, code, sid, bits))
    records.sort(key=lambda r: r.code.key())
    summary = LevelSummary(n, len(shadows), len(shadows) * 2 ** (n - 1), len(records))
    return records, summary


def enumerate_knots(max_n: int, up_budget: int = 1, state_budget: int = DEFAULT_STATE_BUDGET,
                    ) -> tuple[list[KnotRecord], list[LevelSummary]]:
    if max_n < 0:
        raise ValueError("max_n must be non-negative")
    records: list[KnotRecord] = []
    summaries = []
    for n in range(max_n + 1):
        recs, summ = enumerate_level(n, up_budget, state_budget)
        if n >= 9:
            for r in recs:
                r.status = "unconfirmed"
        records.extend(recs)
        summaries.append(summ)
    return records, summaries


def write_tsv(records: Iterable[KnotRecord], stream) -> None:
    stream.write("\t".join(FIELDS) + "\n")
    for r in records:
        d = r.as_dict()
        stream.write("\t".join(str(d[k]) for k in FIELDS) + "\n")


def write_json(records: Iterable[KnotRecord], stream) -> None:
    json.dump([r.as_dict() for r in records], stream, indent=1)
    stream.write("\n")


def format_summary(summaries: Iterable[LevelSummary]) -> str:
    lines = [f"{'n':>3} {'shadows':>8} {'x2^(n-1)':>9} {'knots':>6}"]
    for s in summaries:
        lines.append(f"{s.n:>3} {s.shadows:>8} {s.projections:>9} {s.knots:>6}")
    return "\n".join(lines)

