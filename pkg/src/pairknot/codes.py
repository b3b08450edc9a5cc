"""Pair codes: names of knot projections.

A projection with ``n`` double points is traversed once from a base point;
the double points receive consecutive labels ``1..2n`` and each crossing
becomes an ordered pair ``(over, under)``.  A name is the set of these
pairs.  Changing the base point or the orientation relabels every pair, and
swapping the two entries of every pair names the same projection seen from
below, so every name is normalised to carry label ``1`` on the left.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class CodeError(ValueError):
    """Base class for malformed or invalid pair codes."""


class MalformedText(CodeError):
    pass


class DuplicateLabel(CodeError):
    pass


class LabelOutOfRange(CodeError):
    pass


class ParityViolation(CodeError):
    pass


class OneNotLeft(CodeError):
    pass


class CrossingCountMismatch(CodeError):
    pass


def wrap(label: int, size: int) -> int:
    """Reduce ``label`` into ``1..size``; 0 maps to ``size``."""
    return (label - 1) % size + 1


@dataclass(frozen=True, order=False)
class PairCode:
    """An immutable name: ``n`` pairs ``(over, under)`` sorted by ``over``."""

    pairs: tuple[tuple[int, int], ...] = ()

    @property
    def n(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"PairCode({serialize(self)!r})"

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]], *, check_parity: bool = True,
                   normalize: bool = False) -> "PairCode":
        """Build a validated code.

        With ``normalize`` the code is transposed when label 1 sits on the
        right instead of raising :class:`OneNotLeft`.
        """
        pairs = [(int(a), int(b)) for a, b in pairs]
        validate_pairs(pairs, check_parity=check_parity, require_one_left=not normalize)
        if normalize and pairs and not any(a == 1 for a, _ in pairs):
            pairs = [(b, a) for a, b in pairs]
        return cls(tuple(sorted(pairs)))

    # companion / partner views -------------------------------------------

    def partner(self) -> dict[int, int]:
        """Map every label to the other label of its crossing."""
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def companions(self) -> dict[int, int]:
        """Signed companions: ``+j`` for ``(i, j)``, ``-j`` for ``(j, i)``."""
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = -a
        return out

    def is_over(self, label: int) -> bool:
        return self.companions()[label] > 0

    def fg(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """The permutation ``f`` and bit vector ``g`` used for ordering.

        ``f[i-1] = j`` when ``2i-1`` is paired with ``2j``; ``g[i-1]`` is 0
        when ``2i-1`` is the left element of its pair.
        """
        return fg_of_pairs(self.pairs)

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.fg()


UNKNOT = PairCode(())


def fg_of_pairs(pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    pairs = list(pairs)
    n = len(pairs)
    f = [0] * n
    g = [0] * n
    for a, b in pairs:
        if a % 2 == 1:
            f[(a - 1) // 2] = b // 2
        else:
            f[(b - 1) // 2] = a // 2
            g[(b - 1) // 2] = 1
    return tuple(f), tuple(g)


def validate_pairs(pairs: Sequence[tuple[int, int]], *, check_parity: bool = True,
                   require_one_left: bool = True) -> None:
    n = len(pairs)
    seen: set[int] = set()
    for a, b in pairs:
        for x in (a, b):
            if not 1 <= x <= 2 * n:
                raise LabelOutOfRange(f"label {x} outside 1..{2 * n}")
            if x in seen:
                raise DuplicateLabel(f"label {x} used twice")
            seen.add(x)
        if check_parity and (a - b) % 2 == 0:
            raise ParityViolation(f"pair ({a},{b}) has two labels of equal parity")
    if require_one_left and n and not any(a == 1 for a, _ in pairs):
        raise OneNotLeft("label 1 must be an overcrossing (left element)")


# text format ----------------------------------------------------------------

def serialize(code: PairCode) -> str:
    return " ".join(f"{a}:{b}" for a, b in sorted(code.pairs))


def parse_code(text: str) -> PairCode:
    """Parse ``"o:u o:u ..."`` into a validated :class:`PairCode`."""
    text = text.strip()
    if not text:
        return UNKNOT
    pairs = []
    for token in text.split():
        left, sep, right = token.partition(":")
        if not sep or not left.isdigit() or not right.isdigit():
            raise MalformedText(f"bad pair token {token!r}")
        pairs.append((int(left), int(right)))
    validate_pairs(pairs)
    return PairCode(tuple(sorted(pairs)))


# relabelings ----------------------------------------------------------------

def _normalized(pairs: Iterable[tuple[int, int]]) -> PairCode:
    pairs = list(pairs)
    if pairs and not any(a == 1 for a, _ in pairs):
        pairs = [(b, a) for a, b in pairs]
    return PairCode(tuple(sorted(pairs)))


def rotate(code: PairCode, k: int, reverse: bool = False) -> PairCode:
    """Move the base point by ``k`` (and optionally reverse orientation)."""
    m = 2 * code.n
    if m == 0:
        return code
    if reverse:
        mapped = ((wrap(k - a, m), wrap(k - b, m)) for a, b in code.pairs)
    else:
        mapped = ((wrap(k + a, m), wrap(k + b, m)) for a, b in code.pairs)
    return _normalized(mapped)


def transpose(code: PairCode) -> PairCode:
    """Swap over and under everywhere, then renormalise label 1 to the left.

    With the label-1 normalisation this always lands back on a name of the
    same projection, so the result equals ``code`` for every non-empty code.
    The raw swap is available as :func:`swap_roles`.
    """
    return _normalized((b, a) for a, b in code.pairs)


def swap_roles(code: PairCode) -> tuple[tuple[int, int], ...]:
    """The raw ``(i, j) -> (j, i)`` swap, without renormalisation."""
    return tuple(sorted((b, a) for a, b in code.pairs))


def inverse_code(code: PairCode) -> PairCode:
    """Name of the inverse knot: ``(i, j) -> (2n+1-i, 2n+1-j)``."""
    m = 2 * code.n
    return _normalized((m + 1 - a, m + 1 - b) for a, b in code.pairs)


def orbit(code: PairCode) -> Iterator[PairCode]:
    """All base-point / orientation relabelings (at most ``4n`` names)."""
    m = 2 * code.n
    if m == 0:
        yield code
        return
    for reverse in (False, True):
        for k in range(m):
            yield rotate(code, k, reverse)


def lex_less(a: PairCode, b: PairCode) -> bool:
    """True when ``a`` is lexicographically preferred to ``b``."""
    if a.n != b.n:
        raise CrossingCountMismatch(f"{a.n} != {b.n}")
    return a.key() < b.key()


def canonical_relabel(code: PairCode) -> PairCode:
    """The preferred name among all relabelings of ``code``."""
    if code.n == 0:
        return code
    return min(orbit(code), key=PairCode.key)


def is_canonical(code: PairCode) -> bool:
    return canonical_relabel(code) == code


# connected sums ---------------------------------------------------------------

def connected_sum(a: PairCode, b: PairCode) -> PairCode:
    shift = 2 * a.n
    return PairCode(tuple(sorted(a.pairs + tuple((i + shift, j + shift) for i, j in b.pairs))))


def closed_intervals(partner: dict[int, int], m: int) -> Iterator[tuple[int, int]]:
    """Proper intervals ``[k, l]`` of ``1..m`` closed under the pairing."""
    for k in range(1, m + 1):
        lo, hi = m + 1, 0
        for l in range(k, m + 1):
            p = partner[l]
            lo = min(lo, p)
            hi = max(hi, p)
            if lo < k:
                break
            if hi <= l and l > k and (k, l) != (1, m):
                yield k, l


def is_composite(code: PairCode) -> bool:
    """True when some proper label interval is closed under the pairing."""
    m = 2 * code.n
    if m == 0:
        return False
    return next(closed_intervals(code.partner(), m), None) is not None


def count_parity_names(n: int, *, one_left: bool = False) -> int:
    """Count parity-valid names on ``n`` crossings by explicit enumeration."""
    return sum(1 for _ in iter_parity_names(n, one_left=one_left))


def iter_parity_names(n: int, *, one_left: bool = False) -> Iterator[PairCode]:
    from itertools import permutations, product

    for f in permutations(range(1, n + 1)):
        for g in product((0, 1), repeat=n):
            if one_left and n and g[0] == 1:
                continue
            pairs = []
            for i, (j, bit) in enumerate(zip(f, g), start=1):
                odd, even = 2 * i - 1, 2 * j
                pairs.append((odd, even) if bit == 0 else (even, odd))
            yield PairCode(tuple(sorted(pairs)))


def code_from_fg(f: Sequence[int], g: Sequence[int]) -> PairCode:
    pairs = []
    for i, (j, bit) in enumerate(zip(f, g), start=1):
        odd, even = 2 * i - 1, 2 * j
        pairs.append((odd, even) if bit == 0 else (even, odd))
    return PairCode(tuple(sorted(pairs)))
