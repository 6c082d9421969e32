"""Knotted padlock systems as words in a free group.

A wire wrapped around padlock rings is read as a word over generators
``x1..xn`` (one per padlock) and their inverses, plus a ring symbol ``O``
that nobody can open.  Opening a padlock sets its generator to the
identity; the wire comes free when the word reduces to the empty word.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .bounds import knot_wrapping_count
from .errors import BudgetExceeded, CapacityError
from .model import check_limit
from .verify import VerificationReport

RING = 0
DEFAULT_MAX_LEN = 1 << 20


@dataclass(frozen=True)
class KnotWord:
    """``tokens`` holds signed ints: ``+g``/``-g`` for generator ``g`` (1-based), ``0`` never appears.

    The ring is encoded as symbol 0 with an explicit sign, so tokens are
    ``(symbol, sign)`` pairs.
    """

    tokens: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple((int(s), int(e)) for s, e in self.tokens))
        for s, e in self.tokens:
            if e not in (1, -1):
                raise ValueError(f"bad sign {e}")
            if not 0 <= s <= self.n:
                raise ValueError(f"symbol x{s} outside x1..x{self.n}")

    def __len__(self) -> int:
        return len(self.tokens)

    def inverse(self) -> "KnotWord":
        return KnotWord(tuple((s, -e) for s, e in reversed(self.tokens)), self.n)

    def __str__(self) -> str:
        return format_word(self)

    def occurrences(self) -> dict:
        out: dict = {}
        for s, _ in self.tokens:
            out[s] = out.get(s, 0) + 1
        return out


def format_word(word: KnotWord) -> str:
    parts = []
    for s, e in word.tokens:
        name = "O" if s == RING else f"x{s}"
        parts.append(name if e == 1 else name + "'")
    return " ".join(parts)


def parse_word(text: str, n: Optional[int] = None) -> KnotWord:
    tokens = []
    for raw in text.split():
        sign = -1 if raw.endswith("'") else 1
        body = raw.rstrip("'")
        if body == "O":
            tokens.append((RING, sign))
        elif body.startswith("x") and body[1:].isdigit() and int(body[1:]) >= 1:
            tokens.append((int(body[1:]), sign))
        else:
            raise ValueError(f"bad token {raw!r}")
    if n is None:
        n = max((s for s, _ in tokens), default=0)
    return KnotWord(tuple(tokens), n)


def reduce_tokens(tokens: Iterable, opened=frozenset()) -> list:
    stack: list = []
    for s, e in tokens:
        if s in opened:
            continue
        if stack and stack[-1][0] == s and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((s, e))
    return stack


def reduce(word: KnotWord, opened: Iterable[int] = ()) -> KnotWord:
    """Delete opened generators, then cancel adjacent inverse pairs to a fixpoint."""
    opened = frozenset(opened)
    if RING in opened:
        raise ValueError("the ring can never be opened")
    return KnotWord(tuple(reduce_tokens(word.tokens, opened)), word.n)


def is_open(word: KnotWord, opened: Iterable[int] = ()) -> bool:
    return not reduce(word, opened).tokens


def verify_knot_threshold(
    word: KnotWord, k: int, n: Optional[int] = None, limit: Optional[int] = None, max_len: int = DEFAULT_MAX_LEN
) -> VerificationReport:
    """Every k-set of generators frees the wire; no (k-1)-set does.

    Both layers are checked explicitly: arbitrary words need not be monotone.
    Counterexamples use 1-based generator numbers.
    """
    n = word.n if n is None else n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    check_limit(n, limit)
    if len(word) > max_len:
        raise CapacityError(f"word of length {len(word)} exceeds the cap {max_len}")
    gens = range(1, n + 1)
    bad_open = next((list(c) for c in combinations(gens, k) if not is_open(word, c)), None)
    bad_closed = next((list(c) for c in combinations(gens, k - 1) if is_open(word, c)), None)
    return VerificationReport(bad_open is None and bad_closed is None, k, n, n, bad_open, bad_closed)


def _gen(g: int, e: int = 1) -> list:
    return [(g, e)]


def _inv(tokens: list) -> list:
    return [(s, -e) for s, e in reversed(tokens)]


def _knot_tokens(k: int, gens: list) -> list:
    n = len(gens)
    if k == n:
        return [(g, 1) for g in gens]
    if k == n - 1:
        return [(g, 1) for g in gens] + [(g, -1) for g in gens]
    first, rest = gens[0], gens[1:]
    if k == 1:
        x = _knot_tokens(1, rest)
        return _gen(first) + x + _gen(first, -1) + _inv(x)
    x = _knot_tokens(k - 1, rest)
    y = _knot_tokens(k, rest)
    ring, unring = _gen(RING), _gen(RING, -1)
    return _gen(first) + x + ring + y + unring + _inv(x) + _gen(first, -1) + ring + _inv(y) + unring


def build_knot(k: int, n: int) -> KnotWord:
    """Recursive k-of-n wrapping; general case ``x1 X O Y O' X' x1' O Y' O'``.

    X is the (k-1)-of-(n-1) word and Y the k-of-(n-1) word on x2..xn.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    word = KnotWord(tuple(_knot_tokens(k, list(range(1, n + 1)))), n)
    assert len(word) == knot_wrapping_count(k, n)
    return word


@dataclass(frozen=True)
class SearchResult:
    length: int
    word: KnotWord
    nodes: int


def _verifies(tokens: list, k: int, n: int) -> bool:
    gens = range(1, n + 1)
    for c in combinations(gens, k):
        if reduce_tokens(tokens, frozenset(c)):
            return False
    for c in combinations(gens, k - 1):
        if not reduce_tokens(tokens, frozenset(c)):
            return False
    return True


def search_minimal(k: int, n: int, max_len: int, budget: int = 20_000_000) -> Optional[SearchResult]:
    """Shortest wrapping word (no ring) realizing a k-of-n threshold.

    Lengths 2n, 2n+2, ..., max_len are tried in order (n, n+1, ... when
    k == n).  Within a length, words are enumerated lexicographically with
    x1 < x1' < x2 < ...  Only candidates that could be minimal are visited:
    freely and cyclically reduced, generators introduced in increasing order
    with a positive first occurrence, and, for k < n, zero exponent sum per
    generator.  Raises BudgetExceeded after ``budget`` search nodes.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    nodes = 0
    balanced = k < n
    lengths = range(2 * n, max_len + 1, 2) if balanced else range(n, max_len + 1)
    for length in lengths:
        word: list = []
        sums = [0] * (n + 1)
        seen = [0]  # number of generators introduced so far

        def dfs() -> Optional[list]:
            nonlocal nodes
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"search exceeded {budget} nodes at length {length}")
            pos = len(word)
            if pos == length:
                if balanced and any(sums):
                    return None
                if word[-1] == (1, -1):
                    return None
                return list(word) if _verifies(word, k, n) else None
            limit = min(seen[0] + 1, n)
            for g in range(1, limit + 1):
                for e in (1, -1):
                    if g > seen[0] and e == -1:
                        continue
                    if word and word[-1] == (g, -e):
                        continue
                    fresh = g > seen[0]
                    sums[g] += e
                    if fresh:
                        seen[0] += 1
                    remaining = length - pos - 1
                    need = 2 * (n - seen[0]) if balanced else n - seen[0]
                    if balanced:
                        need += sum(abs(s) for s in sums)
                    if need <= remaining:
                        word.append((g, e))
                        hit = dfs()
                        word.pop()
                        if hit is not None:
                            return hit
                    sums[g] -= e
                    if fresh:
                        seen[0] -= 1
            return None

        word.append((1, 1))
        sums[1] = 1
        seen[0] = 1
        found = dfs()
        if found is not None:
            return SearchResult(length, KnotWord(tuple(found), n), nodes)
    return None
