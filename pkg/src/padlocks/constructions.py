"""Builders for padlock threshold systems and access-structure devices."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

from . import bounds
from .model import AND, OR, Leaf, Node, Threshold, ThresholdSystem, WeightedThreshold
from .verify import count_six_key_triples


def _check_kn(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")


def build_direct(k: int, n: int) -> ThresholdSystem:
    """One padlock per participant on a k-of-n device."""
    _check_kn(k, n)
    return ThresholdSystem(n, n, Threshold(k, tuple(Leaf(i) for i in range(n))), tuple({i} for i in range(n)))


def build_single(n: int) -> ThresholdSystem:
    """1-of-n with a single padlock whose key everybody holds."""
    if n < 1:
        raise ValueError("n must be positive")
    return ThresholdSystem(n, 1, Threshold(1, (Leaf(0),)), tuple({0} for _ in range(n)))


def build_2_of_n(n: int) -> ThresholdSystem:
    if n < 2:
        raise ValueError("n must be at least 2")
    t = bounds.sperner_min_t(n)
    if t >= n:
        return build_direct(2, n)
    i = t // 2
    hyperedges = list(combinations(range(t), i))[:n]
    return ThresholdSystem(n, t, Threshold(i + 1, tuple(Leaf(j) for j in range(t))), tuple(hyperedges))


def build_double_daisy(n: int) -> ThresholdSystem:
    """Chain of double links: link ``i`` is a white and a black padlock in series.

    Participant ``p`` holds white ``i`` when bit ``i`` of ``p`` is 0 and black
    ``i`` otherwise, so two distinct participants always complete some link.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    b = bounds.ceil_log2(n)
    links = tuple(AND((Leaf(2 * i), Leaf(2 * i + 1))) for i in range(b))
    keys = tuple({2 * i + (p >> i & 1) for i in range(b)} for p in range(n))
    return ThresholdSystem(n, 2 * b, OR(links), keys)


# --- normal forms ----------------------------------------------------------


@dataclass(frozen=True)
class Formula:
    kind: str  # "DNF" or "CNF"
    clauses: tuple
    variables: tuple

    def __post_init__(self):
        if self.kind not in ("DNF", "CNF"):
            raise ValueError(f"unknown normal form {self.kind!r}")
        clauses = tuple(frozenset(c) for c in self.clauses)
        if not clauses:
            raise ValueError("empty formula")
        if any(not c for c in clauses):
            raise ValueError("empty clause")
        object.__setattr__(self, "clauses", clauses)
        if not self.variables:
            seen: list = []
            for c in self.clauses:
                for v in sorted(c):
                    if v not in seen:
                        seen.append(v)
            object.__setattr__(self, "variables", tuple(seen))
        used = frozenset().union(*clauses)
        if used != frozenset(self.variables):
            raise ValueError("variable list must match the variables used in clauses")

    def satisfied(self, true_vars) -> bool:
        true_vars = set(true_vars)
        if self.kind == "DNF":
            return any(c <= true_vars for c in self.clauses)
        return all(c & true_vars for c in self.clauses)


_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def parse_formula(text: str, kind: str = "DNF") -> Formula:
    """Parse ``A.B + A.C + E`` (DNF) or ``(A+B+C) * D * (C+E)`` (CNF)."""
    kind = kind.upper()
    outer, inner = ("+", ".") if kind == "DNF" else ("*", "+")
    clauses = []
    variables: list = []
    for part in text.split(outer):
        part = part.strip()
        if part.startswith("(") and part.endswith(")"):
            part = part[1:-1]
        names = [v.strip() for v in part.split(inner)]
        for v in names:
            if not _IDENT.match(v):
                raise ValueError(f"bad variable {v!r} in formula {text!r}")
            if v not in variables:
                variables.append(v)
        clauses.append(names)
    return Formula(kind, tuple(clauses), tuple(variables))


def _clause_order(f: Formula, clause) -> list:
    return sorted(clause, key=f.variables.index)


def compile_dnf(f: Formula) -> tuple:
    """One OR latch per clause; each variable's padlock chains all its clauses."""
    if f.kind != "DNF":
        raise ValueError("compile_dnf needs a DNF formula")
    index = {v: i for i, v in enumerate(f.variables)}
    latches = []
    for clause in f.clauses:
        locks = [Leaf(index[v]) for v in _clause_order(f, clause)]
        latches.append(locks[0] if len(locks) == 1 else AND(locks))
    return OR(latches), index


def compile_cnf(f: Formula) -> tuple:
    """An AND over one 1-of-k_i device per clause."""
    if f.kind != "CNF":
        raise ValueError("compile_cnf needs a CNF formula")
    index = {v: i for i, v in enumerate(f.variables)}
    latches = []
    for clause in f.clauses:
        locks = [Leaf(index[v]) for v in _clause_order(f, clause)]
        latches.append(locks[0] if len(locks) == 1 else OR(locks))
    return AND(latches), index


def formula_system(f: Formula) -> ThresholdSystem:
    """Each variable becomes one participant holding that variable's padlock."""
    circuit, index = compile_dnf(f) if f.kind == "DNF" else compile_cnf(f)
    m = len(index)
    return ThresholdSystem(m, m, circuit, tuple({i} for i in range(m)))


def build_benaloh() -> ThresholdSystem:
    """(A and B) or (B and C) or (C and D) with padlocks B and C chained twice."""
    a, b, c, d = (Leaf(i) for i in range(4))
    circuit = OR((AND((a, b)), AND((b, c)), AND((c, d))))
    return ThresholdSystem(4, 4, circuit, tuple({i} for i in range(4)))


def build_weighted(weights: Sequence[int], W: int, owners: Optional[Sequence] = None) -> ThresholdSystem:
    """One padlock per weighted block; participant ``i`` owns ``owners[i]``.

    By default participant ``i`` owns block ``i`` only.
    """
    weights = tuple(weights)
    if not weights or any(w < 1 for w in weights):
        raise ValueError("weights must be positive")
    if not 1 <= W <= sum(weights):
        raise ValueError(f"W={W} is infeasible for weights {weights}")
    t = len(weights)
    if owners is None:
        owners = [{i} for i in range(t)]
    keys = tuple(frozenset([o]) if isinstance(o, int) else frozenset(o) for o in owners)
    circuit = WeightedThreshold(W, weights, tuple(Leaf(i) for i in range(t)))
    return ThresholdSystem(len(keys), t, circuit, keys)


# --- Steiner triads --------------------------------------------------------


def bose_triples(v: int) -> list:
    """Steiner triple system on 1..6v+3 from the Bose construction.

    The points are ``x + j*m`` for x in 1..m and level j in 0..2 with m = 2v+1.
    Each level contributes its vertical triad, and each pair x < y on a level
    is completed by the midpoint (x+y)/2 mod m on the next level.
    """
    if v < 1:
        raise ValueError("v must be at least 1")
    m = 2 * v + 1
    half = pow(2, -1, m)
    triads = [(x, x + m, x + 2 * m) for x in range(1, m + 1)]
    for x in range(1, m + 1):
        for y in range(x + 1, m + 1):
            for level in range(3):
                c = ((x + y) * half - 1) % m
                nxt = (level + 1) % 3
                triads.append((x + level * m, y + level * m, 1 + c + nxt * m))
    return triads


def _six_key_clauses(triads: Sequence) -> list:
    _, hits = count_six_key_triples(triads)
    seen: dict = {}
    for i, j, l in hits:
        seen.setdefault(tuple(sorted(set(triads[i]) | set(triads[j]) | set(triads[l]))), None)
    return list(seen)


def triad_system(triads: Sequence, padlocks: int) -> ThresholdSystem:
    """3-threshold device over triads: seven keys, or one of the six-key triples."""
    clauses = _six_key_clauses(triads)
    all_locks = tuple(Leaf(i) for i in range(padlocks))
    branches = [Threshold(7, all_locks)] + [AND(tuple(Leaf(i) for i in u)) for u in clauses]
    return ThresholdSystem(len(triads), padlocks, OR(branches), tuple(frozenset(t) for t in triads))


@lru_cache(maxsize=None)
def build_3_of_n(n: int) -> ThresholdSystem:
    if n < 3:
        raise ValueError("n must be at least 3")
    t = bounds.bose_padlocks(n)
    if t >= n:
        return build_direct(3, n)
    v = (t - 3) // 6
    triads = [tuple(x - 1 for x in tr) for tr in bose_triples(v)[:n]]
    return triad_system(triads, t)


# 1-based key sets, one triad per participant
NINE_LOCK_TRIADS = [
    (1, 4, 7), (2, 5, 8), (3, 6, 9), (1, 2, 6), (4, 5, 9), (3, 7, 8),
    (1, 3, 5), (4, 6, 8), (2, 7, 9), (2, 3, 4), (5, 6, 7), (1, 8, 9),
]

ELEVEN_LOCK_TRIADS = [
    (1, 2, 3), (1, 4, 5), (1, 6, 7), (1, 8, 9), (1, 10, 11), (2, 4, 6), (2, 5, 7),
    (2, 8, 10), (2, 9, 11), (3, 4, 7), (3, 5, 6), (3, 8, 11), (3, 9, 10),
]


def fixture_nine_locks() -> ThresholdSystem:
    return triad_system([tuple(x - 1 for x in tr) for tr in NINE_LOCK_TRIADS], 9)


def fixture_13_participants(n: int = 13) -> ThresholdSystem:
    """Eleven padlocks for 13 participants:

    T7(1..11) or (T6(1..11) and (T3(8..11) or T5(1..7))), with 1-based padlock
    labels.  ``n=12`` keeps the first twelve key sets.
    """
    if n not in (12, 13):
        raise ValueError("the fixture exists for 12 or 13 participants")
    locks = tuple(Leaf(i) for i in range(11))
    circuit = OR((
        Threshold(7, locks),
        AND((Threshold(6, locks), OR((Threshold(3, locks[7:]), Threshold(5, locks[:7]))))),
    ))
    keys = tuple(frozenset(x - 1 for x in tr) for tr in ELEVEN_LOCK_TRIADS[:n])
    return ThresholdSystem(n, 11, circuit, keys)


# --- recursive construction ------------------------------------------------


def _shift(node: Node, offset: int) -> Node:
    if isinstance(node, Leaf):
        return Leaf(node.id + offset)
    if isinstance(node, Threshold):
        return Threshold(node.m, tuple(_shift(c, offset) for c in node.children))
    return WeightedThreshold(node.W, node.weights, tuple(_shift(c, offset) for c in node.children))


@lru_cache(maxsize=None)
def build_best(k: int, n: int) -> ThresholdSystem:
    """Cheapest buildable k-of-n system (the choice the recursive count makes)."""
    _check_kn(k, n)
    scheme = bounds.best_subsystem(k, n, False)[1]
    if scheme == "single":
        return build_single(n)
    if scheme == "two":
        return build_2_of_n(n)
    if scheme == "bose":
        return build_3_of_n(n)
    if scheme == "recursive":
        return build_recursive(k, n)
    return build_direct(k, n)


def build_recursive(k: int, n: int) -> ThresholdSystem:
    """Two-subgroup recursion: G gets ceil(n/2) members, H the rest.

    H member ``j`` receives copies of G member ``j``'s keys for the inner
    k-of-ceil(n/2) system.  An OR joins that system with, for i = 1..k-1,
    the AND of an i-of-G and a (k-i)-of-H system.
    """
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    if k == 2:
        return build_2_of_n(n)
    if k * (k + 1) // 2 >= n:
        return build_direct(k, n)
    n0, n1 = (n + 1) // 2, n // 2
    inner = build_best(k, n0)
    offset = inner.padlocks
    branches = [inner.circuit]
    g_keys = [set(ks) for ks in inner.keys]
    h_keys = [set(ks) for ks in inner.keys[:n1]]
    for i in range(1, k):
        pair = []
        for size, group, keys in ((i, n0, g_keys), (k - i, n1, h_keys)):
            sub = build_best(size, group)
            for j, ks in enumerate(sub.keys):
                keys[j].update(x + offset for x in ks)
            pair.append(_shift(sub.circuit, offset))
            offset += sub.padlocks
        branches.append(AND(pair))
    return ThresholdSystem(n, offset, OR(branches), tuple(g_keys + h_keys))
