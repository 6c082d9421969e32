"""Brute-force certification of threshold behaviour and key-distribution checks."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .model import KeyDistribution, ThresholdSystem, check_limit, evaluate_mask


@dataclass(frozen=True)
class VerificationReport:
    verdict: bool
    k: int
    n: int
    padlocks: int
    failing_open: Optional[list] = None
    failing_closed: Optional[list] = None

    def to_json(self) -> dict:
        return asdict(self)


def _first_failure(n: int, size: int, expect: bool, opens) -> Optional[list]:
    # combinations() is lexicographic, so the first hit is the smallest one
    for c in combinations(range(n), size):
        if opens(c) != expect:
            return list(c)
    return None


def verify_threshold(system: ThresholdSystem, k: int, limit: int | None = None) -> VerificationReport:
    """Check every ``k``-coalition opens and every ``(k-1)``-coalition does not.

    ``failing_open`` is a ``k``-coalition that stays locked, ``failing_closed``
    a ``(k-1)``-coalition that gets in.  Monotone circuits make the two layers
    sufficient.
    """
    n = system.n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    check_limit(n, limit)
    masks = system.key_masks
    circuit = system.circuit

    def opens(coalition):
        m = 0
        for p in coalition:
            m |= masks[p]
        return evaluate_mask(circuit, m)

    bad_open = _first_failure(n, k, True, opens)
    bad_closed = _first_failure(n, k - 1, False, opens)
    return VerificationReport(
        verdict=bad_open is None and bad_closed is None,
        k=k,
        n=n,
        padlocks=system.padlocks,
        failing_open=bad_open,
        failing_closed=bad_closed,
    )


def _as_sets(distribution) -> list:
    if isinstance(distribution, (KeyDistribution, ThresholdSystem)):
        distribution = distribution.keys
    return [frozenset(k) for k in distribution]


def check_sperner(distribution) -> tuple:
    """Return ``(True, None)`` for an antichain, else ``(False, (i, j))`` with keys[i] <= keys[j]."""
    sets = _as_sets(distribution)
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if i != j and a <= b:
                return False, (i, j)
    return True, None


@dataclass(frozen=True)
class NecessaryConditionReport:
    holds: bool
    sole_key_owners: list
    shared_key_owners: list
    small_difference: Optional[tuple] = None
    too_few_keys: Optional[int] = None


def check_necessary_condition(distribution, k: int) -> NecessaryConditionReport:
    """Set-difference and key-count conditions for systems below ``n`` padlocks.

    A key is shared when at least two participants hold it.  Participants
    holding some unshared key are set aside; among the others every ordered
    pair needs ``|A - B| >= k - 1`` and every member at least ``k`` keys.
    """
    if k < 3:
        raise ValueError("the condition is stated for k >= 3")
    sets = _as_sets(distribution)
    holders: dict = {}
    for s in sets:
        for key in s:
            holders[key] = holders.get(key, 0) + 1
    sole = [i for i, s in enumerate(sets) if any(holders[key] == 1 for key in s)]
    shared = [i for i, s in enumerate(sets) if all(holders[key] >= 2 for key in s)]
    for i in shared:
        if len(sets[i]) < k:
            return NecessaryConditionReport(False, sole, shared, too_few_keys=i)
    for i in shared:
        for j in shared:
            if i != j and len(sets[i] - sets[j]) < k - 1:
                return NecessaryConditionReport(False, sole, shared, small_difference=(i, j))
    return NecessaryConditionReport(True, sole, shared)


def check_packing(blocks: Iterable[Iterable[int]], p: int, lam: int) -> bool:
    """True iff no ``p``-subset of the ground set lies in more than ``lam`` blocks."""
    if p < 2:
        raise ValueError("p must be at least 2")
    seen: dict = {}
    for block in blocks:
        for sub in combinations(sorted(set(block)), p):
            seen[sub] = seen.get(sub, 0) + 1
            if seen[sub] > lam:
                return False
    return True


def _block_masks(blocks) -> list:
    position: dict = {}
    masks = []
    for block in blocks:
        m = 0
        for x in block:
            m |= 1 << position.setdefault(x, len(position))
        masks.append(m)
    return masks


def count_six_key_triples(blocks: Sequence[Iterable[int]]) -> tuple:
    """All index triples of blocks whose union has exactly six elements."""
    masks = _block_masks(blocks)
    hits = []
    for i, a in enumerate(masks):
        for j in range(i + 1, len(masks)):
            u = a | masks[j]
            for l in range(j + 1, len(masks)):
                if (u | masks[l]).bit_count() == 6:
                    hits.append((i, j, l))
    return len(hits), hits


def count_six_key_pairs(blocks: Sequence[Iterable[int]]) -> tuple:
    masks = _block_masks(blocks)
    hits = [c for c in combinations(range(len(masks)), 2) if (masks[c[0]] | masks[c[1]]).bit_count() == 6]
    return len(hits), hits


def triples_not_matched_by_pairs(blocks: Sequence[Iterable[int]]) -> bool:
    """No six-key union of three blocks equals the union of any two blocks."""
    sets = [frozenset(b) for b in blocks]
    pair_unions = {a | b for a, b in combinations(sets, 2)}
    _, triples = count_six_key_triples(sets)
    return all(sets[i] | sets[j] | sets[l] not in pair_unions for i, j, l in triples)
