"""Lower and upper bounds on the minimal padlock count, and closed-form cost counters.

All arithmetic is exact integer (or ``Fraction``) arithmetic.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt


@dataclass(frozen=True)
class BoundResult:
    k: int
    n: int
    lower: int
    upper: int
    lower_witnesses: list = field(default_factory=list)
    upper_witness: str = ""

    def __post_init__(self):
        if self.lower > self.upper:
            raise AssertionError(f"lower {self.lower} above upper {self.upper} for k={self.k}, n={self.n}")

    def to_json(self) -> dict:
        return asdict(self)


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def sperner_min_t(n: int) -> int:
    """Smallest t whose middle layer C(t, t//2) holds at least n distinct sets."""
    if n < 2:
        raise ValueError("n must be at least 2")
    t = 1
    while comb(t, t // 2) < n:
        t += 1
    return t


def lower_bound_rules(k: int, n: int) -> dict:
    """Every applicable lower-bound rule with the value it gives."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if k == 1:
        return {"single_padlock": 1}
    rules = {"at_least_k": k, "triangular": min(n, k * (k + 1) // 2)}
    if n >= 2:
        t = sperner_min_t(n)
        rules["sperner"] = t
        if k >= 3 and t % 2 == 0 and comb(t, t // 2) == n:
            rules["sperner_even"] = t + 1
    if k == 2 and n >= 3:
        rules["two_of_n_small"] = 3 if n == 3 else 4
    return rules


def lower_bound(k: int, n: int) -> int:
    return max(lower_bound_rules(k, n).values())


def johnson_bound(t: int, k: int) -> int:
    """Johnson's upper bound on the number of blocks of a (2,1)-packing of order t, block size k."""
    if k < 2 or t < 0:
        raise ValueError("need k >= 2 and t >= 0")
    return (t * ((t - 1) // (k - 1))) // k


def bose_padlocks(n: int) -> int:
    # smallest v with (2v+1)(3v+1) >= n, i.e. ceil((sqrt(24n+1)-5)/12) without floats
    v = max(0, (isqrt(24 * max(n, 0) + 1) - 5) // 12 - 1)
    while (2 * v + 1) * (3 * v + 1) < n:
        v += 1
    return 6 * v + 3


def skolem_padlocks(n: int) -> int:
    # smallest u with u(6u+1) >= n, i.e. ceil((sqrt(24n+1)-1)/12)
    u = max(0, (isqrt(24 * max(n, 0) + 1) - 1) // 12 - 1)
    while u * (6 * u + 1) < n:
        u += 1
    return 6 * u + 1


def daisy_padlocks(n: int) -> int:
    return 2 * ceil_log2(n)


def _split(n: int) -> tuple:
    return (n + 1) // 2, n // 2


def _recursion_applies(k: int, n: int) -> bool:
    return k >= 3 and k * (k + 1) // 2 < n


@lru_cache(maxsize=None)
def best_subsystem(k: int, n: int, skolem: bool = True) -> tuple:
    """Cheapest known ``k``-of-``n`` sub-system as ``(padlocks, scheme)``.

    Ties keep the earlier scheme in the order single, direct, two, bose,
    skolem, recursive.  With ``skolem=False`` only buildable schemes compete.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if k == 1:
        return 1, "single"
    options = [(n, "direct")]
    if k == 2:
        options.append((sperner_min_t(n), "two"))
    if k == 3:
        options.append((bose_padlocks(n), "bose"))
        if skolem:
            options.append((skolem_padlocks(n), "skolem"))
    if _recursion_applies(k, n):
        options.append((recursive_padlock_count(k, n, skolem), "recursive"))
    best = options[0]
    for opt in options[1:]:
        if opt[0] < best[0]:
            best = opt
    return best


@lru_cache(maxsize=None)
def recursive_padlock_count(k: int, n: int, skolem: bool = True) -> int:
    """Padlocks used by the two-subgroup recursive construction.

    Base cases: ``k == 2`` uses the Sperner-optimal 2-of-n system and
    ``k(k+1)/2 >= n`` the direct device.  Otherwise the participants split
    into halves of sizes ceil(n/2) and floor(n/2); every sub-system is the
    cheapest known one from :func:`best_subsystem`.
    """
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    if k == 2:
        return sperner_min_t(n)
    if not _recursion_applies(k, n):
        return n
    n0, n1 = _split(n)
    total = best_subsystem(k, n0, skolem)[0]
    for i in range(1, k):
        total += best_subsystem(i, n0, skolem)[0] + best_subsystem(k - i, n1, skolem)[0]
    return total


@lru_cache(maxsize=None)
def _profile(k: int, n: int, skolem: bool, scheme: str) -> tuple:
    """Per-participant key counts of a sub-system built with ``scheme``."""
    if scheme in ("single", "direct"):
        return (1,) * n
    if scheme == "two":
        t = sperner_min_t(n)
        return (1,) * n if t >= n else (t // 2,) * n
    if scheme in ("bose", "skolem"):
        return (3,) * n
    return _recursive_profile(k, n, skolem)


def _best_profile(k: int, n: int, skolem: bool) -> tuple:
    return _profile(k, n, skolem, best_subsystem(k, n, skolem)[1])


@lru_cache(maxsize=None)
def _recursive_profile(k: int, n: int, skolem: bool) -> tuple:
    if k == 2:
        return _profile(2, n, skolem, "two")
    if not _recursion_applies(k, n):
        return (1,) * n
    n0, n1 = _split(n)
    inner = _best_profile(k, n0, skolem)
    g = list(inner)
    h = list(inner[:n1])
    for i in range(1, k):
        for j, c in enumerate(_best_profile(i, n0, skolem)):
            g[j] += c
        for j, c in enumerate(_best_profile(k - i, n1, skolem)):
            h[j] += c
    return tuple(g + h)


def recursive_key_average(k: int, n: int, skolem: bool = True) -> Fraction:
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    return Fraction(sum(_recursive_profile(k, n, skolem)), n)


@lru_cache(maxsize=None)
def knot_wrapping_count(k: int, n: int) -> int:
    """Length of the knotted word built for a ``k``-of-``n`` threshold."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if k == n:
        return n
    if k == n - 1:
        return 2 * n
    if k == 1:
        return 3 * 2 ** (n - 1) - 2
    return 2 * (3 + knot_wrapping_count(k - 1, n - 1) + knot_wrapping_count(k, n - 1))


def construction_costs(k: int, n: int) -> dict:
    """Padlock cost of every applicable construction, capped at ``n``."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    costs = {"direct": n}
    if k == 1:
        costs["single"] = 1
    if k == 2 and n >= 2:
        costs["two"] = sperner_min_t(n)
        costs["double_daisy"] = max(2, daisy_padlocks(n))
    if k == 3:
        costs["bose"] = bose_padlocks(n)
        costs["skolem"] = skolem_padlocks(n)
    if _recursion_applies(k, n):
        costs["recursive"] = recursive_padlock_count(k, n)
    return {name: min(c, n) for name, c in costs.items()}


def best_known(k: int, n: int) -> BoundResult:
    rules = lower_bound_rules(k, n)
    lower = max(rules.values())
    witnesses = sorted(name for name, v in rules.items() if v == lower)
    costs = construction_costs(k, n)
    name = min(costs, key=lambda c: costs[c])
    return BoundResult(k, n, lower, costs[name], witnesses, name)
