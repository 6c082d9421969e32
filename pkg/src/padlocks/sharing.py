"""Secret sharing over a small prime field, compiled from a padlock circuit.

Every gate hides its incoming value in the constant term of a fresh
polynomial of degree (threshold - 1) and hands the evaluation at point p to
its p-th child.  A padlock's key becomes the list of evaluations landing on
its leaf occurrences; identical keys carry identical evaluations.  Weighted
gates give a child of weight w the w consecutive points it covers.
"""

from __future__ import annotations

import hashlib
import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional

from .errors import CapacityError, IntegrityError, SchemaError
from .model import Leaf, Node, Threshold, ThresholdSystem, dumps, node_to_json


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


def next_prime_above(x: int) -> int:
    q = x + 1
    while not is_prime(q):
        q += 1
    return q


def _root(circuit: Node) -> Node:
    return Threshold(1, (circuit,)) if isinstance(circuit, Leaf) else circuit


def _slots(node: Node) -> tuple:
    """``(need, [(point, child), ...])`` with points 1..fan-in."""
    if isinstance(node, Threshold):
        return node.m, [(i + 1, c) for i, c in enumerate(node.children)]
    slots = []
    point = 1
    for w, c in zip(node.weights, node.children):
        for _ in range(w):
            slots.append((point, c))
            point += 1
    return node.W, slots


def max_fan_in(circuit: Node) -> int:
    node = _root(circuit)
    if isinstance(node, Leaf):
        return 1
    best = len(_slots(node)[1])
    for child in node.children:
        if not isinstance(child, Leaf):
            best = max(best, max_fan_in(child))
    return best


def min_field_size(circuit: Node) -> int:
    """Smallest prime above the largest (weight-expanded) gate fan-in."""
    return next_prime_above(max_fan_in(circuit))


def _eval_poly(coeffs, x: int, q: int) -> int:
    y = 0
    for c in reversed(coeffs):
        y = (y * x + c) % q
    return y


def lagrange_eval(points, x: int, q: int) -> int:
    """Value at ``x`` of the polynomial through ``[(x_i, y_i), ...]`` over GF(q)."""
    total = 0
    for i, (xi, yi) in enumerate(points):
        num, den = 1, 1
        for j, (xj, _) in enumerate(points):
            if i != j:
                num = num * (x - xj) % q
                den = den * (xi - xj) % q
        total = (total + yi * num * pow(den, -1, q)) % q
    return total


def interpolate_at_zero(points, q: int) -> int:
    return lagrange_eval(points, 0, q)


@dataclass(frozen=True)
class Share:
    path: tuple  # evaluation points from the root down to the leaf
    value: int

    @property
    def point(self) -> int:
        return self.path[-1]


@dataclass
class Dealing:
    q: int
    secret: int
    shares: dict  # padlock id -> list of Share
    transcript: list = field(default_factory=list)  # (gate path, coefficients)


def _check_field(circuit: Node, q: int) -> None:
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")
    need = min_field_size(circuit)
    if q < need:
        raise CapacityError(f"q={q} is too small, this circuit needs q >= {need}")


def _deal(node: Node, path: tuple, s: int, q: int, draw, shares: dict, transcript: list) -> None:
    need, slots = _slots(node)
    coeffs = [s] + [draw() for _ in range(need - 1)]
    transcript.append((path, tuple(coeffs)))
    for point, child in slots:
        value = _eval_poly(coeffs, point, q)
        if isinstance(child, Leaf):
            shares.setdefault(child.id, []).append(Share(path + (point,), value))
        else:
            _deal(child, path + (point,), value, q, draw, shares, transcript)


def deal(circuit: Node, secret: int, q: int, rng=None) -> Dealing:
    """Share ``secret`` along the circuit; ``rng`` needs a ``randrange`` method."""
    _check_field(circuit, q)
    if not 0 <= secret < q:
        raise ValueError(f"secret must lie in [0, {q})")
    rng = random.Random() if rng is None else rng
    shares: dict = {}
    transcript: list = []
    _deal(_root(circuit), (), secret, q, lambda: rng.randrange(q), shares, transcript)
    return Dealing(q, secret, shares, transcript)


def replay(circuit: Node, transcript: list, q: int) -> Dealing:
    """Re-run a dealing from its recorded coefficients."""
    coeffs = {path: c for path, c in transcript}
    root = _root(circuit)
    secret = coeffs[()][0]
    draws = iter(c for _, cs in transcript for c in cs[1:])
    shares: dict = {}
    out: list = []
    _deal(root, (), secret, q, lambda: next(draws), shares, out)
    return Dealing(q, secret, shares, out)


def _collect(opened_values: dict) -> dict:
    by_path: dict = {}
    for padlock, shares in opened_values.items():
        for share in shares:
            path, value = (share.path, share.value) if isinstance(share, Share) else share
            key = (padlock, tuple(path))
            if key in by_path and by_path[key] != value:
                raise IntegrityError(f"padlock {padlock} has two values at point path {list(path)}")
            by_path[key] = value
    return by_path


def _resolve(node: Node, path: tuple, values: dict, q: int) -> Optional[int]:
    need, slots = _slots(node)
    points = []
    for point, child in slots:
        sub = path + (point,)
        if isinstance(child, Leaf):
            v = values.get((child.id, sub))
        else:
            v = _resolve(child, sub, values, q)
        if v is not None:
            points.append((point, v))
    if len(points) < need:
        return None
    base = points[:need]
    s = interpolate_at_zero(base, q)
    if len(points) > need:
        # the extra points must sit on the same polynomial
        for x, y in points[need:]:
            if lagrange_eval(base, x, q) != y:
                raise IntegrityError(f"inconsistent shares under gate at {list(path)}")
    return s


def reconstruct(circuit: Node, opened_values: dict, q: int) -> Optional[int]:
    """Recover the secret from the shares of the opened padlocks, or ``None``.

    ``opened_values`` maps padlock id to its shares (``Share`` objects or
    ``(path, value)`` pairs).  Disagreeing shares raise ``IntegrityError``.
    """
    return _resolve(_root(circuit), (), _collect(opened_values), q)


def coalition_shares(system: ThresholdSystem, dealing: Dealing, coalition: Iterable[int]) -> dict:
    opened = set()
    for p in coalition:
        if not 0 <= p < system.n:
            raise IndexError(f"participant {p} out of range 0..{system.n - 1}")
        opened |= system.keys[p]
    return {pid: dealing.shares[pid] for pid in sorted(opened) if pid in dealing.shares}


@dataclass(frozen=True)
class SharePackage:
    participant: int
    shares: dict  # padlock id -> list of Share


def packages(system: ThresholdSystem, dealing: Dealing) -> list:
    return [
        SharePackage(p, {pid: list(dealing.shares.get(pid, [])) for pid in sorted(system.keys[p])})
        for p in range(system.n)
    ]


class _Scripted:
    def __init__(self, values):
        self._it = iter(values)

    def randrange(self, q):
        return next(self._it)


def random_coefficient_count(circuit: Node) -> int:
    node = _root(circuit)
    need, slots = _slots(node)
    return need - 1 + sum(random_coefficient_count(c) for _, c in slots if not isinstance(c, Leaf))


def privacy_check(circuit: Node, q: int, unauthorized: Iterable[int], budget: int = 1_000_000) -> bool:
    """Perfect privacy of ``unauthorized`` padlocks, by enumerating all dealer randomness.

    True iff the multiset of share tuples visible to those padlocks is the
    same for every secret in the field.
    """
    _check_field(circuit, q)
    unauthorized = sorted(set(unauthorized))
    r = random_coefficient_count(circuit)
    if q ** (r + 1) > budget:
        raise CapacityError(f"{q}^{r + 1} dealings exceed the budget {budget}")
    reference = None
    for secret in range(q):
        views: Counter = Counter()
        for coeffs in product(range(q), repeat=r):
            d = deal(circuit, secret, q, _Scripted(coeffs))
            views[tuple((pid, tuple(d.shares.get(pid, ()))) for pid in unauthorized)] += 1
        if reference is None:
            reference = views
        elif views != reference:
            return False
    return True


# --- share files -------------------------------------------------------------


def circuit_hash(circuit: Node) -> str:
    return hashlib.sha256(dumps(node_to_json(circuit)).encode()).hexdigest()


def shares_to_json(circuit: Node, dealing: Dealing) -> dict:
    rows = []
    for pid in sorted(dealing.shares):
        for share in dealing.shares[pid]:
            rows.append({"padlock": pid, "point_path": list(share.path), "value": share.value})
    return {"q": dealing.q, "circuit_hash": circuit_hash(circuit), "shares": rows}


def shares_from_json(obj) -> tuple:
    """Return ``(q, circuit_hash, {padlock: [Share, ...]})``."""
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected a share-file object")
    q = obj.get("q")
    if not isinstance(q, int) or q < 2:
        raise SchemaError("$.q", f"expected a prime modulus, got {q!r}")
    h = obj.get("circuit_hash")
    if not isinstance(h, str):
        raise SchemaError("$.circuit_hash", "expected a string")
    rows = obj.get("shares")
    if not isinstance(rows, list):
        raise SchemaError("$.shares", "expected a list")
    out: dict = {}
    for i, row in enumerate(rows):
        where = f"$.shares[{i}]"
        if not isinstance(row, dict):
            raise SchemaError(where, "expected an object")
        pid, path, value = row.get("padlock"), row.get("point_path"), row.get("value")
        if not isinstance(pid, int) or pid < 0:
            raise SchemaError(f"{where}.padlock", f"bad padlock {pid!r}")
        if not isinstance(path, list) or not path or not all(isinstance(p, int) and p >= 1 for p in path):
            raise SchemaError(f"{where}.point_path", f"bad point path {path!r}")
        if not isinstance(value, int) or not 0 <= value < q:
            raise SchemaError(f"{where}.value", f"bad field element {value!r}")
        out.setdefault(pid, []).append(Share(tuple(path), value))
    return q, h, out
