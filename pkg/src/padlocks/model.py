"""Padlock systems as monotone threshold circuits over padlock leaves.

A device is a DAG of threshold gates whose leaves are padlocks.  The door
opens for a set of opened padlocks when the root gate is satisfied.  A
threshold system pairs such a device with a key distribution: participant
``i`` holds the keys listed in ``keys[i]``, and duplicated keys are simply
the same padlock id appearing in several participants' sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

from .errors import CapacityError, SchemaError, StructuralError

DEFAULT_LIMIT = 20


@dataclass(frozen=True)
class Leaf:
    id: int

    def __post_init__(self):
        if not isinstance(self.id, int) or self.id < 0:
            raise StructuralError(f"padlock id must be a non-negative int, got {self.id!r}")


@dataclass(frozen=True)
class Threshold:
    """Opens when at least ``m`` of its children open."""

    m: int
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise StructuralError("threshold gate without children")
        if not 1 <= self.m <= len(self.children):
            raise StructuralError(f"threshold m={self.m} outside 1..{len(self.children)}")


@dataclass(frozen=True)
class WeightedThreshold:
    """Opens when the weights of its open children sum to at least ``W``."""

    W: int
    weights: tuple
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise StructuralError("weighted gate without children")
        if len(self.weights) != len(self.children):
            raise StructuralError("one weight per child is required")
        if any(not isinstance(w, int) or w < 1 for w in self.weights):
            raise StructuralError(f"weights must be positive ints, got {self.weights}")
        if not 1 <= self.W <= sum(self.weights):
            raise StructuralError(f"W={self.W} outside 1..{sum(self.weights)}")


Node = Union[Leaf, Threshold, WeightedThreshold]


def AND(children: Sequence[Node]) -> Threshold:
    return Threshold(len(children), tuple(children))


def OR(children: Sequence[Node]) -> Threshold:
    return Threshold(1, tuple(children))


def leaves(node: Node) -> Iterator[Leaf]:
    """Yield every leaf occurrence (a shared leaf is yielded once per parent)."""
    if isinstance(node, Leaf):
        yield node
    else:
        for child in node.children:
            yield from leaves(child)


def padlock_ids(node: Node) -> frozenset:
    return frozenset(leaf.id for leaf in leaves(node))


def gates(node: Node) -> Iterator[Node]:
    if not isinstance(node, Leaf):
        yield node
        for child in node.children:
            yield from gates(child)


def evaluate_mask(node: Node, mask: int) -> bool:
    """Evaluate with the opened padlocks given as a bitmask."""
    if isinstance(node, Leaf):
        return (mask >> node.id) & 1 == 1
    if isinstance(node, Threshold):
        need = node.m
        left = len(node.children)
        for child in node.children:
            if evaluate_mask(child, mask):
                need -= 1
                if need == 0:
                    return True
            left -= 1
            if left < need:
                return False
        return False
    total = 0
    for w, child in zip(node.weights, node.children):
        if evaluate_mask(child, mask):
            total += w
            if total >= node.W:
                return True
    return False


def to_mask(ids: Iterable[int]) -> int:
    mask = 0
    for i in ids:
        mask |= 1 << i
    return mask


def evaluate(circuit: Node, opened: Iterable[int], padlocks: int | None = None) -> bool:
    """Whether the door opens when exactly the padlocks in ``opened`` are open.

    ``padlocks`` optionally declares the padlock count; any leaf referencing an
    id outside ``range(padlocks)`` is then a structural error.
    """
    if padlocks is not None:
        bad = sorted(i for i in padlock_ids(circuit) if i >= padlocks)
        if bad:
            raise StructuralError(f"circuit references undeclared padlocks {bad}")
    return evaluate_mask(circuit, to_mask(opened))


@dataclass(frozen=True)
class KeyDistribution:
    n: int
    keys: tuple

    def __post_init__(self):
        object.__setattr__(self, "keys", tuple(frozenset(k) for k in self.keys))
        if len(self.keys) != self.n:
            raise StructuralError(f"expected {self.n} key sets, got {len(self.keys)}")

    @property
    def rank(self) -> int:
        return max((len(k) for k in self.keys), default=0)

    def owners(self) -> dict:
        """Map padlock id to the sorted list of participants holding its key."""
        out: dict = {}
        for p, ks in enumerate(self.keys):
            for k in ks:
                out.setdefault(k, []).append(p)
        return out


@dataclass(frozen=True)
class AccessStructure:
    """Monotone access structure, stored through its minimal authorized sets."""

    minimal_authorized: tuple

    def __post_init__(self):
        sets = sorted({tuple(sorted(s)) for s in self.minimal_authorized}, key=lambda s: (len(s), s))
        object.__setattr__(self, "minimal_authorized", tuple(sets))
        fs = [frozenset(s) for s in sets]
        for a in fs:
            for b in fs:
                if a < b:
                    raise StructuralError(f"not an antichain: {sorted(a)} < {sorted(b)}")

    def is_authorized(self, coalition: Iterable[int]) -> bool:
        c = set(coalition)
        return any(c.issuperset(s) for s in self.minimal_authorized)

    def as_sets(self) -> set:
        return {frozenset(s) for s in self.minimal_authorized}


@dataclass(frozen=True)
class ThresholdSystem:
    n: int
    padlocks: int
    circuit: Node
    keys: tuple
    _masks: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "keys", tuple(frozenset(k) for k in self.keys))
        if self.n < 1:
            raise StructuralError("a system needs at least one participant")
        if len(self.keys) != self.n:
            raise StructuralError(f"expected {self.n} key sets, got {len(self.keys)}")
        used = padlock_ids(self.circuit)
        bad = sorted(i for i in used if i >= self.padlocks)
        if bad:
            raise StructuralError(f"circuit references undeclared padlocks {bad}")
        owned = frozenset().union(*self.keys)
        bad = sorted(i for i in owned if i >= self.padlocks)
        if bad:
            raise StructuralError(f"keys reference undeclared padlocks {bad}")
        orphans = sorted(used - owned)
        if orphans:
            raise StructuralError(f"padlocks {orphans} are in the circuit but nobody holds their key")
        object.__setattr__(self, "_masks", tuple(to_mask(k) for k in self.keys))

    @property
    def distribution(self) -> KeyDistribution:
        return KeyDistribution(self.n, self.keys)

    @property
    def key_masks(self) -> tuple:
        return self._masks

    def coalition_mask(self, coalition: Iterable[int]) -> int:
        mask = 0
        for p in coalition:
            if not 0 <= p < self.n:
                raise IndexError(f"participant {p} out of range 0..{self.n - 1}")
            mask |= self._masks[p]
        return mask

    def restrict(self, n: int) -> "ThresholdSystem":
        """Same device, keeping only the first ``n`` participants."""
        return ThresholdSystem(n, self.padlocks, self.circuit, self.keys[:n])


def coalition_open(system: ThresholdSystem, coalition: Iterable[int]) -> bool:
    return evaluate_mask(system.circuit, system.coalition_mask(coalition))


def padlock_count(system: ThresholdSystem) -> int:
    return system.padlocks


def key_count(system: ThresholdSystem) -> int:
    return sum(len(k) for k in system.keys)


def rank(system: ThresholdSystem) -> int:
    return system.distribution.rank


def check_limit(n: int, limit: int | None) -> None:
    limit = DEFAULT_LIMIT if limit is None else limit
    if n > limit:
        raise CapacityError(f"n={n} exceeds the enumeration limit {limit}")


def open_table(system: ThresholdSystem, limit: int | None = None) -> list:
    """``table[c]`` tells whether coalition bitmask ``c`` opens the door."""
    check_limit(system.n, limit)
    masks = system.key_masks
    union = [0] * (1 << system.n)
    table = [False] * (1 << system.n)
    table[0] = evaluate_mask(system.circuit, 0)
    for c in range(1, 1 << system.n):
        low = c & -c
        union[c] = union[c ^ low] | masks[low.bit_length() - 1]
        table[c] = evaluate_mask(system.circuit, union[c])
    return table


def realized_access_structure(system: ThresholdSystem, limit: int | None = None) -> AccessStructure:
    table = open_table(system, limit)
    minimal = []
    for c, ok in enumerate(table):
        if not ok:
            continue
        bits = [i for i in range(system.n) if c >> i & 1]
        if all(not table[c ^ (1 << i)] for i in bits):
            minimal.append(bits)
    return AccessStructure(tuple(minimal))


# --- canonical JSON -------------------------------------------------------


def node_to_json(node: Node) -> dict:
    if isinstance(node, Leaf):
        return {"t": "lock", "id": node.id}
    if isinstance(node, Threshold):
        return {"t": "thr", "m": node.m, "ch": [node_to_json(c) for c in node.children]}
    return {
        "t": "wthr",
        "W": node.W,
        "w": list(node.weights),
        "ch": [node_to_json(c) for c in node.children],
    }


def _int(obj, path: str, minimum: int = 0) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise SchemaError(path, f"expected an integer, got {obj!r}")
    if obj < minimum:
        raise SchemaError(path, f"expected an integer >= {minimum}, got {obj}")
    return obj


def _list(obj, path: str) -> list:
    if not isinstance(obj, list):
        raise SchemaError(path, f"expected a list, got {type(obj).__name__}")
    return obj


def node_from_json(obj, path: str = "$") -> Node:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected a node object")
    kind = obj.get("t")
    try:
        if kind == "lock":
            return Leaf(_int(obj.get("id"), f"{path}.id"))
        if kind == "thr":
            ch = _list(obj.get("ch"), f"{path}.ch")
            children = [node_from_json(c, f"{path}.ch[{i}]") for i, c in enumerate(ch)]
            return Threshold(_int(obj.get("m"), f"{path}.m", 1), tuple(children))
        if kind == "wthr":
            ch = _list(obj.get("ch"), f"{path}.ch")
            children = [node_from_json(c, f"{path}.ch[{i}]") for i, c in enumerate(ch)]
            w = _list(obj.get("w"), f"{path}.w")
            weights = [_int(x, f"{path}.w[{i}]", 1) for i, x in enumerate(w)]
            return WeightedThreshold(_int(obj.get("W"), f"{path}.W", 1), tuple(weights), tuple(children))
    except StructuralError as exc:
        raise SchemaError(path, str(exc)) from exc
    raise SchemaError(f"{path}.t", f"unknown node type {kind!r}")


def system_to_json(system: ThresholdSystem) -> dict:
    return {
        "n": system.n,
        "padlocks": system.padlocks,
        "circuit": node_to_json(system.circuit),
        "keys": [sorted(k) for k in system.keys],
    }


def system_from_json(obj) -> ThresholdSystem:
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected a system object")
    n = _int(obj.get("n"), "$.n", 1)
    padlocks = _int(obj.get("padlocks"), "$.padlocks", 1)
    circuit = node_from_json(obj.get("circuit"), "$.circuit")
    raw = _list(obj.get("keys"), "$.keys")
    keys = []
    for i, ks in enumerate(raw):
        ks = _list(ks, f"$.keys[{i}]")
        keys.append([_int(k, f"$.keys[{i}][{j}]") for j, k in enumerate(ks)])
    try:
        return ThresholdSystem(n, padlocks, circuit, tuple(keys))
    except StructuralError as exc:
        raise SchemaError("$", str(exc)) from exc


def dumps(obj) -> str:
    """Canonical compact JSON text (insertion-ordered keys, no whitespace)."""
    return json.dumps(obj, separators=(",", ":"))


def emit_system(system: ThresholdSystem) -> str:
    return dumps(system_to_json(system))


def parse_system(text: str) -> ThresholdSystem:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from exc
    return system_from_json(obj)
