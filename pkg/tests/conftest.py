import os
from itertools import combinations

import pytest

from padlocks.model import Leaf, Threshold, WeightedThreshold


def opens_by_sets(node, opened: set) -> bool:
    """Set-based evaluator kept apart from the bitmask one in the library."""
    if isinstance(node, Leaf):
        return node.id in opened
    if isinstance(node, Threshold):
        return sum(opens_by_sets(c, opened) for c in node.children) >= node.m
    return sum(w for w, c in zip(node.weights, node.children) if opens_by_sets(c, opened)) >= node.W


def is_threshold_by_sets(system, k: int) -> bool:
    """Every coalition, not just the two critical layers."""
    for size in range(system.n + 1):
        for coalition in combinations(range(system.n), size):
            opened = set().union(*(system.keys[p] for p in coalition)) if coalition else set()
            if opens_by_sets(system.circuit, opened) != (size >= k):
                return False
    return True


def pytest_collection_modifyitems(config, items):
    if os.environ.get("PADLOCKS_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="set PADLOCKS_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


ACCEPTANCE: dict = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE[name] = (report.passed, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        ok, secs = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({secs:.2f}s)")
