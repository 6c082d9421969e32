from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import is_threshold_by_sets
from padlocks.constructions import NINE_LOCK_TRIADS, ELEVEN_LOCK_TRIADS, build_direct
from padlocks.errors import CapacityError
from padlocks.model import Leaf, Threshold, ThresholdSystem
from padlocks.verify import (
    check_necessary_condition,
    check_packing,
    check_sperner,
    count_six_key_pairs,
    count_six_key_triples,
    triples_not_matched_by_pairs,
    verify_threshold,
)


def test_direct_report():
    r = verify_threshold(build_direct(2, 3), 2)
    assert r.verdict and r.padlocks == 3
    assert r.to_json() == {"verdict": True, "k": 2, "n": 3, "padlocks": 3, "failing_open": None, "failing_closed": None}


def test_counterexamples():
    s = build_direct(2, 3)
    wrong_high = verify_threshold(s, 3)
    assert not wrong_high.verdict and wrong_high.failing_closed == [0, 1]
    wrong_low = verify_threshold(s, 1)
    assert not wrong_low.verdict and wrong_low.failing_open == [0]


def test_limit_is_enforced():
    with pytest.raises(CapacityError):
        verify_threshold(build_direct(2, 21), 2)
    assert verify_threshold(build_direct(20, 21), 20, limit=21).verdict


systems = st.integers(2, 5).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.sets(st.integers(0, 3), min_size=1), min_size=n, max_size=n),
        st.integers(1, 4),
    )
)


@settings(max_examples=150)
@given(systems, st.integers(1, 5))
def test_verifier_matches_full_enumeration(case, k):
    n, keys, m = case
    k = min(k, n)
    used = sorted(set().union(*keys))
    m = min(m, len(used))
    s = ThresholdSystem(n, 4, Threshold(m, tuple(Leaf(i) for i in used)), tuple(keys))
    # both layers suffice only because the circuit is monotone
    assert verify_threshold(s, k).verdict == is_threshold_by_sets(s, k)


def test_sperner():
    assert check_sperner([{0, 1}, {1, 2}, {0, 2}]) == (True, None)
    ok, pair = check_sperner([{0, 1}, {0}])
    assert not ok and pair == (1, 0)


def test_necessary_condition():
    assert check_necessary_condition([set(t) for t in NINE_LOCK_TRIADS], 3).holds
    bad = check_necessary_condition([{1, 2, 3}, {1, 2, 4}, {3, 4, 5}, {5, 1, 2}], 3)
    assert not bad.holds
    with pytest.raises(ValueError):
        check_necessary_condition([{0}], 2)


def test_packing():
    assert check_packing(NINE_LOCK_TRIADS, 2, 1)
    assert not check_packing([(1, 2, 3), (1, 2, 4)], 2, 1)
    assert check_packing([(1, 2, 3), (1, 2, 4)], 2, 2)


def _six_triples_oracle(blocks):
    return sum(1 for c in combinations(blocks, 3) if len(set().union(*c)) == 6)


def test_six_key_counts_against_set_oracle():
    assert count_six_key_triples(NINE_LOCK_TRIADS)[0] == _six_triples_oracle(NINE_LOCK_TRIADS) == 72
    assert count_six_key_triples(ELEVEN_LOCK_TRIADS)[0] == _six_triples_oracle(ELEVEN_LOCK_TRIADS) == 56
    pairs = sum(1 for a, b in combinations(ELEVEN_LOCK_TRIADS, 2) if len(set(a) | set(b)) == 6)
    assert count_six_key_pairs(ELEVEN_LOCK_TRIADS)[0] == pairs == 24


def test_triad_pairs_never_cover_a_six_key_triple():
    assert triples_not_matched_by_pairs(NINE_LOCK_TRIADS)
