import random
from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from padlocks.bounds import knot_wrapping_count
from padlocks.errors import BudgetExceeded
from padlocks.knots import (
    RING,
    KnotWord,
    build_knot,
    format_word,
    is_open,
    parse_word,
    reduce,
    reduce_tokens,
    search_minimal,
    verify_knot_threshold,
)

KNOWN_1_OF_3 = "x1 x2 x3 x2' x3' x1' x3 x2 x3' x2'"

tokens = st.lists(st.tuples(st.integers(1, 3), st.sampled_from([1, -1])), max_size=14)


def _random_order_reduce(toks, rng):
    # cancel any adjacent inverse pair, picked at random, until none is left
    toks = list(toks)
    while True:
        spots = [i for i in range(len(toks) - 1) if toks[i][0] == toks[i + 1][0] and toks[i][1] == -toks[i + 1][1]]
        if not spots:
            return toks
        i = rng.choice(spots)
        del toks[i : i + 2]


def test_text_format():
    w = parse_word("x1 x2' O O'")
    assert w.tokens == ((1, 1), (2, -1), (RING, 1), (RING, -1))
    assert format_word(w) == "x1 x2' O O'"
    with pytest.raises(ValueError):
        parse_word("y1")


def test_ring_cannot_open():
    with pytest.raises(ValueError):
        reduce(parse_word("O x1 O'"), {RING})
    assert not is_open(parse_word("O x1 O' x1'"), set())
    assert is_open(parse_word("O x1 O'"), {1})


@given(tokens, st.sets(st.integers(1, 3)), st.integers(0, 2**16))
def test_reduction_is_confluent(toks, opened, seed):
    kept = [t for t in toks if t[0] not in opened]
    assert _random_order_reduce(kept, random.Random(seed)) == reduce_tokens(toks, opened)


@given(tokens, st.sets(st.integers(1, 3)))
def test_reduction_is_idempotent(toks, opened):
    w = KnotWord(tuple(toks), 3)
    once = reduce(w, opened)
    assert reduce(once, opened) == once


def test_commutator_is_or():
    w = build_knot(1, 2)
    assert format_word(w) == "x1 x2 x1' x2'"
    assert verify_knot_threshold(w, 1).verdict


def test_known_ten_letter_word():
    assert verify_knot_threshold(parse_word(KNOWN_1_OF_3), 1).verdict


def test_plain_product_is_n_of_n():
    for n in range(1, 7):
        w = KnotWord(tuple((i, 1) for i in range(1, n + 1)), n)
        assert verify_knot_threshold(w, n).verdict


def _oracle_threshold(word, k, n):
    for size in range(n + 1):
        for c in combinations(range(1, n + 1), size):
            if is_open(word, c) != (size >= k):
                return False
    return True


@pytest.mark.parametrize("n", range(1, 7))
def test_built_words_verify_and_are_monotone(n):
    for k in range(1, n + 1):
        w = build_knot(k, n)
        assert _oracle_threshold(w, k, n), (k, n)


def test_word_shape():
    for n in range(1, 11):
        for k in range(1, n + 1):
            w = build_knot(k, n)
            assert len(w) == knot_wrapping_count(k, n)
            if k < n:
                assert len(w) % 2 == 0
                assert all(c >= 2 for s, c in w.occurrences().items() if s != RING)


def test_verify_rejects_wrong_k():
    r = verify_knot_threshold(build_knot(2, 4), 3)
    assert not r.verdict


def _brute_force_has_word(k, n, length):
    # every word of the given length, no pruning
    alphabet = [(g, e) for g in range(1, n + 1) for e in (1, -1)]
    return any(_oracle_threshold(KnotWord(w, n), k, n) for w in product(alphabet, repeat=length))


def test_search_agrees_with_brute_force():
    for k, n in [(1, 2), (2, 3)]:
        res = search_minimal(k, n, 8)
        assert res is not None
        for shorter in range(1, res.length):
            assert not _brute_force_has_word(k, n, shorter)
        assert _brute_force_has_word(k, n, res.length)


def test_search_one_of_three():
    res = search_minimal(1, 3, 10)
    assert res.length == 10
    assert verify_knot_threshold(res.word, 1).verdict
    assert all(c >= 2 for c in res.word.occurrences().values())


@pytest.mark.parametrize("n", range(2, 5))
def test_search_n_minus_one(n):
    res = search_minimal(n - 1, n, 2 * n)
    assert res.length == 2 * n


def test_search_n_of_n_is_the_product():
    assert search_minimal(3, 3, 6).length == 3


def test_search_budget():
    with pytest.raises(BudgetExceeded):
        search_minimal(1, 3, 10, budget=100)


def test_search_gives_up():
    assert search_minimal(1, 3, 8) is None


@pytest.mark.slow
def test_six_of_eleven_word():
    w = build_knot(6, 11)
    assert len(w) == 279038
    assert verify_knot_threshold(w, 6).verdict
