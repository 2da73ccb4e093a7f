from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import occurrences_naive, z_naive
from substitutive.errors import EmptyWord, InvalidSymbol
from substitutive.words import (
    Alphabet,
    FactorIndex,
    Interval,
    is_abelian_equivalent,
    occurrences,
    parikh,
    power_exponents,
    prefix_match_length,
    z_array,
)

BIN = Alphabet(("0", "1"))
ABC = Alphabet(("a", "b", "c"))
binary_words = st.text(alphabet="01", max_size=40)


def test_parikh_examples():
    assert parikh("", BIN) == (0, 0)
    assert parikh("0100", BIN) == (3, 1)
    assert parikh("aabc", ABC) == (2, 1, 1)


def test_parikh_rejects_foreign_symbol():
    with pytest.raises(InvalidSymbol):
        parikh("012", BIN)


@given(binary_words, binary_words)
def test_parikh_is_additive(a, b):
    pa, pb, pab = parikh(a, BIN), parikh(b, BIN), parikh(a + b, BIN)
    assert pab == tuple(x + y for x, y in zip(pa, pb))


def test_abelian_equivalence():
    ab = Alphabet(("a", "b"))
    assert is_abelian_equivalent("ab", "ba", ab)
    assert not is_abelian_equivalent("ab", "aa", ab)
    assert is_abelian_equivalent("0110", "1001", BIN)


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet(("0",))
    with pytest.raises(ValueError):
        Alphabet(("0", "0"))
    assert BIN.index("1") == 1
    assert list(BIN.encode("0110")) == [0, 1, 1, 0]


def test_interval_basics():
    I = Interval(2, 10)
    assert len(I) == 9
    assert Interval.at(2, 9) == I
    with pytest.raises(ValueError):
        Interval(0, 3)
    with pytest.raises(ValueError):
        Interval(5, 4)


def test_occurrences_in_thue_morse_prefix():
    tm = "01101001"
    # 0 1 1 0 1 0 0 1
    assert occurrences("01", tm) == [1, 4, 7]
    assert occurrences("1001", tm) == [5]
    assert occurrences("111", tm) == []
    with pytest.raises(EmptyWord):
        occurrences("", tm)


@given(st.text(alphabet="01", min_size=1, max_size=5), st.text(alphabet="01", max_size=60))
def test_occurrences_match_naive_scan(w, s):
    assert occurrences(w, s) == occurrences_naive(w, s)


@given(st.text(alphabet="01", min_size=2, max_size=6), st.text(alphabet="01", max_size=60))
def test_occurrences_are_occurrences_of_every_prefix(w, s):
    occ = occurrences(w, s)
    for j in range(1, len(w) + 1):
        assert set(occ) <= set(occurrences(w[:j], s))


def test_prefix_match_length_on_thue_morse():
    tm = "01101001"
    assert prefix_match_length(tm, 0) == (8, True)
    assert prefix_match_length(tm, 1) == (0, False)
    # u[3..] = 101001 against 0110...: no match
    assert prefix_match_length(tm, 2) == (0, False)
    # u[4..] = 01001 against 01101: two letters
    assert prefix_match_length(tm, 3) == (2, False)
    assert prefix_match_length(tm, 7) == (0, False)


def test_prefix_match_length_capped_flag():
    s = "0101"
    assert prefix_match_length(s, 2) == (2, True)


@settings(max_examples=50)
@given(st.text(alphabet="01", min_size=1, max_size=200))
def test_z_array_matches_quadratic_oracle(s):
    assert z_array(s).tolist() == z_naive(s)


def test_z_array_on_long_window(windows):
    u = windows("thue_morse", 2048)
    assert u.z.tolist() == z_naive(u.symbols)


@settings(max_examples=40)
@given(st.text(alphabet="012", min_size=1, max_size=80), st.integers(1, 12))
def test_factor_index_ids_are_exact(s, length):
    if length > len(s):
        return
    codes = np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")
    ids = FactorIndex(codes).ids(length)
    words = [s[p:p + length] for p in range(len(s) - length + 1)]
    for i in range(len(words)):
        for j in range(len(words)):
            assert (ids[i] == ids[j]) == (words[i] == words[j])


@settings(max_examples=40)
@given(st.text(alphabet="01", min_size=4, max_size=60), st.data())
def test_factor_index_mixed_keys(s, data):
    codes = np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")
    idx = FactorIndex(codes)
    pairs = data.draw(
        st.lists(st.tuples(st.integers(0, len(s) - 1), st.integers(1, len(s))), min_size=2, max_size=10)
    )
    pairs = [(p, min(l, len(s) - p)) for p, l in pairs]
    keys = idx.keys(np.array([p for p, _ in pairs]), np.array([l for _, l in pairs]))
    for (p1, l1), k1 in zip(pairs, keys):
        for (p2, l2), k2 in zip(pairs, keys):
            assert (k1 == k2) == (s[p1:p1 + l1] == s[p2:p2 + l2])


@given(st.text(alphabet="01", min_size=1, max_size=40), st.integers(1, 5))
def test_power_exponents_against_direct_count(s, l):
    exps = power_exponents(s, l)
    for p in range(len(s) - l + 1):
        w = s[p:p + l]
        e = 1
        while s[p + e * l:p + (e + 1) * l] == w:
            e += 1
        assert exps[p] == e
