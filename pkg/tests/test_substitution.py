from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import expand
from substitutive import builtin
from substitutive.errors import InvalidSymbol, NoSeed, ParseError
from substitutive.substitution import (
    Substitution,
    empirical_frequencies,
    extend_window,
    fixed_point,
    fixed_point_seeds,
    incidence_matrix,
    is_primitive,
    load_substitution,
    parse_substitution,
)
from substitutive.words import parikh

TM = builtin("thue_morse")
EX = builtin("ex1111")
DEK = builtin("dekking")


def test_apply_examples():
    assert TM.apply("0") == "01"
    assert TM.apply("") == ""
    assert DEK.apply("ab") == "aabcbbc"
    with pytest.raises(InvalidSymbol):
        TM.apply("2")


def test_power_examples():
    assert TM.power(2)["0"] == "0110"
    assert TM.power(0).images == ("0", "1")
    assert EX.power(2)["0"] == "0100110101000100"


def test_incidence_matrix_examples():
    assert incidence_matrix(TM).tolist() == [[1, 1], [1, 1]]
    assert incidence_matrix(DEK).tolist() == [[2, 0, 1], [1, 2, 0], [1, 1, 2]]
    ident = Substitution.from_dict({"x": "x", "y": "y"})
    assert incidence_matrix(ident).tolist() == [[1, 0], [0, 1]]


def test_incidence_column_sums_are_image_lengths():
    for z in (TM, EX, DEK, builtin("tribonacci")):
        assert incidence_matrix(z).sum(axis=0).tolist() == list(z.lengths)


def test_primitivity():
    r = is_primitive(TM)
    assert r and r.exponent == 1
    r = is_primitive(DEK)
    assert r and r.exponent <= 3
    # the exponent is least: the previous power still has a zero
    M = incidence_matrix(DEK)
    assert (np.linalg.matrix_power(M, r.exponent - 1) == 0).any()
    r = is_primitive(Substitution.from_dict({"0": "00", "1": "11"}))
    assert not r
    assert r.pattern.tolist() == [[True, False], [False, True]]


def test_fixed_point_seeds():
    assert fixed_point_seeds(TM) == ["0", "1"]
    assert fixed_point_seeds(builtin("fibonacci")) == ["0"]
    assert fixed_point_seeds(builtin("justin_pirillo")) == ["0", "1"]
    with pytest.raises(NoSeed):
        fixed_point(Substitution.from_dict({"0": "1", "1": "0"}), 10)


def test_extend_window_examples():
    assert fixed_point(EX, 20).symbols == "01001101010001001101"
    assert fixed_point(DEK, 34).symbols == "aabcaabcbbcaccaabcaabcbbcaccbbcbbc"
    assert fixed_point(TM, 8).symbols == "01101001"


def test_justin_pirillo_prefix_follows_the_rules():
    u = fixed_point(builtin("justin_pirillo"), 25)
    assert u.symbols == "00001" * 4 + "11110"


def test_extension_is_monotone(rules):
    for name, r in rules.items():
        z = builtin(name)
        small = fixed_point(z, 100)
        big = small.extend(5000)
        assert big.W == 5000
        assert big.symbols[:100] == small.symbols
        assert big.symbols == expand(r, small.seed, 5000)
        assert z.apply(big.symbols).startswith(big.symbols)
        assert extend_window(big, 10) is big


@settings(max_examples=30)
@given(st.text(alphabet="abc", max_size=12), st.integers(0, 5))
def test_power_is_iterated_apply(w, k):
    direct = w
    for _ in range(k):
        direct = DEK.apply(direct)
    assert DEK.power(k).apply(w) == direct


@settings(max_examples=30)
@given(st.text(alphabet="abc", max_size=30))
def test_parikh_of_image_is_matrix_product(w):
    M = incidence_matrix(DEK)
    assert list(parikh(DEK.apply(w), DEK.alphabet)) == (M @ np.array(parikh(w, DEK.alphabet))).tolist()


@settings(max_examples=20)
@given(st.text(alphabet="abc", max_size=10), st.integers(0, 6))
def test_image_length_bookkeeping(w, k):
    M = incidence_matrix(DEK).astype(object)
    v = np.array(parikh(w, DEK.alphabet), dtype=object)
    for _ in range(k):
        v = M @ v
    assert len(DEK.power(k).apply(w)) == sum(v)


def test_non_balance_identity_exact():
    for n in range(1, 13):
        zn = EX.power(n)
        assert zn["1"].count("1") - zn["0"].count("1") == 2**n
        assert len(zn["0"]) == len(zn["1"]) == 4**n


def test_image_lengths_exact_for_large_powers():
    assert list(EX.image_lengths(30)) == [4**30, 4**30]


def test_empirical_frequencies():
    u = fixed_point(TM, 8)
    assert empirical_frequencies(u, 8) == (Fraction(1, 2), Fraction(1, 2))
    assert empirical_frequencies(u, 1) == (Fraction(1), Fraction(0))


def test_parse_format():
    text = "# comment\n\n0 -> 01   # trailing\n1->10\n"
    z = parse_substitution(text, "t")
    assert z.images == ("01", "10")
    assert str(z.alphabet) == "01"


@pytest.mark.parametrize(
    "text, line",
    [
        ("0 -> 01\n0 -> 10\n", 2),
        ("0 -> 01\n1 10\n", 2),
        ("ab -> 01\n", 1),
        ("0 -> 02\n1 -> 10\n", 1),
        ("0 ->\n1 -> 10\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        parse_substitution(text)
    assert exc.value.line == line


def test_load_from_path_and_builtin_name(tmp_path):
    p = tmp_path / "mine.sub"
    p.write_text("x -> xy\ny -> x\n", encoding="utf-8")
    z = load_substitution(p)
    assert z.name == "mine" and z["x"] == "xy"
    assert load_substitution("dekking").images == DEK.images
