from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import frequency_color_naive, max_power, uniform_color_naive
from substitutive import builtin
from substitutive.colorings import (
    ConstantColoring,
    FactorizationColoring,
    FrequencyColoring,
    IdentityColoring,
    LetterSet,
    Literal,
    NonPrefix,
    Plain1,
    PrefSufPair,
    SeedResidue,
    UniformColoring,
    check_well_defined,
    compute_factorization_constants,
    injectivity_radius,
)
from substitutive.errors import EmptyWord, NoRadius, NotInLanguage, PeriodicWord
from substitutive.substitution import Substitution, fixed_point
from substitutive.words import Interval


def _as_oracle(c):
    if isinstance(c, Literal):
        return ("L", c.word)
    if isinstance(c, PrefSufPair):
        return ("S", c.suf, c.pref)
    raise AssertionError(c)


@pytest.fixture(scope="module")
def ex_uniform(windows):
    return UniformColoring.build(windows("ex1111"))


# -- injectivity radius -------------------------------------------------------


def test_injectivity_radius_examples():
    assert injectivity_radius(builtin("ex1111")) == 1
    assert injectivity_radius(builtin("thue_morse")) == 1
    assert injectivity_radius(Substitution.from_dict({"0": "01", "1": "00"})) == 2


def test_injectivity_radius_failures():
    with pytest.raises(NoRadius):
        injectivity_radius(Substitution.from_dict({"0": "010", "1": "000", "2": "011"}))
    with pytest.raises(ValueError):
        injectivity_radius(builtin("fibonacci"))


# -- uniform coloring ----------------------------------------------------------


def test_uniform_coloring_examples(windows, ex_uniform):
    u = windows("ex1111")
    assert ex_uniform.color(u.factor(2, 10)) == PrefSufPair("01", "100")
    assert ex_uniform.color(u.factor(1, 16)) == Literal("0100")
    assert ex_uniform.color(u.factor(3, 14)) == Literal("100")
    assert ex_uniform.color("0100") == Literal("0100")


def test_uniform_coloring_rejects_bad_input(ex_uniform):
    with pytest.raises(EmptyWord):
        ex_uniform.color("")
    with pytest.raises(NotInLanguage):
        ex_uniform.color("1111111111")
    with pytest.raises(ValueError):
        UniformColoring.build(fixed_point(builtin("dekking"), 100))


@pytest.mark.parametrize("name", ["ex1111", "thue_morse"])
def test_uniform_coloring_matches_oracle(windows, rules, name):
    u = windows(name, 4096)
    c = UniformColoring.build(u)
    rng = np.random.default_rng(11)
    for _ in range(400):
        n = int(rng.integers(1, 120))
        p = int(rng.integers(1, u.W - n))
        w = u.factor(p, p + n - 1)
        expected = uniform_color_naive(rules[name], u.symbols, w, c.ctx.K, c.ctx.r)
        assert _as_oracle(c.color(w)) == expected


def test_uniform_cases_are_total(windows, ex_uniform):
    u = windows("ex1111")
    for lo in range(2, 400):
        for n in (ex_uniform.threshold + 1, 17, 33, 50):
            case, red = ex_uniform.reduce(Interval.at(lo, n))
            assert case in ("a", "b", "c")
            if case == "b":
                assert len(red) * ex_uniform.L == n
            if case == "c":
                assert len(red) == n and is_bar(u, red.lo) and is_bar(u, red.hi + 1)


def is_bar(u, x):
    return bool(u.is_bar_mask(1)[x])


def test_uniform_recursion_depth_is_logarithmic(windows):
    u = windows("ex1111")
    c = UniformColoring.build(u)
    for n in (64, 256, 1024):
        c.color(u.factor(1000, 1000 + n - 1))
    assert c.max_depth <= 2 * (1024).bit_length()


def test_well_defined_on_ex1111(windows):
    c = UniformColoring.build(windows("ex1111"))
    report = check_well_defined(c, max_len=64, trials=2)
    assert report.passed
    assert report.factors_checked > 1000


def test_well_defined_on_thue_morse(windows):
    c = UniformColoring.build(windows("thue_morse", 2**14))
    assert check_well_defined(c, max_len=40).passed


class _SwappedOnLaterOccurrences(UniformColoring):
    """Deliberately broken: swaps the pair for occurrences other than the first."""

    def color_at(self, I, _depth=0):
        c = super().color_at(I, _depth)
        first = self.u.symbols.find(self.u.factor(I.lo, I.hi)) + 1
        if isinstance(c, PrefSufPair) and I.lo != first:
            return PrefSufPair(c.pref, c.suf)
        return c


def test_well_defined_check_catches_a_broken_coloring(windows):
    u = windows("ex1111", 2**13)
    good = UniformColoring.build(u)
    bad = _SwappedOnLaterOccurrences(good.ctx)
    report = check_well_defined(bad, max_len=24)
    assert not report.passed
    I, J, ci, cj = report.failures[0]
    assert u.factor(I.lo, I.hi) == u.factor(J.lo, J.hi) and ci != cj


# -- color encoding ---------------------------------------------------------------


def test_color_encoding_is_canonical():
    assert Literal("01").encode() == b"L\x00\x00\x00\x0201"
    assert PrefSufPair("a", "bc").encode() != PrefSufPair("ab", "c").encode()
    assert SeedResidue("010", 3).to_json() == ["SeedResidue", "010", 3]
    assert NonPrefix().encode() == b"N"
    assert Plain1() == Plain1() and Plain1() != NonPrefix()
    assert LetterSet(("a", "c")).to_json() == ["LetterSet", "ac"]


def test_simple_colorings(windows):
    u = windows("thue_morse", 256)
    codes, pal = IdentityColoring().factor_colors(u, 3)
    assert [pal[i].word for i in codes] == [u.symbols[s:s + 3] for s in range(u.W - 2)]
    codes, pal = ConstantColoring().factor_colors(u, 5)
    assert set(codes.tolist()) == {0} and pal == [Plain1()]


# -- frequency coloring ------------------------------------------------------------


def test_frequency_coloring_thue_morse():
    c = FrequencyColoring.build(builtin("thue_morse"))
    assert c.color("001") == LetterSet(("0",))
    assert c.color("01") == LetterSet(())
    assert c.color("011") == LetterSet(("1",))


@pytest.mark.parametrize("name", ["thue_morse", "dekking", "fibonacci", "tribonacci"])
def test_frequency_coloring_matches_oracle(windows, name):
    u = windows(name, 4096)
    c = FrequencyColoring.build(u.substitution)
    # factors up to length 40 are far from the frequencies compared with 1e-30
    freqs = {}
    for a in u.substitution.alphabet:
        lo, hi = c.freq.interval(a, Fraction(1, 10**30))
        freqs[a] = (lo + hi) / 2
    for n in (1, 2, 5, 13, 40):
        codes, pal = c.factor_colors(u, n)
        for s in range(0, u.W - n + 1, 7):
            w = u.symbols[s:s + n]
            got = pal[codes[s]]
            assert frozenset(got.letters) == frequency_color_naive(w, freqs)
            assert got == c.color(w)


def test_frequency_coloring_irrational_is_never_balanced(windows):
    # for irrational frequencies no factor hits d_a exactly, so some letter exceeds it
    u = windows("dekking", 4096)
    c = FrequencyColoring.build(u.substitution)
    for n in range(1, 30):
        codes, pal = c.factor_colors(u, n)
        assert all(pal[i].letters for i in set(codes.tolist()))


# -- factorization coloring ----------------------------------------------------------


@pytest.fixture(scope="module")
def ex_factorization(windows):
    return FactorizationColoring.build(windows("ex1111", 2**14))


def test_factorization_constants_ex1111(ex_factorization):
    ctx = ex_factorization.ctx
    assert (ctx.K, ctx.L, ctx.k0, ctx.q, ctx.P) == (0, 4, 4, 3, 4)
    assert ctx.L_q == 64 and ctx.K_q == 0


def test_factorization_coloring_examples(windows, ex_factorization):
    c = ex_factorization
    z = builtin("ex1111")
    assert c.color("11") == NonPrefix()
    assert c.color("0100") == Literal("0100")
    assert c.color(z.power(3).apply("010")) == SeedResidue("010", 3)


@pytest.mark.parametrize("name", ["ex1111", "thue_morse", "dekking"])
def test_factorization_constants_invariants(windows, name):
    u = windows(name, 2**14)
    ctx = compute_factorization_constants(u)
    T = ctx.threshold
    assert ctx.k0 == max_power(u.symbols[:4096], T) + 1
    z = u.substitution
    assert min(z.image_lengths(ctx.q)) > ctx.k0 * (ctx.K + 2 * ctx.L)
    assert ctx.q == 1 or min(z.image_lengths(ctx.q - 1)) <= ctx.k0 * (ctx.K + 2 * ctx.L)
    assert ctx.P > ctx.q
    assert min(z.image_lengths(ctx.P)) > 2 * ctx.L_q + ctx.K_q
    assert ctx.P == ctx.q + 1 or min(z.image_lengths(ctx.P - 1)) <= 2 * ctx.L_q + ctx.K_q


def test_thue_morse_k0(windows):
    # Thue-Morse is overlap-free but contains squares
    ctx = compute_factorization_constants(windows("thue_morse", 2**14))
    assert ctx.k0 == 3


def test_periodic_word_is_rejected():
    u = fixed_point(Substitution.from_dict({"0": "01", "1": "01"}), 4096)
    with pytest.raises(PeriodicWord):
        compute_factorization_constants(u, K=0)


@pytest.mark.parametrize("name", ["ex1111", "dekking"])
def test_nonprefix_exactly_for_nonprefixes(windows, name):
    u = windows(name, 2**14)
    c = FactorizationColoring.build(u)
    rng = np.random.default_rng(5)
    for _ in range(300):
        n = int(rng.integers(1, 513))
        p = int(rng.integers(1, u.W - n))
        w = u.factor(p, p + n - 1)
        assert (c.color(w) == NonPrefix()) == (not u.symbols.startswith(w))


@pytest.mark.parametrize("name", ["ex1111", "dekking", "thue_morse"])
def test_prefix_colors_vectorized_agree(windows, name):
    u = windows(name, 2**12)
    c = FactorizationColoring.build(u)
    codes, pal = c.prefix_colors()
    for t in range(1, u.W + 1, 3):
        assert pal[codes[t - 1]] == c.prefix_color(t)


def test_factor_colors_mark_prefix_occurrences(windows, ex_factorization):
    u = ex_factorization.u
    codes, pal = ex_factorization.factor_colors(u, 20)
    assert pal[0] == NonPrefix()
    for s in range(0, 2000):
        assert (codes[s] == 1) == (u.symbols[s:s + 20] == u.symbols[:20])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 2**12))
def test_seed_residue_reflects_desubstitution_depth(t):
    u = fixed_point(builtin("ex1111"), 2**14)
    c = FactorizationColoring.build(u, K=0)
    col = c.prefix_color(t)
    if isinstance(col, SeedResidue):
        v = col.word
        assert len(v) <= c.threshold < 4 * len(v)
        # t = 4^j |v| for some j with j mod P = residue
        j = 0
        while 4**j * len(v) < t:
            j += 1
        assert 4**j * len(v) == t and j % c.ctx.P == col.residue
