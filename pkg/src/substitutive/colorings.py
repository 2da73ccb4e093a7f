"""Finite colorings of the factors of a fixed point.

Three constructions are provided:

* :class:`UniformColoring` for constant-length substitutions, which avoids
  uniform monochromatic powers;
* :class:`FrequencyColoring`, the set of letters whose density in a factor
  exceeds their frequency in ``u``, which avoids monochromatic powers with
  bounded gaps;
* :class:`FactorizationColoring`, which avoids monochromatic factorizations
  ``u = u_1 u_2 u_3 ...``.

Every coloring maps a word to a :class:`Color`. ``factor_colors`` colors all
factors of one length in a window at once and is what the scanners use.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    EmptyWord,
    NoRadius,
    NotInLanguage,
    NotPrimitive,
    PeriodicWord,
    WindowExhausted,
)
from .frequency import FrequencyVector
from .recognizability import RecognizabilityCertificate, decompose, estimate_recognizability_index
from .substitution import FixedPointWindow, Substitution, is_primitive
from .words import Interval, power_exponents


class Color:
    """Base class of the tagged color union."""

    tag = b"?"

    def payload(self) -> tuple:
        return ()

    def encode(self) -> bytes:
        """Canonical bytes: tag, then length-prefixed UTF-8 payload fields."""
        out = bytearray(self.tag)
        for item in self.payload():
            data = str(item).encode("utf-8")
            out += struct.pack(">I", len(data)) + data
        return bytes(out)

    def to_json(self) -> list:
        return [type(self).__name__, *self.payload()]


@dataclass(frozen=True)
class Literal(Color):
    word: str
    tag = b"L"

    def payload(self):
        return (self.word,)


@dataclass(frozen=True)
class PrefSufPair(Color):
    suf: str
    pref: str
    tag = b"S"

    def payload(self):
        return (self.suf, self.pref)


@dataclass(frozen=True)
class LetterSet(Color):
    letters: tuple[str, ...]
    tag = b"F"

    def payload(self):
        return ("".join(self.letters),)


@dataclass(frozen=True)
class NonPrefix(Color):
    tag = b"N"


@dataclass(frozen=True)
class SeedResidue(Color):
    word: str
    residue: int
    tag = b"R"

    def payload(self):
        return (self.word, self.residue)


@dataclass(frozen=True)
class Plain1(Color):
    tag = b"1"


class Coloring:
    """Interface shared by all colorings."""

    name = "coloring"

    def color(self, w: str) -> Color:
        raise NotImplementedError

    def factor_colors(self, u: FixedPointWindow, n: int) -> tuple[np.ndarray, list[Color]]:
        """Color codes of ``u[s..s+n-1]`` for ``s = 1 .. W-n+1`` and the palette they index."""
        ids = u.factor_index.ids(n)
        _, first, inv = np.unique(ids, return_index=True, return_inverse=True)
        palette: list[Color] = []
        lookup: dict[Color, int] = {}
        per_factor = np.empty(len(first), dtype=np.int64)
        s = u.symbols
        for i, f in enumerate(first):
            c = self.color(s[f:f + n])
            code = lookup.get(c)
            if code is None:
                code = lookup[c] = len(palette)
                palette.append(c)
            per_factor[i] = code
        return per_factor[inv.ravel()], palette

    def describe(self) -> dict:
        return {"name": self.name}


class IdentityColoring(Coloring):
    """``c(w) = w``; monochromatic powers are then ordinary powers."""

    name = "identity"

    def color(self, w: str) -> Color:
        if not w:
            raise EmptyWord("cannot color the empty word")
        return Literal(w)

    def factor_colors(self, u, n):
        ids = u.factor_index.ids(n)
        _, first, inv = np.unique(ids, return_index=True, return_inverse=True)
        return inv.ravel().astype(np.int64), [Literal(u.symbols[f:f + n]) for f in first]


class ConstantColoring(Coloring):
    name = "constant"

    def color(self, w: str) -> Color:
        if not w:
            raise EmptyWord("cannot color the empty word")
        return Plain1()

    def factor_colors(self, u, n):
        return np.zeros(u.W - n + 1, dtype=np.int64), [Plain1()]


# -- uniform powers ---------------------------------------------------------


def injectivity_radius(zeta: Substitution) -> int:
    """Least ``r`` such that the first ``r`` letters and the last ``L - r + 1``
    letters of the images each determine the letter."""
    L = zeta.constant_length()
    if L is None:
        raise ValueError(f"{zeta} does not have constant length")
    for r in range(1, L + 1):
        heads = {img[:r] for img in zeta.images}
        tails = {img[r - 1:] for img in zeta.images}
        if len(heads) == len(zeta.images) and len(tails) == len(zeta.images):
            return r
    raise NoRadius(f"no r in 1..{L} makes both the r-prefix and r-suffix maps injective for {zeta}")


@dataclass(frozen=True)
class UniformColoringContext:
    zeta: Substitution
    K: int
    r: int
    window: FixedPointWindow
    certificate: RecognizabilityCertificate | None = field(default=None, compare=False)

    @property
    def L(self) -> int:
        return self.zeta.constant_length()

    @property
    def threshold(self) -> int:
        return 2 * self.L + self.K


class UniformColoring(Coloring):
    """Coloring for fixed points of constant-length substitutions.

    Short words (``|w| <= 2L + K``) are their own color. A longer word is
    located at its first occurrence ``I`` in the window and split at the
    cutting bars; then

    (a) if the cut-off prefix and suffix have total length in ``(0, L)`` or
        ``(L, 2L)``, the color is the pair ``(suffix, prefix)``;
    (b) if ``I`` is fitted, the color is the color of its preimage;
    (c) if prefix and suffix add up to exactly ``L``, the interval is shifted
        to the neighbouring fitted interval of the same length (rightwards when
        the suffix has at least ``r`` letters, leftwards otherwise) and that
        word's color is used.
    """

    name = "uniform"

    def __init__(self, ctx: UniformColoringContext):
        if ctx.zeta.constant_length() is None:
            raise ValueError("the uniform coloring needs a constant-length substitution")
        self.ctx = ctx
        self.u = ctx.window
        self.L = ctx.L
        self.threshold = ctx.threshold
        self._memo: dict[str, Color] = {}
        self.max_depth = 0

    @classmethod
    def build(cls, u: FixedPointWindow, K: int | None = None, r: int | None = None) -> "UniformColoring":
        cert = None
        if K is None:
            cert = estimate_recognizability_index(u)
            K = cert.K_hat
        if r is None:
            r = injectivity_radius(u.substitution)
        return cls(UniformColoringContext(u.substitution, K, r, u, cert))

    def describe(self):
        return {"name": self.name, "L": self.L, "K": self.ctx.K, "r": self.ctx.r}

    def color(self, w: str) -> Color:
        if not w:
            raise EmptyWord("cannot color the empty word")
        if len(w) <= self.threshold:
            return Literal(w)
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        p = self.u.symbols.find(w)
        if p < 0:
            raise NotInLanguage(f"{w[:40]!r}... does not occur in the window of length {self.u.W}")
        c = self.color_at(Interval.at(p + 1, len(w)))
        self._memo[w] = c
        return c

    def reduce(self, I: Interval) -> tuple[str, object]:
        """The case taken at ``I`` and what it reduces to.

        Returns ``("a", (suf, pref))``, ``("b", preimage interval)`` or
        ``("c", shifted interval)``.
        """
        d = decompose(self.u, I)
        total = len(d.pref) + len(d.suf)
        if total == 0:
            return "b", Interval(d.p + 1, d.q)
        if total != self.L:
            return "a", (d.suf, d.pref)
        if len(d.suf) >= self.ctx.r:
            return "c", Interval(d.m, d.successor_bar() - 1)
        return "c", Interval(d.predecessor_bar(), d.M - 1)

    def color_at(self, I: Interval, _depth: int = 0) -> Color:
        """Color of ``u_I`` computed through this particular occurrence."""
        if len(I) <= self.threshold:
            return Literal(self.u.factor(I.lo, I.hi))
        # each (c) step is followed by a (b) step, which divides the length by L
        if _depth > 2 * (len(I).bit_length() + 2):
            raise RuntimeError(f"recursion did not terminate at {I}")
        self.max_depth = max(self.max_depth, _depth)
        case, red = self.reduce(I)
        if case == "a":
            return PrefSufPair(*red)
        word = self.u.factor(red.lo, red.hi)
        if len(word) <= self.threshold:
            return Literal(word)
        hit = self._memo.get(word)
        if hit is None:
            p = self.u.symbols.find(word)
            hit = self.color_at(Interval.at(p + 1, len(word)), _depth + 1)
            self._memo[word] = hit
        return hit


# -- bounded gaps -----------------------------------------------------------


@dataclass(frozen=True)
class FrequencyColoringContext:
    frequencies: FrequencyVector

    @property
    def alphabet(self):
        return self.frequencies.alphabet


class FrequencyColoring(Coloring):
    """``c(w)`` is the set of letters ``a`` with ``|w|_a / |w| > d_a``.

    Comparisons are exact, also for irrational frequencies.
    """

    name = "frequency"

    def __init__(self, ctx: FrequencyColoringContext | FrequencyVector):
        if isinstance(ctx, FrequencyVector):
            ctx = FrequencyColoringContext(ctx)
        self.ctx = ctx
        self.freq = ctx.frequencies
        self.alphabet = ctx.alphabet
        self._tables: dict[int, np.ndarray] = {}

    @classmethod
    def build(cls, zeta: Substitution) -> "FrequencyColoring":
        return cls(FrequencyVector(zeta))

    def describe(self):
        return {"name": self.name, "frequencies": [str(f) for f in self.freq.approx()]}

    def _table(self, n: int) -> np.ndarray:
        """``T[a, c]`` is True iff ``c / n > d_a``."""
        t = self._tables.get(n)
        if t is None:
            t = np.array(
                [[self.freq.exceeds(a, Fraction(c, n)) for c in range(n + 1)] for a in self.alphabet],
                dtype=bool,
            )
            self._tables[n] = t
        return t

    def color(self, w: str) -> Color:
        if not w:
            raise EmptyWord("cannot color the empty word")
        self.alphabet.validate(w)
        n = len(w)
        return LetterSet(tuple(a for a in self.alphabet if self.freq.exceeds(a, Fraction(w.count(a), n))))

    def palette(self) -> list[Color]:
        """All ``2^|A|`` letter sets, indexed by bitmask."""
        letters = self.alphabet.letters
        return [
            LetterSet(tuple(a for i, a in enumerate(letters) if mask >> i & 1)) for mask in range(1 << len(letters))
        ]

    def factor_colors(self, u, n):
        S = u.prefix_counts
        counts = S[n:] - S[:-n]
        table = self._table(n)
        codes = np.zeros(len(counts), dtype=np.int64)
        for i in range(len(self.alphabet)):
            codes |= table[i][counts[:, i]].astype(np.int64) << i
        return codes, self.palette()


# -- factorizations ---------------------------------------------------------


@dataclass(frozen=True)
class FactorizationColoringContext:
    """Constants for the factorization coloring, stamped with the window they came from.

    ``k0`` exceeds every exponent ``e`` such that some ``w^e`` with
    ``|w| <= 2L + K`` occurs in the window; ``q`` is the least level with
    ``|zeta^q(a)| > k0 (K + 2L)`` for all letters; ``P > q`` is least with
    ``|zeta^P(a)| > 2 L_q + K_q``.
    """

    zeta: Substitution
    K: int
    L: int
    k0: int
    q: int
    P: int
    K_q: int
    L_q: int
    window: FixedPointWindow
    certificates: tuple = field(default=(), compare=False)

    @property
    def threshold(self) -> int:
        return 2 * self.L + self.K

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "L": self.L,
            "k0": self.k0,
            "q": self.q,
            "P": self.P,
            "K_q": self.K_q,
            "L_q": self.L_q,
            "window": self.window.W,
        }


def max_power_exponent(u: FixedPointWindow, max_base_len: int) -> tuple[int, int, int]:
    """``(e, base_len, start)`` for the largest integer power ``w^e`` with ``|w| <= max_base_len``."""
    best = (1, 1, 1)
    for l in range(1, min(max_base_len, u.W) + 1):
        exps = power_exponents(u.symbols, l)
        if len(exps):
            p = int(np.argmax(exps))
            if exps[p] > best[0]:
                best = (int(exps[p]), l, p + 1)
    return best


def compute_factorization_constants(
    u: FixedPointWindow,
    K: int | None = None,
    certificate: RecognizabilityCertificate | None = None,
) -> FactorizationColoringContext:
    """Derive ``k0, q, K_q, P`` from the window.

    ``K`` defaults to the window estimate of the recognizability index.
    ``K_q`` is estimated on the same window at level ``q``; lengths up to
    ``K L^(q-1) + 2 L_q`` are scanned, which covers every length at which a
    violation can occur when ``K`` is correct.
    """
    zeta = u.substitution
    if not is_primitive(zeta):
        raise NotPrimitive(f"{zeta} is not primitive")
    certs = []
    if K is None:
        certificate = certificate or estimate_recognizability_index(u)
        K = certificate.K_hat
    if certificate is not None:
        certs.append(certificate)
    L = zeta.max_length
    T = 2 * L + K
    e, base, start = max_power_exponent(u, T)
    if e * base > u.W // 4:
        raise PeriodicWord(
            f"u[{start}..] carries a {e}-th power of a word of length {base}; the fixed point looks periodic"
        )
    k0 = e + 1
    q = 1
    while min(zeta.image_lengths(q)) <= k0 * (K + 2 * L):
        q += 1
    L_q = int(max(zeta.image_lengths(q)))
    bound_q = K * L ** (q - 1)
    cap_q = min(bound_q + 2 * L_q, max(1, u.W // 2))
    cert_q = estimate_recognizability_index(u, k=q, cap=cap_q)
    certs.append(cert_q)
    K_q = cert_q.K_hat
    P = q + 1
    while min(zeta.image_lengths(P)) <= 2 * L_q + K_q:
        P += 1
    return FactorizationColoringContext(zeta, K, L, k0, q, P, K_q, L_q, u, tuple(certs))


class FactorizationColoring(Coloring):
    """Coloring that separates prefixes of ``u`` from everything else.

    Non-prefixes get :class:`NonPrefix`. A prefix of length ``<= 2L + K`` is
    its own color. A longer prefix ``w`` is desubstituted while it stays
    fitted; if this reaches a prefix ``v`` with ``|v| <= 2L + K < |zeta(v)|``
    after ``j`` steps, the color is ``(v, j mod P)``, otherwise
    :class:`Plain1`.
    """

    name = "factorization"

    def __init__(self, ctx: FactorizationColoringContext):
        self.ctx = ctx
        self.u = ctx.window
        self.threshold = ctx.threshold
        self._prefix_codes: tuple[np.ndarray, list[Color]] | None = None

    @classmethod
    def build(cls, u: FixedPointWindow, K: int | None = None) -> "FactorizationColoring":
        return cls(compute_factorization_constants(u, K))

    def describe(self):
        return {"name": self.name, **self.ctx.to_dict()}

    def color(self, w: str) -> Color:
        if not w:
            raise EmptyWord("cannot color the empty word")
        if len(w) > self.u.W:
            raise WindowExhausted(f"cannot decide whether a word of length {len(w)} is a prefix", needed=len(w))
        if not self.u.symbols.startswith(w):
            return NonPrefix()
        return self.prefix_color(len(w))

    def prefix_color(self, t: int) -> Color:
        """Color of the prefix ``u[1..t]``."""
        if t <= self.threshold:
            return Literal(self.u.prefix(t))
        mask = self.u.is_bar_mask(1)
        bars = self.u.bars(1)
        j, cur = 0, t
        while cur > self.threshold:
            if not mask[cur + 1]:
                return Plain1()
            cur = int(np.searchsorted(bars, cur + 1))
            j += 1
        return SeedResidue(self.u.prefix(cur), j % self.ctx.P)

    def prefix_colors(self) -> tuple[np.ndarray, list[Color]]:
        """Codes for the prefixes of length ``1 .. W`` (index ``t - 1``) and their palette."""
        if self._prefix_codes is not None:
            return self._prefix_codes
        W, T, P = self.u.W, self.threshold, self.ctx.P
        bars = self.u.bars(1)
        # pre[t] = q when u[1..t] is fitted with preimage u[1..q], else -1
        pre = np.full(W + 1, -1, dtype=np.int64)
        pre[bars[1:] - 1] = np.arange(1, len(bars))
        t = np.arange(1, W + 1)
        cur = t.copy()
        steps = np.zeros(W, dtype=np.int64)
        alive = cur > T
        plain = np.zeros(W, dtype=bool)
        while alive.any():
            nxt = pre[cur[alive]]
            dead = nxt < 0
            idx = np.flatnonzero(alive)
            plain[idx[dead]] = True
            cur[idx[~dead]] = nxt[~dead]
            steps[idx[~dead]] += 1
            alive = (cur > T) & ~plain
        keys = np.where(plain, -1, cur * (P + 1) + np.where(steps > 0, steps % P, P))
        uniq, inv = np.unique(keys, return_inverse=True)
        palette: list[Color] = [Plain1()]
        lookup: dict[Color, int] = {Plain1(): 0}
        mapping = np.zeros(len(uniq), dtype=np.int64)
        for i, key in enumerate(uniq):
            if key < 0:
                continue
            color = self._decode(int(key))
            code = lookup.get(color)
            if code is None:
                code = lookup[color] = len(palette)
                palette.append(color)
            mapping[i] = code
        codes = mapping[inv.ravel()]
        self._prefix_codes = (codes, palette)
        return self._prefix_codes

    def _decode(self, key: int) -> Color:
        P = self.ctx.P
        c_len, res = divmod(key, P + 1)
        return Literal(self.u.prefix(c_len)) if res == P else SeedResidue(self.u.prefix(c_len), res)

    def factor_colors(self, u, n):
        if u is not self.u and u.symbols[: self.u.W] != self.u.symbols[: u.W]:
            raise ValueError("window does not belong to this coloring")
        ids = u.factor_index.ids(n)
        is_prefix = ids == ids[0]
        pc = self.prefix_color(n)
        codes = np.where(is_prefix, 1, 0).astype(np.int64)
        return codes, [NonPrefix(), pc]


# -- well-definedness ---------------------------------------------------------


@dataclass
class WellDefinedReport:
    max_len: int
    factors_checked: int = 0
    occurrences_checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _reduction_keys(coloring: UniformColoring, n: int):
    """Per-start case and reduction keys for every factor of length ``n``.

    Returns ``(starts, case, key_a, key_b, skipped)``. The color computed at
    a start is a function of ``(case, key_a, key_b)``, so equal keys give
    equal colors. Starts whose shifted interval would leave the window are
    dropped and counted in ``skipped``.
    """
    u = coloring.u
    idx = u.factor_index
    bars = u.bars(1)
    W = u.W
    starts = np.arange(1, W - n + 2)
    his = starts + n - 1
    i = np.searchsorted(bars, starts, side="left")
    j = np.searchsorted(bars, his + 1, side="right") - 1
    m, M = bars[i], bars[j]
    pref_len = m - starts
    suf_len = his - M + 1
    total = pref_len + suf_len
    case = np.where(total == 0, 1, np.where(total == coloring.L, 2, 0))
    right = suf_len >= coloring.ctx.r
    # the neighbouring bar used by case (c) must exist inside the window
    ok = (case != 2) | np.where(right, j + 1 < len(bars), i >= 1)
    starts, case, i, j, m, M = starts[ok], case[ok], i[ok], j[ok], m[ok], M[ok]
    pref_len, suf_len, right = pref_len[ok], suf_len[ok], right[ok]
    key_a = np.full(len(starts), -1, dtype=np.int64)
    key_b = np.full(len(starts), -1, dtype=np.int64)
    sel = (case == 0) & (suf_len > 0)
    key_a[sel] = idx.keys(M[sel] - 1, suf_len[sel])
    sel = (case == 0) & (pref_len > 0)
    key_b[sel] = idx.keys(starts[sel] - 1, pref_len[sel])
    sel = case == 1
    key_a[sel] = idx.keys(i[sel], j[sel] - i[sel])
    sel = case == 2
    tau_lo = np.where(right, m, bars[np.maximum(i - 1, 0)])
    key_a[sel] = idx.keys(tau_lo[sel] - 1, np.full(int(sel.sum()), n))
    return starts, case, key_a, key_b, int((~ok).sum())


def check_well_defined(
    coloring: UniformColoring,
    max_len: int = 64,
    trials: int = 0,
    seed: int = 0,
) -> WellDefinedReport:
    """Check that the color of a factor does not depend on the occurrence used.

    For every factor of length ``2L+K+1 .. max_len`` with at least two
    occurrences, the color is computed at its first and last occurrence and at
    one occurrence of every distinct reduction (case plus the words it reduces
    to). Since the color at an occurrence is determined by its reduction, this
    covers all occurrences. ``trials`` extra random occurrences are also
    evaluated directly.
    """
    u = coloring.u
    report = WellDefinedReport(max_len)
    rng = np.random.default_rng(seed)
    for n in range(coloring.threshold + 1, min(max_len, u.W // 2) + 1):
        starts, case, ka, kb, skipped = _reduction_keys(coloring, n)
        report.skipped += skipped
        ids = u.factor_index.ids(n)[starts - 1]
        order = np.lexsort((starts, kb, ka, case, ids))
        ids_s, starts_s = ids[order], starts[order]
        row = np.stack([ids_s, case[order], ka[order], kb[order]], axis=1)
        new_row = np.ones(len(row), dtype=bool)
        new_row[1:] = (row[1:] != row[:-1]).any(axis=1)
        new_fac = np.ones(len(row), dtype=bool)
        new_fac[1:] = ids_s[1:] != ids_s[:-1]
        fac_start = np.flatnonzero(new_fac)
        fac_end = np.append(fac_start[1:], len(row))
        for a, b in zip(fac_start, fac_end):
            if b - a < 2:
                continue
            report.factors_checked += 1
            group = starts_s[a:b]
            probe = {int(group.min()), int(group.max())}
            probe.update(int(s) for s in starts_s[a:b][new_row[a:b]])
            if trials:
                probe.update(int(s) for s in rng.choice(group, size=min(trials, len(group)), replace=False))
            colors = {}
            for s in sorted(probe):
                colors[s] = coloring.color_at(Interval.at(s, n))
            report.occurrences_checked += len(colors)
            values = list(colors.values())
            if any(c != values[0] for c in values[1:]):
                first = min(colors)
                other = next(s for s in sorted(colors) if colors[s] != colors[first])
                report.failures.append((Interval.at(first, n), Interval.at(other, n), colors[first], colors[other]))
    return report


__all__ = [
    "Color",
    "Literal",
    "PrefSufPair",
    "LetterSet",
    "NonPrefix",
    "SeedResidue",
    "Plain1",
    "Coloring",
    "IdentityColoring",
    "ConstantColoring",
    "injectivity_radius",
    "UniformColoringContext",
    "UniformColoring",
    "FrequencyColoringContext",
    "FrequencyColoring",
    "FactorizationColoringContext",
    "FactorizationColoring",
    "compute_factorization_constants",
    "max_power_exponent",
    "check_well_defined",
    "WellDefinedReport",
]
