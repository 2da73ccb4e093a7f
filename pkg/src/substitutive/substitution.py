"""Substitutions, their powers and incidence matrices, and fixed-point windows."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import NoSeed, ParseError, WindowExhausted
from .words import Alphabet, FactorIndex, parikh, z_array

DATA_DIR = Path(__file__).parent / "data"


@dataclass(frozen=True)
class Substitution:
    """A map from letters to nonempty words, extended to words by concatenation."""

    alphabet: Alphabet
    images: tuple[str, ...]
    name: str = ""
    _table: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != len(self.alphabet):
            raise ValueError("need exactly one image per letter")
        for a, img in zip(self.alphabet, images):
            if not img:
                raise ValueError(f"image of {a!r} is empty")
            self.alphabet.validate(img)
        object.__setattr__(self, "_table", {ord(a): img for a, img in zip(self.alphabet, images)})

    @classmethod
    def from_dict(cls, rules: dict[str, str], name: str = "") -> "Substitution":
        alphabet = Alphabet(tuple(rules))
        return cls(alphabet, tuple(rules[a] for a in alphabet), name)

    def __call__(self, w: str) -> str:
        return self.apply(w)

    def __getitem__(self, a: str) -> str:
        return self.images[self.alphabet.index(a)]

    def apply(self, w: str) -> str:
        self.alphabet.validate(w)
        return w.translate(self._table)

    def power(self, k: int) -> "Substitution":
        if k < 0:
            raise ValueError("power must be >= 0")
        images = list(self.alphabet.letters)
        for _ in range(k):
            images = [img.translate(self._table) for img in images]
        name = f"{self.name}^{k}" if self.name else ""
        return Substitution(self.alphabet, tuple(images), name)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(img) for img in self.images)

    @property
    def max_length(self) -> int:
        """``L = max |zeta(a)|``."""
        return max(self.lengths)

    def constant_length(self) -> int | None:
        lengths = set(self.lengths)
        return lengths.pop() if len(lengths) == 1 else None

    def image_lengths(self, k: int) -> np.ndarray:
        """``|zeta^k(a)|`` per letter, computed through the incidence matrix."""
        M = incidence_matrix(self).astype(object)
        v = np.ones(len(self.alphabet), dtype=object)
        for _ in range(k):
            v = v @ M
        return v

    def to_text(self) -> str:
        return "".join(f"{a} -> {img}\n" for a, img in zip(self.alphabet, self.images))

    def __str__(self) -> str:
        body = ", ".join(f"{a}->{img}" for a, img in zip(self.alphabet, self.images))
        return f"{self.name}: {body}" if self.name else body


def parse_substitution(text: str, name: str = "") -> Substitution:
    """Parse rules of the form ``X -> IMAGE``, one per line.

    ``#`` starts a comment and blank lines are skipped. The alphabet is the
    set of left-hand sides, in order of appearance.
    """
    rules: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ParseError(f"expected 'X -> IMAGE', got {raw.strip()!r}", lineno)
        lhs, rhs = (part.strip() for part in line.split("->", 1))
        if len(lhs) != 1 or not (lhs.isascii() and lhs.isalnum()):
            raise ParseError(f"left-hand side must be one ASCII letter or digit, got {lhs!r}", lineno)
        if not rhs or any(ch.isspace() for ch in rhs):
            raise ParseError(f"image of {lhs!r} must be a nonempty word without spaces", lineno)
        if lhs in rules:
            raise ParseError(f"duplicate rule for {lhs!r} (first on line {lines[lhs]})", lineno)
        rules[lhs] = rhs
        lines[lhs] = lineno
    if len(rules) < 2:
        raise ParseError("need rules for at least two letters")
    for lhs, rhs in rules.items():
        bad = sorted(set(rhs) - rules.keys())
        if bad:
            raise ParseError(f"image of {lhs!r} uses undeclared letters {bad}", lines[lhs])
    return Substitution.from_dict(rules, name)


def load_substitution(path) -> Substitution:
    """Read a substitution file. Bare names resolve against the bundled examples."""
    p = Path(path)
    if not p.exists() and (DATA_DIR / f"{path}.sub").exists():
        p = DATA_DIR / f"{path}.sub"
    return parse_substitution(p.read_text(encoding="utf-8"), name=p.stem)


def builtin(name: str) -> Substitution:
    return load_substitution(DATA_DIR / f"{name}.sub")


def incidence_matrix(zeta: Substitution) -> np.ndarray:
    """``M[b, a] = |zeta(a)|_b``; columns are indexed by the substituted letter."""
    cols = [parikh(img, zeta.alphabet) for img in zeta.images]
    return np.array(cols, dtype=np.int64).T


@dataclass(frozen=True)
class PrimitivityResult:
    primitive: bool
    exponent: int | None
    # boolean support of M^n at the last power examined; all True iff primitive
    pattern: np.ndarray = field(repr=False)

    def __bool__(self) -> bool:
        return self.primitive


def is_primitive(zeta: Substitution) -> PrimitivityResult:
    """Least ``n`` with ``M^n`` entrywise positive, searched up to Wielandt's bound.

    If positivity is not reached by ``(d-1)**2 + 1`` for a ``d``-letter
    alphabet, the matrix is not primitive; the returned pattern is the zero
    pattern of the final power.
    """
    M = incidence_matrix(zeta) > 0
    d = len(zeta.alphabet)
    bound = (d - 1) ** 2 + 1
    P = M.copy()
    for n in range(1, bound + 1):
        if P.all():
            return PrimitivityResult(True, n, P)
        P = (P.astype(np.int64) @ M.astype(np.int64)) > 0
    return PrimitivityResult(False, None, P)


def fixed_point_seeds(zeta: Substitution) -> list[str]:
    """Letters ``a`` with ``zeta(a)`` starting with ``a`` and longer than one letter."""
    return [a for a, img in zip(zeta.alphabet, zeta.images) if img[0] == a and len(img) >= 2]


@dataclass(frozen=True)
class FixedPointWindow:
    """The prefix ``u[1..W]`` of the fixed point of ``substitution`` seeded at ``seed``.

    Instances are immutable; :meth:`extend` returns a new, longer window whose
    first ``W`` symbols are unchanged. Derived indexes (Z-array, letter
    prefix sums, factor ids, cutting bars) are computed on first use.
    """

    substitution: Substitution
    seed: str
    symbols: str

    def __post_init__(self):
        if not self.symbols or self.symbols[0] != self.seed:
            raise ValueError("window must start with its seed letter")

    @property
    def W(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, pos: int) -> str:
        """The letter at 1-based position ``pos``."""
        if not 1 <= pos <= self.W:
            raise IndexError(pos)
        return self.symbols[pos - 1]

    def factor(self, lo: int, hi: int) -> str:
        """``u[lo..hi]`` (1-based, inclusive)."""
        if lo < 1 or hi > self.W:
            raise WindowExhausted(f"[{lo},{hi}] not inside window of length {self.W}", needed=hi)
        return self.symbols[lo - 1:hi]

    def prefix(self, n: int) -> str:
        return self.factor(1, n) if n else ""

    def extend(self, n: int) -> "FixedPointWindow":
        return extend_window(self, n)

    @cached_property
    def codes(self) -> np.ndarray:
        return self.substitution.alphabet.encode(self.symbols)

    @cached_property
    def z(self) -> np.ndarray:
        return z_array(self.symbols)

    @cached_property
    def prefix_counts(self) -> np.ndarray:
        """``S[n, i] = |u[1..n]|_{letter i}`` for ``n = 0..W``."""
        d = len(self.substitution.alphabet)
        out = np.zeros((self.W + 1, d), dtype=np.int64)
        out[1:] = np.cumsum(np.eye(d, dtype=np.int64)[self.codes], axis=0)
        return out

    @cached_property
    def factor_index(self) -> FactorIndex:
        return FactorIndex(self.codes)

    def bars(self, k: int = 1) -> np.ndarray:
        """All ``k``-cutting bars that are at most ``W + 1``, ascending."""
        cache = self.__dict__.setdefault("_bars", {})
        if k not in cache:
            # lengths past the window are clipped; bars beyond W + 1 are dropped anyway
            lengths = [min(int(x), self.W + 2) for x in self.substitution.image_lengths(k)]
            ends = np.cumsum(np.array(lengths, dtype=np.int64)[self.codes]) + 1
            cache[k] = np.concatenate(([1], ends[ends <= self.W + 1])).astype(np.int64)
        return cache[k]

    def is_bar_mask(self, k: int = 1) -> np.ndarray:
        """Boolean array over positions ``0 .. W + 1``; True at ``k``-cutting bars."""
        cache = self.__dict__.setdefault("_bar_masks", {})
        if k not in cache:
            mask = np.zeros(self.W + 2, dtype=bool)
            mask[self.bars(k)] = True
            cache[k] = mask
        return cache[k]


def extend_window(u: FixedPointWindow, n: int) -> FixedPointWindow:
    """The window of length exactly ``n`` extending ``u`` (``u`` itself if already longer).

    The current prefix is substituted repeatedly; only as many letters are
    substituted as are needed to pass ``n``.
    """
    zeta = u.substitution
    s = u.symbols
    if len(s) >= n:
        return u
    if len(zeta[u.seed]) < 2:
        raise NoSeed(f"{u.seed!r} does not generate an infinite fixed point")
    lengths = dict(zip(zeta.alphabet, zeta.lengths))
    while len(s) < n:
        # shortest prefix whose image reaches n, but always grow
        total, m = 0, 0
        while m < len(s) and total < n:
            total += lengths[s[m]]
            m += 1
        t = zeta.apply(s[:m])
        if len(t) <= len(s):
            t = zeta.apply(s)
        s = t
    return FixedPointWindow(zeta, u.seed, s[:n])


def fixed_point(zeta: Substitution, n: int, seed: str | None = None) -> FixedPointWindow:
    """Materialize at least ``n`` letters of the fixed point starting with ``seed``.

    The default seed is the first letter that starts its own image.
    """
    seeds = fixed_point_seeds(zeta)
    if seed is None:
        if not seeds:
            raise NoSeed(f"no letter of {zeta} starts its own image; use a power of the substitution")
        seed = seeds[0]
    elif seed not in seeds:
        raise NoSeed(f"{seed!r} is not a fixed-point seed of {zeta}")
    return extend_window(FixedPointWindow(zeta, seed, seed), n)


def empirical_frequencies(u: FixedPointWindow, n: int) -> tuple[Fraction, ...]:
    """``parikh(u[1..n]) / n`` as exact fractions."""
    if not 1 <= n <= u.W:
        raise ValueError(f"n must be in 1..{u.W}")
    return tuple(Fraction(int(c), n) for c in u.prefix_counts[n])
