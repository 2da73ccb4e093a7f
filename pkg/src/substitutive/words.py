"""Finite words, Parikh vectors, 1-based intervals and factor queries.

Words are plain ``str`` objects whose characters are letters. Every position
exposed by this module is 1-based and inclusive, so ``u[1..n]`` is the prefix
of length ``n``; internally the underlying ``str`` is sliced with ``-1``
offsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyWord, InvalidSymbol

ParikhVector = tuple  # tuple[int, ...] indexed by alphabet order


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if len(letters) < 2:
            raise ValueError("an alphabet needs at least two letters")
        if len(set(letters)) != len(letters):
            raise ValueError(f"repeated letters in alphabet {letters!r}")
        for a in letters:
            if not isinstance(a, str) or len(a) != 1 or not a.isprintable():
                raise ValueError(f"letters must be single printable characters, got {a!r}")
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(letters)})

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, a) -> bool:
        return a in self._index

    def __str__(self) -> str:
        return "".join(self.letters)

    def index(self, a: str) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise InvalidSymbol(f"{a!r} is not in alphabet {str(self)!r}") from None

    def validate(self, w: str) -> str:
        bad = set(w) - self._index.keys()
        if bad:
            raise InvalidSymbol(f"symbols {sorted(bad)!r} not in alphabet {str(self)!r}")
        return w

    def encode(self, w: str) -> np.ndarray:
        """Letter indices of ``w`` as a uint8 array."""
        self.validate(w)
        table = {ord(a): i for a, i in self._index.items()}
        return np.frombuffer(w.translate(table).encode("latin-1"), dtype=np.uint8)


@dataclass(frozen=True)
class Interval:
    """Integer interval ``[lo, hi]`` of 1-based positions, both ends included."""

    lo: int
    hi: int

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    @classmethod
    def at(cls, start: int, length: int) -> "Interval":
        return cls(start, start + length - 1)

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


def _text(window) -> str:
    return window if isinstance(window, str) else window.symbols


def parikh(w: str, alphabet: Alphabet) -> ParikhVector:
    """Per-letter occurrence counts of ``w``, in alphabet order."""
    alphabet.validate(w)
    return tuple(w.count(a) for a in alphabet.letters)


def is_abelian_equivalent(w1: str, w2: str, alphabet: Alphabet) -> bool:
    return parikh(w1, alphabet) == parikh(w2, alphabet)


def occurrences(w: str, window) -> list[int]:
    """All 1-based start positions of ``w`` inside the window, overlaps included."""
    if not w:
        raise EmptyWord("occurrences of the empty word are not defined")
    s = _text(window)
    out = []
    i = s.find(w)
    while i >= 0:
        out.append(i + 1)
        i = s.find(w, i + 1)
    return out


def z_array(s: Sequence) -> np.ndarray:
    """Z-function: ``z[i]`` is the longest common prefix of ``s`` and ``s[i:]``.

    ``z[0]`` is ``len(s)`` by convention.
    """
    n = len(s)
    z = [0] * n
    if n:
        z[0] = n
    left = right = 0
    for i in range(1, n):
        if i < right:
            z[i] = min(right - i, z[i - left])
        while i + z[i] < n and s[z[i]] == s[i + z[i]]:
            z[i] += 1
        if i + z[i] > right:
            left, right = i, i + z[i]
    return np.asarray(z, dtype=np.int64)


def prefix_match_length(window, n: int) -> tuple[int, bool]:
    """Longest ``t`` with ``u[n+1..n+t] = u[1..t]``, and whether it hit the window end.

    The flag is True exactly when ``n + t == W``: the match might continue
    past the materialized prefix.
    """
    s = _text(window)
    W = len(s)
    if not 0 <= n <= W:
        raise ValueError(f"offset {n} outside window of length {W}")
    if n == W:
        return 0, True
    z = window.z if not isinstance(window, str) else z_array(s)
    t = int(z[n])
    return t, n + t == W


class FactorIndex:
    """Exact identifiers for the factors of a fixed text.

    Ranks for factors of length ``2**k`` are built by prefix doubling; a factor
    of arbitrary length ``n`` is then identified by the ranks of its first and
    last ``2**k`` letters with ``2**k <= n < 2**(k+1)``. Two positions get the
    same id for length ``n`` iff the factors are equal. Levels are built
    lazily.
    """

    def __init__(self, codes: np.ndarray):
        self.n = len(codes)
        self._ranks = [np.asarray(codes, dtype=np.int64)]
        self._sizes = [int(codes.max()) + 1 if len(codes) else 1]

    def _level(self, k: int) -> tuple[np.ndarray, int]:
        while len(self._ranks) <= k:
            j = len(self._ranks) - 1
            r, size = self._ranks[j], self._sizes[j]
            half = 1 << j
            if len(r) <= half:
                raise ValueError("factor length exceeds the text")
            pair = r[:-half] * size + r[half:]
            uniq, inv = np.unique(pair, return_inverse=True)
            self._ranks.append(inv.astype(np.int64))
            self._sizes.append(len(uniq))
        return self._ranks[k], self._sizes[k]

    def ids(self, length: int) -> np.ndarray:
        """Factor ids for every start (0-based) ``0 .. n-length``."""
        if not 1 <= length <= self.n:
            raise ValueError(f"factor length {length} outside 1..{self.n}")
        k = length.bit_length() - 1
        r, size = self._level(k)
        span = self.n - length + 1
        if length == 1 << k:
            return r[:span]
        return r[:span] * size + r[length - (1 << k): length - (1 << k) + span]

    def keys(self, starts: np.ndarray, lengths: np.ndarray) -> np.ndarray:
        """Ids for factors of mixed lengths; equal keys iff equal words.

        ``starts`` are 0-based. Keys encode the length, so words of different
        lengths never collide.
        """
        starts = np.asarray(starts, dtype=np.int64)
        lengths = np.asarray(lengths, dtype=np.int64)
        out = np.empty(len(starts), dtype=np.int64)
        if not len(starts):
            return out
        if lengths.min() < 1 or (starts + lengths).max() > self.n:
            raise ValueError("factor outside text")
        ks = np.floor(np.log2(lengths)).astype(np.int64)
        # guard against float rounding at exact powers of two
        ks[(1 << (ks + 1)) <= lengths] += 1
        ks[(1 << ks) > lengths] -= 1
        base = self.n + 1
        for k in np.unique(ks):
            sel = ks == k
            r, size = self._level(int(k))
            a = r[starts[sel]]
            b = r[starts[sel] + lengths[sel] - (1 << int(k))]
            if size * size * base >= 2**62:
                raise OverflowError("text too long for exact factor keys")
            out[sel] = (a * size + b) * base + lengths[sel]
        return out


def power_exponents(s: str, base_len: int) -> np.ndarray:
    """For every 0-based start ``p``, the largest ``e`` with ``s[p:p+e*base_len]``
    an ``e``-th power of ``s[p:p+base_len]``. Starts without room get 0."""
    n = len(s)
    if base_len > n:
        return np.zeros(0, dtype=np.int64)
    arr = np.frombuffer(s.encode("utf-32-le"), dtype=np.uint32)
    eq = arr[:-base_len] == arr[base_len:] if base_len < n else np.zeros(0, bool)
    # run[p] = number of consecutive equal shifts starting at p
    run = np.zeros(len(eq) + 1, dtype=np.int64)
    if len(eq):
        idx = np.arange(len(eq))
        breaks = np.where(~eq, idx, len(eq))
        nxt = np.minimum.accumulate(breaks[::-1])[::-1]
        run[:-1] = nxt - idx
    return run[: n - base_len + 1] // base_len + 1


def words_over(alphabet: Iterable[str], length: int) -> list[str]:
    """All words of the given length, in lexicographic alphabet order."""
    out = [""]
    letters = list(alphabet)
    for _ in range(length):
        out = [w + a for w in out for a in letters]
    return out
