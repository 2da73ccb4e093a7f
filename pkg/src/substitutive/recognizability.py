"""Cutting bars, fitted intervals, desubstitution and the recognizability index.

For a fixed point ``u`` of ``zeta`` the ``k``-cutting bars are the positions
where the images ``zeta^k(u_1), zeta^k(u_2), ...`` begin. An interval is
``k``-fitted when it starts on a bar and ends just before one; its
desubstitution is then the preimage word between those bars.

Everything here is window-bounded: results are valid for ``u[1..W]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousDesubstitution, NoBarInside, NotFitted, WindowExhausted
from .substitution import FixedPointWindow
from .words import Interval, occurrences


@dataclass(frozen=True)
class CuttingBars:
    level: int
    bars: tuple[int, ...]
    window: int


def cutting_bars(u: FixedPointWindow, k: int = 1, up_to: int | None = None) -> CuttingBars:
    """All ``k``-cutting bars ``<= up_to`` (default ``W + 1``)."""
    if k < 1:
        raise ValueError("level must be >= 1")
    up_to = u.W + 1 if up_to is None else up_to
    if up_to > u.W + 1:
        raise WindowExhausted(f"bars up to {up_to} need a window of length {up_to - 1}", needed=up_to - 1)
    bars = u.bars(k)
    return CuttingBars(k, tuple(int(b) for b in bars[bars <= up_to]), u.W)


@dataclass(frozen=True)
class FittedDecomposition:
    """``u_I = pref . u[m..M-1] . suf`` with ``m`` the least bar ``>= lo`` and
    ``M`` the largest bar ``<= hi + 1``.

    ``p`` and ``q`` are the preimage indices with ``m = |zeta(u[1..p])| + 1`` and
    ``M = |zeta(u[1..q])| + 1``. ``m_prev``/``M_next`` are the neighbouring bars,
    or ``None`` when they do not exist inside the window.
    """

    interval: Interval
    level: int
    m: int
    M: int
    p: int
    q: int
    pref: str
    suf: str
    m_prev: int | None = field(default=None, compare=False)
    M_next: int | None = field(default=None, compare=False)

    @property
    def fitted(self) -> bool:
        return not self.pref and not self.suf

    @property
    def interior_interval(self) -> Interval | None:
        """Preimage positions ``[p+1, q]``; ``None`` if ``m == M``."""
        return Interval(self.p + 1, self.q) if self.q > self.p else None

    def successor_bar(self) -> int:
        if self.M_next is None:
            raise WindowExhausted(f"no bar after {self.M} inside the window")
        return self.M_next

    def predecessor_bar(self) -> int:
        if self.m_prev is None:
            raise WindowExhausted(f"no bar before {self.m}")
        return self.m_prev


def decompose(u: FixedPointWindow, I: Interval, k: int = 1) -> FittedDecomposition:
    """Split ``u_I`` at the ``k``-cutting bars it contains.

    ``M`` may be ``hi + 1``, so a fitted interval has empty ``pref`` and
    ``suf``. Raises :class:`NoBarInside` if no bar lies in ``[lo, hi + 1]``.
    """
    if I.hi > u.W:
        raise WindowExhausted(f"{I} is not inside the window", needed=I.hi)
    bars = u.bars(k)
    i = int(np.searchsorted(bars, I.lo, side="left"))
    j = int(np.searchsorted(bars, I.hi + 1, side="right")) - 1
    if i >= len(bars):
        # bars are known up to W + 1 and lo <= W, so this only happens past the window
        raise WindowExhausted(f"no bar known at or after {I.lo}", needed=I.hi + 1)
    m, M = int(bars[i]), int(bars[j])
    if m > I.hi + 1:
        raise NoBarInside(f"{I} lies strictly between the bars {M} and {m}")
    s = u.symbols
    return FittedDecomposition(
        interval=I,
        level=k,
        m=m,
        M=M,
        p=i,
        q=j,
        pref=s[I.lo - 1:m - 1],
        suf=s[M - 1:I.hi],
        m_prev=int(bars[i - 1]) if i > 0 else None,
        M_next=int(bars[j + 1]) if j + 1 < len(bars) else None,
    )


def is_fitted(u: FixedPointWindow, I: Interval, k: int = 1) -> bool:
    """True iff ``lo`` and ``hi + 1`` are both ``k``-cutting bars."""
    if I.hi > u.W:
        raise WindowExhausted(f"{I} is not inside the window", needed=I.hi)
    mask = u.is_bar_mask(k)
    return bool(mask[I.lo] and mask[I.hi + 1])


def fitted_interior(u: FixedPointWindow, I: Interval, k: int = 1) -> str:
    """Preimage word of a fitted interval: ``u[p_I+1 .. q_I]``."""
    if not is_fitted(u, I, k):
        raise NotFitted(f"{I} is not {k}-fitted")
    bars = u.bars(k)
    p = int(np.searchsorted(bars, I.lo))
    q = int(np.searchsorted(bars, I.hi + 1))
    return u.symbols[p:q]


def desubstitute(u: FixedPointWindow, w: str, K: int = 0, k: int = 1) -> str:
    """``zeta^{-1}(w)`` for a word that occurs at a fitted interval.

    Every fitted occurrence in the window is desubstituted; if two of them
    disagree the substitution is not strongly recognizable with index ``K``
    and :class:`AmbiguousDesubstitution` carries the two intervals.
    """
    if len(w) <= K:
        raise ValueError(f"desubstitution needs |w| > K = {K}")
    found: tuple[Interval, str] | None = None
    mask = u.is_bar_mask(k)
    n = len(w)
    for p in occurrences(w, u):
        if not (mask[p] and mask[p + n]):
            continue
        I = Interval.at(p, n)
        interior = fitted_interior(u, I, k)
        if found is None:
            found = (I, interior)
        elif interior != found[1]:
            raise AmbiguousDesubstitution(
                f"{w!r} desubstitutes to {found[1]!r} at {found[0]} and {interior!r} at {I}", found[0], I
            )
    if found is None:
        raise NotFitted(f"{w!r} has no {k}-fitted occurrence in the window")
    return found[1]


@dataclass(frozen=True)
class RecognizabilityCertificate:
    """Window-bounded estimate of the strong recognizability index.

    ``status`` is ``"consistent-up-to-W"`` when no violation longer than
    ``K_hat`` exists among fitted factors of length ``<= cap``,
    ``"counterexample"`` when a claimed index was refuted, and
    ``"inconclusive"`` when violations kept appearing up to the largest
    length the window supports. ``witness`` is a violating pair ``(I, J)``
    of length ``K_hat`` (or longer than the claim), if any.
    """

    level: int
    K_hat: int
    window: int
    cap: int
    status: str
    witness: tuple[Interval, Interval] | None = None
    claimed: int | None = None

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "K_hat": self.K_hat,
            "window": self.window,
            "cap": self.cap,
            "status": self.status,
            "claimed": self.claimed,
            "witness": [[I.lo, I.hi] for I in self.witness] if self.witness else None,
        }


def _violation_at_length(u: FixedPointWindow, n: int, k: int):
    """First violating pair ``(I, J)`` among factors of length ``n``, or None."""
    W = u.W
    ids = u.factor_index.ids(n)
    mask = u.is_bar_mask(k)
    starts = np.arange(1, W - n + 2)
    fitted = mask[starts] & mask[starts + n]
    if not fitted.any():
        return None
    fitted_ids = ids[fitted]
    in_fitted = np.isin(ids, fitted_ids)
    bad = np.flatnonzero(in_fitted & ~fitted)
    best = None
    if len(bad):
        j = int(bad[0])
        i = int(np.flatnonzero(fitted & (ids == ids[j]))[0])
        best = (Interval.at(i + 1, n), Interval.at(j + 1, n))
    # equal fitted words must share their preimage
    bars = u.bars(k)
    fs = starts[fitted]
    pi = np.searchsorted(bars, fs)
    qi = np.searchsorted(bars, fs + n)
    ikeys = u.factor_index.keys(pi, qi - pi)
    pairs = np.unique(np.stack([fitted_ids, ikeys], axis=1), axis=0)
    dup = np.flatnonzero(pairs[1:, 0] == pairs[:-1, 0])
    if len(dup):
        fid = pairs[dup[0], 0]
        occ = fs[fitted_ids == fid]
        keys_here = ikeys[fitted_ids == fid]
        other = int(np.flatnonzero(keys_here != keys_here[0])[0])
        pair = (Interval.at(int(occ[0]), n), Interval.at(int(occ[other]), n))
        if best is None or (pair[0].lo, pair[1].lo) < (best[0].lo, best[1].lo):
            best = pair
    return best


def estimate_recognizability_index(
    u: FixedPointWindow,
    k: int = 1,
    cap: int | None = None,
    claimed: int | None = None,
    max_cap: int | None = None,
) -> RecognizabilityCertificate:
    """Least ``K`` with no recognizability violation longer than ``K`` in the window.

    A violation of length ``n`` is a fitted factor of length ``n`` that also
    occurs unfitted, or at two fitted places with different preimages.
    Lengths up to ``cap`` are checked; by default ``cap = 4 L_k^2`` and it is
    raised to ``K_hat + 4 L_k^2`` whenever a violation comes that close to the
    cap, up to ``max_cap`` (default ``8 * 4 L_k^2``, never beyond ``W // 2``).
    If violations are still found near ``max_cap`` the status is
    ``"inconclusive"``. Passing ``claimed`` turns the scan into a check of
    that index.
    """
    L = int(max(u.substitution.image_lengths(k)))
    margin = 4 * L * L
    limit = max(1, min(u.W // 2, 8 * margin if max_cap is None else max_cap))
    auto = cap is None
    cap = min(margin if auto else cap, limit)
    K_hat, witness = 0, None
    n = 1
    while True:
        while n <= cap:
            v = _violation_at_length(u, n, k)
            if v is not None:
                K_hat, witness = n, v
            n += 1
        if not auto or K_hat + margin <= cap or cap >= limit:
            break
        cap = min(K_hat + margin, limit)
    status = "consistent-up-to-W"
    if auto and K_hat + margin > cap:
        status = "inconclusive"
    if claimed is not None and K_hat > claimed:
        status = "counterexample"
    return RecognizabilityCertificate(k, K_hat, u.W, cap, status, witness, claimed)


@dataclass
class PresufReport:
    trials: int
    K: int
    threshold: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_presuf(
    u: FixedPointWindow,
    K: int,
    trials: int = 10_000,
    seed: int = 0,
    extra_lengths: int = 64,
) -> PresufReport:
    """Sample pairs of equal factors longer than ``2L + K`` and compare their splits.

    For each pair ``(I, J)`` with ``u_I = u_J`` the prefixes before the first
    bar, the suffixes after the last bar, and the words between must agree.
    Lengths are drawn from ``2L+K+1 .. 2L+K+extra_lengths``; positions from
    factors with at least two occurrences in the window.
    """
    L = u.substitution.max_length
    threshold = 2 * L + K
    report = PresufReport(trials, K, threshold)
    rng = np.random.default_rng(seed)
    lo_len = max(1, threshold + 1)
    hi_len = min(threshold + extra_lengths, u.W // 2)
    groups: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
    for _ in range(trials):
        n = int(rng.integers(lo_len, hi_len + 1))
        if n not in groups:
            ids = u.factor_index.ids(n)
            order = np.argsort(ids, kind="stable")
            sorted_ids = ids[order]
            uniq, first, counts = np.unique(sorted_ids, return_index=True, return_counts=True)
            multi = counts >= 2
            groups[n] = (order, first[multi], counts[multi])
        order, first, counts = groups[n]
        if not len(first):
            continue
        g = int(rng.integers(len(first)))
        a, b = rng.choice(int(counts[g]), size=2, replace=False)
        I = Interval.at(int(order[first[g] + a]) + 1, n)
        J = Interval.at(int(order[first[g] + b]) + 1, n)
        try:
            dI, dJ = decompose(u, I), decompose(u, J)
        except NoBarInside as exc:
            report.failures.append((I, J, f"no bar: {exc}"))
            continue
        middle_I = u.symbols[dI.m - 1:dI.M - 1]
        middle_J = u.symbols[dJ.m - 1:dJ.M - 1]
        for what, x, y in (("pref", dI.pref, dJ.pref), ("suf", dI.suf, dJ.suf), ("middle", middle_I, middle_J)):
            if x != y:
                report.failures.append((I, J, what))
                break
    return report
