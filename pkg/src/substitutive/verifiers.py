"""Window-bounded scanners for powers, monochromatic powers and factorizations.

Each scan returns a :class:`Certificate` stamped with the window length. A
certificate either lists witnesses (which can be re-checked against the
window directly) or records that none exist in the window.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .colorings import Color, Coloring
from .errors import WindowExhausted
from .substitution import FixedPointWindow
from .words import Interval, power_exponents

NO_WITNESS = "NoWitness"
WITNESSES = "Witnesses"
STUCK = "Stuck"
COVERS = "Covers"


def _jsonable(x):
    if isinstance(x, Color):
        return x.to_json()
    if isinstance(x, Interval):
        return [x.lo, x.hi]
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, np.integer):
        return int(x)
    if hasattr(x, "to_dict"):
        return x.to_dict()
    return x


@dataclass(frozen=True)
class FrontierNode:
    """A position reached by the factorization search.

    ``t`` is the longest prefix occurrence starting after ``position``;
    ``complete`` says the window shows where that occurrence ends, so the
    list of children is exhaustive.
    """

    position: int
    color: Color
    t: int
    complete: bool

    def to_dict(self) -> dict:
        return {"position": self.position, "t": self.t, "complete": self.complete}


@dataclass
class Certificate:
    kind: str
    window: int
    params: dict
    outcome: str
    witnesses: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.outcome in (WITNESSES, COVERS)

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "window": self.window,
            "params": _jsonable(self.params),
            "outcome": self.outcome,
            "witnesses": _jsonable(self.witnesses),
            "flags": list(self.flags),
        }
        if self.extra:
            out["extra"] = _jsonable(self.extra)
        return out


# -- plain powers -------------------------------------------------------------


@dataclass(frozen=True)
class PowerTable:
    exponents: dict[str, int]
    max_exponent: int
    witness: tuple[str, int] | None

    @property
    def k0(self) -> int:
        return self.max_exponent + 1


def scan_powers(u: FixedPointWindow, max_base_len: int) -> PowerTable:
    """Largest ``e`` with ``w^e`` a factor, for every factor ``w`` with ``|w| <= max_base_len``."""
    table: dict[str, int] = {}
    best, witness = 0, None
    for l in range(1, min(max_base_len, u.W) + 1):
        exps = power_exponents(u.symbols, l)
        ids = u.factor_index.ids(l)
        order = np.lexsort((-exps, ids))
        first = np.ones(len(order), dtype=bool)
        first[1:] = ids[order][1:] != ids[order][:-1]
        for p in order[first]:
            w = u.symbols[p:p + l]
            e = int(exps[p])
            table[w] = e
            if e > best:
                best, witness = e, (w, int(p) + 1)
    return PowerTable(table, best, witness)


# -- uniform monochromatic powers ---------------------------------------------


def _run_of_equal(codes: np.ndarray, l: int, k: int) -> np.ndarray:
    """Starts ``s`` (0-based) where ``codes[s] = codes[s+l] = ... = codes[s+(k-1)l]``."""
    n = len(codes) - (k - 1) * l
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    ok = np.ones(n, dtype=bool)
    for i in range(1, k):
        ok &= codes[i * l:i * l + n] == codes[:n]
    return np.flatnonzero(ok)


def scan_uniform_monochromatic(
    coloring: Coloring,
    u: FixedPointWindow,
    k: int,
    len_range,
) -> Certificate:
    """Look for ``c(u[p..p+l-1]) = c(u[p+l..p+2l-1]) = ...`` over ``k`` blocks.

    Returns the lexicographically least ``(p, l)`` witness, or ``NoWitness``.
    Block lengths with no room for ``k`` blocks are listed in the flags;
    if that happens for every length, :class:`WindowExhausted` is raised.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    lengths = sorted(set(int(l) for l in len_range))
    if not lengths or lengths[0] < 1:
        raise ValueError("block lengths must be positive")
    params = {"k": k, "lengths": [lengths[0], lengths[-1]], "coloring": coloring.describe()}
    best = None
    skipped = []
    for l in lengths:
        if k * l > u.W:
            skipped.append(l)
            continue
        codes, palette = coloring.factor_colors(u, l)
        hits = _run_of_equal(codes, l, k)
        if len(hits):
            p = int(hits[0]) + 1
            if best is None or (p, l) < (best[0], best[1]):
                best = (p, l, palette[codes[p - 1]])
    if len(skipped) == len(lengths):
        raise WindowExhausted(f"no block length in the range fits {k} times into W={u.W}", needed=k * lengths[0])
    flags = [f"lengths-without-room:{skipped[0]}-{skipped[-1]}"] if skipped else []
    if best is None:
        return Certificate("uniform", u.W, params, NO_WITNESS, flags=flags)
    p, l, color = best
    return Certificate(
        "uniform", u.W, params, WITNESSES, witnesses=[{"p": p, "l": l, "color": color}], flags=flags
    )


def validate_uniform_witness(coloring: Coloring, u: FixedPointWindow, p: int, l: int, k: int) -> bool:
    """Recompute the ``k`` block colors of a witness from the window."""
    colors = {coloring.color(u.factor(p + i * l, p + (i + 1) * l - 1)) for i in range(k)}
    return len(colors) == 1


# -- bounded gaps --------------------------------------------------------------


def scan_bounded_gap_monochromatic(
    coloring: Coloring,
    u: FixedPointWindow,
    p_bound: int,
    k_target: int | None = None,
) -> Certificate:
    """Longest monochromatic chain of consecutive factors shorter than ``p_bound``.

    ``chain[e][c]`` is the largest number of consecutive parts of color ``c``
    ending just before position ``e``; it is filled left to right. The result
    carries the maximal ``k`` and one chain realizing it. With ``k_target``
    the outcome is ``NoWitness`` iff the maximum is below the target.
    """
    if p_bound < 2:
        raise ValueError("p_bound must be >= 2")
    W = u.W
    lengths = range(1, min(p_bound - 1, W) + 1)
    global_ids: dict[Color, int] = {}
    palette: list[Color] = []
    code_rows = []
    for l in lengths:
        codes, pal = coloring.factor_colors(u, l)
        remap = np.array([global_ids.setdefault(c, len(global_ids)) for c in pal], dtype=np.int64)
        for c in pal:
            if global_ids[c] == len(palette):
                palette.append(c)
        code_rows.append(remap[codes].tolist())
    nc = len(palette)
    chain = [[0] * nc for _ in range(W + 1)]
    back = [[0] * nc for _ in range(W + 1)]
    best, best_end, best_color = 0, 0, 0
    for e in range(1, W + 1):
        row, brow = chain[e], back[e]
        for l in lengths:
            s = e - l
            if s < 0:
                break
            c = code_rows[l - 1][s]
            v = chain[s][c] + 1
            if v > row[c]:
                row[c] = v
                brow[c] = s
        m = max(row)
        if m > best:
            best, best_end, best_color = m, e, row.index(m)
    parts = []
    e = best_end
    while e > 0 and len(parts) < best:
        s = back[e][best_color]
        parts.append(Interval(s + 1, e))
        e = s
    parts.reverse()
    params = {"p_bound": p_bound, "k_target": k_target, "coloring": coloring.describe()}
    extra = {"max_k": best}
    witness = {"k": best, "color": palette[best_color] if palette else None, "parts": parts}
    if k_target is not None and best < k_target:
        return Certificate("bounded-gap", W, params, NO_WITNESS, extra=extra)
    return Certificate("bounded-gap", W, params, WITNESSES, witnesses=[witness], extra=extra)


def bounded_gap_bruteforce(coloring: Coloring, w: str, p_bound: int) -> int:
    """Maximal monochromatic chain by enumerating all decompositions of factors (tiny inputs only)."""
    n = len(w)
    best = 0
    color_of = {}

    def color(i, j):
        key = (i, j)
        if key not in color_of:
            color_of[key] = coloring.color(w[i:j])
        return color_of[key]

    def extend(pos, col, count):
        nonlocal best
        best = max(best, count)
        for l in range(1, p_bound):
            if pos + l > n:
                break
            if color(pos, pos + l) == col:
                extend(pos + l, col, count + 1)

    for start in range(n):
        for l in range(1, p_bound):
            if start + l > n:
                break
            extend(start + l, color(start, start + l), 1)
    return best


# -- abelian powers -------------------------------------------------------------


def scan_abelian_powers(u: FixedPointWindow, k: int, max_part_len: int) -> Certificate:
    """Consecutive blocks ``u[p..p+l-1], ..., `` (``k`` of them) with equal Parikh vectors.

    Returns the lexicographically least ``(p, l)`` witness or ``NoWitness``.
    """
    if k < 2:
        raise ValueError("abelian powers need k >= 2")
    S = u.prefix_counts
    W = u.W
    best = None
    for l in range(1, min(max_part_len, W // k) + 1):
        blocks = S[l:] - S[:-l]  # blocks[s] = parikh(u[s+1..s+l])
        n = W - k * l + 1
        ok = np.ones(n, dtype=bool)
        for i in range(1, k):
            ok &= (blocks[i * l:i * l + n] == blocks[:n]).all(axis=1)
        hits = np.flatnonzero(ok)
        if len(hits):
            p = int(hits[0]) + 1
            if best is None or (p, l) < best:
                best = (p, l)
    params = {"k": k, "max_part_len": max_part_len}
    if best is None:
        return Certificate("abelian", W, params, NO_WITNESS)
    p, l = best
    parts = [u.factor(p + i * l, p + (i + 1) * l - 1) for i in range(k)]
    return Certificate("abelian", W, params, WITNESSES, witnesses=[{"p": p, "l": l, "parts": parts}])


def abelian_bruteforce(w: str, k: int, max_part_len: int) -> tuple[int, int] | None:
    """Least ``(p, l)`` abelian ``k``-power by direct sorting of blocks."""
    found = None
    for l in range(1, max_part_len + 1):
        for p in range(len(w) - k * l + 1):
            blocks = [sorted(w[p + i * l:p + (i + 1) * l]) for i in range(k)]
            if all(b == blocks[0] for b in blocks):
                if found is None or (p + 1, l) < found:
                    found = (p + 1, l)
                break
    return found


# -- factorizations ---------------------------------------------------------------


def search_monochromatic_factorization(
    coloring: Coloring,
    u: FixedPointWindow,
    horizon: int | None = None,
) -> Certificate:
    """Search, color by color, for monochromatic factorizations ``u = u_1 u_2 ...``.

    Every part of such a factorization is a prefix of ``u`` (the first one
    is, and all parts share its color) and occurs right after the previous
    parts. Positions are the nodes of a DAG: the children of ``n`` are the
    ``n + s`` with ``u[n+1..n+s] = u[1..s]`` and ``c(u[1..s]) = chi``. First
    parts are taken of length ``<= horizon`` (default ``W // 4``).

    * ``Stuck``: every reached node has an exhaustive child list and every
      branch dies, so no monochromatic factorization has a first part of
      length ``<= horizon``. The frontier lists every reached node.
    * ``Covers``: a branch reaches the end of the window, i.e. ``u[1..W]`` is
      cut into parts of one color.
    * otherwise :class:`WindowExhausted`: some reached node matches the
      prefix up to the window end, so its children are not all known.
    """
    W = u.W
    horizon = W // 4 if horizon is None else min(horizon, W)
    codes, palette = _prefix_colors(coloring, u)
    z = u.z
    by_color: dict[int, np.ndarray] = {}
    for c in np.unique(codes[:horizon]):
        by_color[int(c)] = np.flatnonzero(codes == c) + 1  # prefix lengths of color c
    frontier: list[FrontierNode] = []
    covers = None
    capped: list[int] = []
    per_color = []
    for c, lens in by_color.items():
        parent = np.full(W + 1, -1, dtype=np.int64)
        reached = np.zeros(W + 1, dtype=bool)
        first = lens[lens <= horizon]
        reached[first] = True
        parent[first] = 0
        heap = [int(x) for x in first]
        heapq.heapify(heap)
        nodes = 0
        while heap:
            n = heapq.heappop(heap)
            if n >= W:
                continue
            nodes += 1
            t = int(z[n])
            complete = t < W - n
            frontier.append(FrontierNode(n, palette[c], t, complete))
            kids = lens[: np.searchsorted(lens, t, side="right")]
            if len(kids):
                targets = n + kids
                fresh = targets[~reached[targets]]
                reached[fresh] = True
                parent[fresh] = n
                for x in fresh.tolist():
                    heapq.heappush(heap, x)
            if not complete:
                capped.append(n)
                if reached[W] and covers is None:
                    covers = (c, parent.copy())
        per_color.append({"color": palette[c], "first_parts": len(first), "nodes": nodes})
    params = {"horizon": horizon, "coloring": coloring.describe()}
    extra = {"colors": per_color}
    if covers is not None:
        c, parent = covers
        cuts = [W]
        while cuts[-1] > 0:
            cuts.append(int(parent[cuts[-1]]))
        cuts.reverse()
        parts = [Interval(a + 1, b) for a, b in zip(cuts, cuts[1:])]
        return Certificate(
            "factorization", W, params, COVERS, witnesses=[{"color": palette[c], "parts": parts}], extra=extra
        )
    if capped:
        raise WindowExhausted(
            f"prefix occurrence at {capped[0]} runs to the window end; grow the window",
            needed=2 * W,
            frontier=capped,
        )
    extra["frontier"] = frontier
    return Certificate("factorization", W, params, STUCK, flags=["children-complete"], extra=extra)


def _prefix_colors(coloring: Coloring, u: FixedPointWindow) -> tuple[np.ndarray, list[Color]]:
    """Color codes of ``u[1..t]`` at index ``t - 1``."""
    fast = getattr(coloring, "prefix_colors", None)
    if fast is not None and getattr(coloring, "u", None) is u:
        return fast()
    lookup: dict[Color, int] = {}
    palette: list[Color] = []
    codes = np.empty(u.W, dtype=np.int64)
    for t in range(1, u.W + 1):
        c = coloring.color(u.prefix(t))
        code = lookup.get(c)
        if code is None:
            code = lookup[c] = len(palette)
            palette.append(c)
        codes[t - 1] = code
    return codes, palette


def replay_frontier(cert: Certificate, coloring: Coloring, u: FixedPointWindow) -> bool:
    """Re-run the search and compare frontiers node by node."""
    again = search_monochromatic_factorization(coloring, u, cert.params["horizon"])
    return again.outcome == cert.outcome and again.extra.get("frontier") == cert.extra.get("frontier")


# -- complexity and balance ---------------------------------------------------------


def complexity(u: FixedPointWindow, n: int) -> int:
    """Number of distinct factors of length ``n`` inside the window."""
    if not 1 <= n <= u.W:
        raise ValueError(f"n must be in 1..{u.W}")
    return int(len(np.unique(u.factor_index.ids(n))))


def balance_check(u: FixedPointWindow, max_len: int):
    """``(True, None)`` if factors of equal length ``<= max_len`` differ by at most one
    in every letter count, else ``(False, (n, letter, w_max, w_min))`` for the
    first offending length and letter."""
    S = u.prefix_counts
    letters = u.substitution.alphabet.letters
    for n in range(1, min(max_len, u.W) + 1):
        counts = S[n:] - S[:-n]
        hi, lo = counts.max(axis=0), counts.min(axis=0)
        for i, a in enumerate(letters):
            if hi[i] - lo[i] > 1:
                p = int(np.argmax(counts[:, i]))
                q = int(np.argmin(counts[:, i]))
                return False, (n, a, u.symbols[p:p + n], u.symbols[q:q + n])
    return True, None


__all__ = [
    "Certificate",
    "FrontierNode",
    "PowerTable",
    "scan_powers",
    "scan_uniform_monochromatic",
    "validate_uniform_witness",
    "scan_bounded_gap_monochromatic",
    "bounded_gap_bruteforce",
    "scan_abelian_powers",
    "abelian_bruteforce",
    "search_monochromatic_factorization",
    "replay_frontier",
    "complexity",
    "balance_check",
    "NO_WITNESS",
    "WITNESSES",
    "STUCK",
    "COVERS",
]
