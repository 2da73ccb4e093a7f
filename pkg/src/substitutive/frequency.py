"""Letter frequencies of primitive substitutions as exact or isolated algebraic numbers.

The frequency vector is the Perron eigenvector of the incidence matrix,
normalized to sum 1. When the Perron root is rational the vector is returned
as fractions. Otherwise the root is kept as an isolating interval of its
minimal polynomial and each frequency as a rational function of the root, so
that comparisons with rationals are decided exactly.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

import sympy as sp

from .errors import NotPrimitive
from .substitution import Substitution, incidence_matrix, is_primitive

_x = sp.Symbol("x")


def _coeffs(poly: sp.Poly) -> list[Fraction]:
    return [Fraction(int(c.p), int(c.q)) for c in poly.all_coeffs()]


def _horner(coeffs: list[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * t + c
    return acc


def _interval_horner(coeffs: list[Fraction], lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Rigorous (if loose) enclosure of a polynomial over ``[lo, hi]``."""
    alo = ahi = Fraction(0)
    for c in coeffs:
        prods = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(prods) + c, max(prods) + c
    return alo, ahi


@dataclass
class _Root:
    """An irrational real root of an irreducible polynomial, with an isolating interval."""

    coeffs: list[Fraction]
    lo: Fraction
    hi: Fraction
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def bisect(self) -> None:
        with self.lock:
            mid = (self.lo + self.hi) / 2
            # mid is rational and the polynomial is irreducible of degree >= 2,
            # so it cannot vanish there
            if (_horner(self.coeffs, self.lo) > 0) == (_horner(self.coeffs, mid) > 0):
                self.lo = mid
            else:
                self.hi = mid

    def bounds(self) -> tuple[Fraction, Fraction]:
        with self.lock:
            return self.lo, self.hi


class FrequencyVector:
    """Perron frequencies ``d_a`` of a primitive substitution.

    Use :meth:`compare` for exact decisions and :meth:`interval` for
    guaranteed enclosures; :meth:`approx` gives floats for display.
    """

    def __init__(self, zeta: Substitution):
        prim = is_primitive(zeta)
        if not prim:
            raise NotPrimitive(f"{zeta} is not primitive")
        self.alphabet = zeta.alphabet
        M = sp.Matrix(incidence_matrix(zeta).tolist())
        charpoly = M.charpoly(_x)
        best = None
        for factor, _ in sp.factor_list(charpoly.as_expr(), _x)[1]:
            fpoly = sp.Poly(factor, _x, domain=sp.QQ)
            for (lo, hi), _mult in fpoly.intervals():
                if best is None or Fraction(str(hi)) > best[1][1]:
                    best = (fpoly, (Fraction(str(lo)), Fraction(str(hi))))
        minpoly, (lo, hi) = best
        self.minpoly = minpoly
        self.exact: tuple[Fraction, ...] | None = None
        self._root: _Root | None = None
        if minpoly.degree() == 1:
            a, b = _coeffs(minpoly)
            lam = -b / a
            self.eigenvalue: Fraction | None = lam
            null = (M - sp.Rational(lam.numerator, lam.denominator) * sp.eye(M.rows)).nullspace()
            vec = [Fraction(str(c)) for c in null[0]]
            total = sum(vec)
            self.exact = tuple(c / total for c in vec)
        else:
            self.eigenvalue = None
            # adj(xI - M) has rank one and positive entries at the Perron root
            adj = (_x * sp.eye(M.rows) - M).adjugate()
            col = [sp.Poly(sp.expand(adj[i, 0]), _x, domain=sp.QQ).rem(minpoly) for i in range(M.rows)]
            total = sum(col[1:], col[0]).rem(minpoly)
            self._num = col
            self._den = total
            self._num_c = [_coeffs(p) for p in col]
            self._den_c = _coeffs(total)
            self._root = _Root(_coeffs(minpoly), lo, hi)
            # make the root interval tight enough for a positive denominator enclosure
            while True:
                rlo, rhi = self._root.bounds()
                dlo, dhi = _interval_horner(self._den_c, rlo, rhi)
                if dlo > 0 or dhi < 0:
                    break
                self._root.bisect()
            self._den_sign = 1 if dlo > 0 else -1

    def __len__(self) -> int:
        return len(self.alphabet)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def eigenvalue_interval(self, width: Fraction = Fraction(1, 10**6)) -> tuple[Fraction, Fraction]:
        if self.eigenvalue is not None:
            return self.eigenvalue, self.eigenvalue
        while True:
            lo, hi = self._root.bounds()
            if hi - lo <= width:
                return lo, hi
            self._root.bisect()

    def _enclose(self, i: int) -> tuple[Fraction, Fraction]:
        lo, hi = self._root.bounds()
        nlo, nhi = _interval_horner(self._num_c[i], lo, hi)
        dlo, dhi = _interval_horner(self._den_c, lo, hi)
        if self._den_sign < 0:
            nlo, nhi, dlo, dhi = -nhi, -nlo, -dhi, -dlo
        quots = (nlo / dlo, nlo / dhi, nhi / dlo, nhi / dhi)
        return min(quots), max(quots)

    def interval(self, letter, width: Fraction = Fraction(1, 10**9)) -> tuple[Fraction, Fraction]:
        """An enclosure ``[lo, hi]`` of ``d_letter`` of width at most ``width``."""
        i = self._i(letter)
        if self.exact is not None:
            return self.exact[i], self.exact[i]
        width = Fraction(width)
        while True:
            lo, hi = self._enclose(i)
            if hi - lo <= width:
                return lo, hi
            self._root.bisect()

    def compare(self, letter, ratio) -> int:
        """Sign of ``d_letter - ratio``, decided exactly."""
        i = self._i(letter)
        ratio = Fraction(ratio)
        if self.exact is not None:
            d = self.exact[i]
            return (d > ratio) - (d < ratio)
        lo, hi = self._quick(i)
        if ratio < lo:
            return 1
        if ratio > hi:
            return -1
        q = sp.Rational(ratio.numerator, ratio.denominator)
        g = (self._num[i] - self._den * q).rem(self.minpoly)
        if g.is_zero:
            return 0
        gc = _coeffs(g)
        # g(root) != 0, so refining the root interval eventually separates it from 0
        while True:
            lo, hi = self._root.bounds()
            glo, ghi = _interval_horner(gc, lo, hi)
            if glo > 0 or ghi < 0:
                return (1 if glo > 0 else -1) * self._den_sign
            self._root.bisect()

    def _quick(self, i: int) -> tuple[Fraction, Fraction]:
        """A cached enclosure of ``d_i``, used to settle most comparisons without sympy."""
        cache = self.__dict__.setdefault("_quick_cache", {})
        if i not in cache:
            cache[i] = self.interval(i, Fraction(1, 2**64))
        return cache[i]

    def exceeds(self, letter, ratio) -> bool:
        """True iff ``ratio > d_letter`` strictly."""
        return self.compare(letter, ratio) < 0

    def approx(self) -> tuple[float, ...]:
        if self.exact is not None:
            return tuple(float(c) for c in self.exact)
        out = []
        for a in self.alphabet:
            lo, hi = self.interval(a, Fraction(1, 10**15))
            out.append(float((lo + hi) / 2))
        return tuple(out)

    def _i(self, letter) -> int:
        return letter if isinstance(letter, int) else self.alphabet.index(letter)

    def __repr__(self) -> str:
        if self.exact is not None:
            body = ", ".join(f"{a}={c}" for a, c in zip(self.alphabet, self.exact))
        else:
            body = ", ".join(f"{a}~{c:.12g}" for a, c in zip(self.alphabet, self.approx()))
        return f"FrequencyVector({body})"


def letter_frequencies(zeta: Substitution) -> FrequencyVector:
    return FrequencyVector(zeta)
