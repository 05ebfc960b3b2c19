"""Univariate polynomials over Q and polynomial matrices."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .scalars import ONE, ZERO, _prime_factors, rational

NEG_INF = float("-inf")


class UniPoly:
    """Polynomial in one variable with rational coefficients (index = degree).

    The zero polynomial has no coefficients and degree ``-inf``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [rational(v) if not isinstance(v, Fraction) else v for v in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([ZERO, ONE])

    @classmethod
    def linear_factor(cls, root) -> "UniPoly":
        """``lambda - root``."""
        return cls([-rational(root), ONE])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly([x + (b[i] if i < len(b) else ZERO) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly([ONE])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        other = _as_poly(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quot = [ZERO] * (dq + 1)
        lead = other.coeffs[-1]
        m = len(other.coeffs) - 1
        for k in range(dq, -1, -1):
            c = rem[k + m] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(quot), UniPoly(rem[:m])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "UniPoly") -> bool:
        return not (other % self)

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return UniPoly([c / lc for c in self.coeffs])

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("λ" if k == 1 else f"λ^{k}")
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts).replace("+ -", "- ")


def _as_poly(v) -> UniPoly:
    return v if isinstance(v, UniPoly) else UniPoly([v])


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic greatest common divisor (Euclid over Q)."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd undefined")
    while q:
        p, q = q, p % q
    return p.monic()


def square_free_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: monic square-free ``s_i`` with ``p = lc * prod s_i^i``."""
    p = p.monic()
    out = []
    if p.degree <= 0:
        return out
    a = poly_gcd(p, p.derivative())
    b = p // a
    c = p.derivative() // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d) if (b or d) else UniPoly([1])
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        d = c - b.derivative()
        i += 1
    return out


def _divisors(k: int) -> list[int]:
    k = abs(k)
    divs = [1]
    for p in _prime_factors(k):
        e = 0
        while k % p == 0:
            k //= p
            e += 1
        divs = [d * p ** j for d in divs for j in range(e + 1)]
    return divs


def factor_rational_roots(p: UniPoly) -> tuple[list[tuple[Fraction, int]], UniPoly]:
    """All rational roots with multiplicity, and the rational-root-free cofactor.

    ``prod (lambda - r)^m * residual == p`` exactly; the residual keeps the
    leading coefficient of ``p``.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    roots: list[tuple[Fraction, int]] = []
    residual = p
    # strip zero roots first so the trailing coefficient is nonzero
    mult = 0
    while residual.degree > 0 and not residual.coeffs[0]:
        residual = UniPoly(residual.coeffs[1:])
        mult += 1
    if mult:
        roots.append((ZERO, mult))
    if residual.degree <= 0:
        return roots, residual
    # candidates come from the square-free part, which has smaller coefficients
    sqf = residual // poly_gcd(residual, residual.derivative())
    den = 1
    for c in sqf.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in sqf.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    ints = [v // g for v in ints]
    found = set()
    for num in _divisors(ints[0]):
        for dd in _divisors(ints[-1]):
            for cand in (Fraction(num, dd), Fraction(-num, dd)):
                if cand in found:
                    continue
                if not sqf(cand):
                    found.add(cand)
    for r in sorted(found):
        lin = UniPoly.linear_factor(r)
        m = 0
        while True:
            q, rem = divmod(residual, lin)
            if rem:
                break
            residual = q
            m += 1
        roots.append((r, m))
    roots.sort(key=lambda rm: rm[0])
    return roots, residual


class PolyMatrix:
    """Dense matrix of ``UniPoly`` entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[UniPoly]):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError("entries length must equal rows * cols")
        self.rows, self.cols, self.entries = rows, cols, entries

    @classmethod
    def characteristic(cls, d) -> "PolyMatrix":
        """``lambda*E - D`` for a square rational matrix ``D``."""
        n = d.rows
        return cls(n, n, [
            UniPoly([-d[i, j], ONE]) if i == j else UniPoly([-d[i, j]])
            for i in range(n) for j in range(n)
        ])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[UniPoly]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]


def smith_diagonal(m: PolyMatrix) -> list[UniPoly]:
    """Diagonal of the Smith normal form over Q[lambda], monic, each dividing the next.

    Pivot on the nonzero entry of least degree, clear its row and column by
    division, and fold in any row that the pivot fails to divide.
    """
    a = m.to_rows()
    nr, nc = m.rows, m.cols
    diag = []
    for k in range(min(nr, nc)):
        while True:
            best = None
            for i in range(k, nr):
                for j in range(k, nc):
                    e = a[i][j]
                    if e and (best is None or e.degree < best[0]):
                        best = (e.degree, i, j)
            if best is None:
                return diag + [UniPoly()] * (min(nr, nc) - k)
            _, pi, pj = best
            a[k], a[pi] = a[pi], a[k]
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            lc = a[k][k].lc
            a[k] = [e * (ONE / lc) for e in a[k]]
            piv = a[k][k]
            clean = True
            for i in range(k + 1, nr):
                if a[i][k]:
                    q, r = divmod(a[i][k], piv)
                    a[i] = [x - q * y for x, y in zip(a[i], a[k])]
                    if r:
                        clean = False
            for j in range(k + 1, nc):
                if a[k][j]:
                    q, r = divmod(a[k][j], piv)
                    for row in a:
                        row[j] = row[j] - q * row[k]
                    if r:
                        clean = False
            if not clean:
                continue
            bad = next((i for i in range(k + 1, nr)
                        for j in range(k + 1, nc) if a[i][j] % piv), None)
            if bad is None:
                break
            a[k] = [x + y for x, y in zip(a[k], a[bad])]
        diag.append(a[k][k])
    return diag
