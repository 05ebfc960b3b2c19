"""Vector fields ξ∂_t + η^b∂_{x^b} on (t, x)-space.

Two representations:

* :class:`VectorField` -- the restricted form ξ = c₁t + c₀, η = Hx + φ(t)
  that every symmetry of a non-free system takes;
* :class:`PolyVectorField` -- ξ and η^b polynomial in x with exp-polynomial
  coefficients in t.  It covers the restricted form and the quadratic
  projective fields of ẍ = 0, and carries the generic derivative machinery.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .exppoly import ExpPoly, differentiate
from .matrix import Matrix
from .scalars import ONE, ZERO, format_scalar, is_exact

SOLUTION = "solution"
COMMUTANT = "commutant"
TIME_TRANSLATION = "time_translation"
DILATION = "dilation"
PROJECTIVE = "projective"
OTHER = "other"


class XPoly:
    """Polynomial in ``nvars`` variables with :class:`ExpPoly` coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, ExpPoly] | None = None):
        self.nvars = nvars
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, nvars: int, c) -> "XPoly":
        if not isinstance(c, ExpPoly):
            c = ExpPoly.const(c)
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, a: int, coef=ONE) -> "XPoly":
        m = [0] * nvars
        m[a] = 1
        return cls(nvars, {tuple(m): ExpPoly.const(coef)})

    def __add__(self, other: "XPoly") -> "XPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return XPoly(self.nvars, out)

    def __neg__(self):
        return XPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, XPoly):
            out: dict = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    p = c1 * c2
                    out[m] = out[m] + p if m in out else p
            return XPoly(self.nvars, out)
        return XPoly(self.nvars, {m: c * other for m, c in self.terms.items()})

    __rmul__ = __mul__

    def d_var(self, a: int) -> "XPoly":
        out = {}
        for m, c in self.terms.items():
            if m[a]:
                mm = list(m)
                mm[a] -= 1
                out[tuple(mm)] = c * m[a]
        return XPoly(self.nvars, out)

    def d_t(self) -> "XPoly":
        return XPoly(self.nvars, {m: differentiate(c) for m, c in self.terms.items()})

    def substitute_linear(self, M: Matrix) -> "XPoly":
        """Replace each x^a by Σ_c M[a, c] x^c."""
        forms = []
        for a in range(self.nvars):
            f = XPoly(self.nvars)
            for c in range(self.nvars):
                if M[a, c]:
                    f = f + XPoly.var(self.nvars, c, M[a, c])
            forms.append(f)
        out = XPoly(self.nvars)
        for m, coef in self.terms.items():
            p = XPoly.const(self.nvars, coef)
            for a, e in enumerate(m):
                for _ in range(e):
                    p = p * forms[a]
            out = out + p
        return out

    def pad(self, nvars: int) -> "XPoly":
        extra = (0,) * (nvars - self.nvars)
        return XPoly(nvars, {m + extra: c for m, c in self.terms.items()})

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(c.is_zero(tol) for c in self.terms.values())

    def max_coef(self) -> float:
        return max((c.max_coef() for c in self.terms.values()), default=0.0)

    def is_exact(self) -> bool:
        return all(c.is_exact() for c in self.terms.values())

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def __call__(self, t, point: Sequence) -> complex:
        acc = 0j
        for m, c in self.terms.items():
            mono = 1 + 0j
            for v, e in zip(point, m):
                if e:
                    mono *= complex(v) ** e
            acc += c(t) * mono
        return acc

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"[{c}]*x^{m}" for m, c in sorted(self.terms.items()))


class PolyVectorField:
    """ξ∂_t + η^b∂_{x^b} with ξ, η^b in :class:`XPoly` over x¹…xⁿ."""

    def __init__(self, xi: XPoly, eta: Sequence[XPoly], family: str = OTHER):
        self.n = len(eta)
        if xi.nvars != self.n or any(e.nvars != self.n for e in eta):
            raise ValueError("coefficient polynomials must live on n variables")
        self.xi = xi
        self.eta = list(eta)
        self.family = family

    def apply(self, f: XPoly) -> XPoly:
        """Action of the field as a derivation on functions of (t, x)."""
        out = self.xi * f.d_t()
        for a, e in enumerate(self.eta):
            if e.terms:
                out = out + e * f.d_var(a)
        return out

    def bracket(self, other: "PolyVectorField") -> "PolyVectorField":
        xi = self.apply(other.xi) - other.apply(self.xi)
        eta = [self.apply(b) - other.apply(a) for a, b in zip(self.eta, other.eta)]
        return PolyVectorField(xi, eta)

    def to_poly(self) -> "PolyVectorField":
        return self

    def is_exact(self) -> bool:
        return self.xi.is_exact() and all(e.is_exact() for e in self.eta)

    def components(self) -> list[XPoly]:
        return [self.xi] + self.eta

    def evaluate(self, t, x) -> np.ndarray:
        return np.array([c(t, x) for c in self.components()], dtype=complex)

    def coordinates(self) -> dict:
        """Linear coordinates: (component, x-monomial, t-power, frequency) -> coefficient."""
        out = {}
        for i, comp in enumerate(self.components()):
            for m, c in comp.terms.items():
                for coef, k, f in c.terms:
                    out[(i, m, k, f)] = coef
        return out

    def describe(self) -> str:
        bits = []
        for i, comp in enumerate(self.components()):
            target = "d_t" if i == 0 else f"d_x{i}"
            terms = []
            for m, c in sorted(comp.terms.items()):
                xs = "*".join(f"x{a + 1}" + (f"^{e}" if e > 1 else "") for a, e in enumerate(m) if e)
                for coef, k, f in c.terms:
                    piece = [] if coef == 1 else [format_scalar(coef)]
                    if k:
                        piece.append("t" if k == 1 else f"t^{k}")
                    if f != 0:
                        piece.append(f"exp({format_scalar(f)}*t)")
                    if xs:
                        piece.append(xs)
                    terms.append("*".join(piece) or "1")
            if terms:
                inner = " + ".join(terms)
                bits.append(f"{inner} {target}" if len(terms) == 1 else f"({inner}) {target}")
        return " + ".join(bits) or "0"

    def __repr__(self):
        return f"PolyVectorField(xi={self.xi}, eta={self.eta})"


class ProjectiveVectorField(PolyVectorField):
    """Field of total degree ≤ 2 in (t, x) with polynomial coefficients (free-system algebra)."""

    def __init__(self, xi: XPoly, eta: Sequence[XPoly], family: str = PROJECTIVE):
        super().__init__(xi, eta, family)
        for comp in self.components():
            for m, c in comp.terms.items():
                for _, k, f in c.terms:
                    if f != 0 or k + sum(m) > 2:
                        raise ValueError("projective fields are polynomial of total degree <= 2")

    @classmethod
    def from_monomials(cls, n: int, xi: Sequence = (), eta: Sequence = (), family: str = PROJECTIVE):
        """Build from ``(coef, t_power, x_powers)`` records for ξ and each η^b."""
        def build(records):
            terms: dict = {}
            for coef, tp, xp in records:
                m = tuple(xp)
                c = ExpPoly.monomial(coef, tp)
                terms[m] = terms[m] + c if m in terms else c
            return XPoly(n, terms)
        eta = list(eta) or [[] for _ in range(n)]
        return cls(build(xi), [build(r) for r in eta], family)

    def monomial_records(self) -> tuple[list, list[list]]:
        def rec(p: XPoly):
            return [(c, k, list(m)) for m, e in sorted(p.terms.items()) for c, k, _ in e.terms]
        return rec(self.xi), [rec(e) for e in self.eta]


@dataclass
class VectorField:
    """Q = (c₁t + c₀)∂_t + (Hx + φ(t))^b ∂_{x^b}."""

    c1: object
    c0: object
    H: Matrix
    phi: tuple
    family: str = OTHER

    def __post_init__(self):
        self.phi = tuple(self.phi)
        if self.H.shape != (len(self.phi), len(self.phi)):
            raise ValueError("H must be n×n with n = len(phi)")

    @property
    def n(self) -> int:
        return len(self.phi)

    @classmethod
    def solution(cls, phi: Sequence[ExpPoly]) -> "VectorField":
        n = len(phi)
        return cls(ZERO, ZERO, Matrix.zeros(n), tuple(phi), SOLUTION)

    @classmethod
    def linear(cls, H: Matrix, family: str = COMMUTANT) -> "VectorField":
        return cls(ZERO, ZERO, H, tuple(ExpPoly() for _ in range(H.rows)), family)

    @classmethod
    def time_translation(cls, n: int) -> "VectorField":
        return cls(ZERO, ONE, Matrix.zeros(n), tuple(ExpPoly() for _ in range(n)), TIME_TRANSLATION)

    def is_exact(self) -> bool:
        return is_exact(self.c1) and is_exact(self.c0) and self.H.is_exact() and all(f.is_exact() for f in self.phi)

    def to_poly(self) -> PolyVectorField:
        n = self.n
        xi = XPoly.const(n, ExpPoly([(self.c1, 1, ZERO), (self.c0, 0, ZERO)]))
        eta = []
        for b in range(n):
            p = XPoly.const(n, self.phi[b]) if self.phi[b] else XPoly(n)
            for a in range(n):
                h = self.H[b, a]
                if h:
                    p = p + XPoly.var(n, a, h)
            eta.append(p)
        return PolyVectorField(xi, eta, self.family)

    def coordinates(self) -> dict:
        return self.to_poly().coordinates()

    def evaluate(self, t, x) -> np.ndarray:
        x = [complex(v) for v in x]
        xi = complex(self.c1) * complex(t) + complex(self.c0)
        hx = self.H.to_numpy() @ np.array(x, dtype=complex)
        return np.concatenate([[xi], hx + np.array([f(t) for f in self.phi], dtype=complex)])

    def describe(self) -> str:
        bits = []
        xi = [s for s in (f"{format_scalar(self.c1)}*t" if self.c1 != 0 else "",
                          format_scalar(self.c0) if self.c0 != 0 else "") if s]
        if xi:
            bits.append(f"({' + '.join(xi)}) d_t")
        for b in range(self.n):
            for a in range(self.n):
                h = self.H[b, a]
                if h != 0:
                    bits.append(f"{format_scalar(h)}*x{a + 1} d_x{b + 1}")
            if self.phi[b]:
                bits.append(f"[{self.phi[b]}] d_x{b + 1}")
        return " + ".join(bits) or "0"
