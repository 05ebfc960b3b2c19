"""Exp-polynomials ``sum c * t**k * exp(mu*t)`` and fundamental solutions of ẍ = Jx."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matrix import Matrix, field_rank
from .scalars import (I, ONE, ZERO, conj, format_scalar, imag_part, inv, is_exact,
                      is_zero, sort_key, sqrt_any)
from .structure import COMPLEX, REAL, JordanStructure

FREQ_TOL = 1e-12
NUMERIC_TOL = 1e-10


class FrequencyError(ValueError):
    """A forcing frequency is outside the closure of the current Jordan block."""


def _same_numeric(f, g) -> bool:
    return abs(complex(f) - complex(g)) <= FREQ_TOL * max(1.0, abs(complex(f)))


def _canonical(items) -> tuple:
    acc: dict = {}
    numeric_freqs: list = []
    for c, k, f in items:
        if not is_exact(f):
            f = complex(f)
            for g in numeric_freqs:
                if _same_numeric(g, f):
                    f = g
                    break
            else:
                numeric_freqs.append(f)
        key = (k, f)
        acc[key] = acc[key] + c if key in acc else c
    terms = [(c, k, f) for (k, f), c in acc.items() if c != 0]
    terms.sort(key=lambda t: (sort_key(t[2]), t[1]))
    return tuple(terms)


class ExpPoly:
    """Finite sum of terms ``coef * t**power * exp(freq * t)``.

    Terms are canonical: one entry per (power, frequency) and no zero
    coefficients.  Exact frequencies are compared exactly; numeric ones are
    merged when they agree to 1e-12.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Sequence = (), _canon: bool = True):
        self.terms = _canonical(terms) if _canon else tuple(terms)

    @classmethod
    def const(cls, c) -> "ExpPoly":
        return cls([(c, 0, ZERO)])

    @classmethod
    def monomial(cls, coef, power: int = 0, freq=ZERO) -> "ExpPoly":
        return cls([(coef, power, freq)])

    @classmethod
    def t(cls) -> "ExpPoly":
        return cls([(ONE, 1, ZERO)])

    @classmethod
    def exp(cls, freq) -> "ExpPoly":
        return cls([(ONE, 0, freq)])

    # ring operations --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            if other == 0:
                return self
            other = ExpPoly.const(other)
        return ExpPoly(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly([(-c, k, f) for c, k, f in self.terms], _canon=False)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            return ExpPoly([(c1 * c2, k1 + k2, f1 + f2)
                            for c1, k1, f1 in self.terms for c2, k2, f2 in other.terms])
        if other == 0:
            return ExpPoly()
        return ExpPoly([(c * other, k, f) for c, k, f in self.terms])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * inv(scalar)

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            if other == 0:
                return not self.terms
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return not self.terms
        return self.max_coef() <= tol

    def max_coef(self) -> float:
        return max((abs(complex(c)) for c, _, _ in self.terms), default=0.0)

    def is_exact(self) -> bool:
        return all(is_exact(c) and is_exact(f) for c, _, f in self.terms)

    def frequencies(self) -> list:
        seen = []
        for _, _, f in self.terms:
            if f not in seen:
                seen.append(f)
        return seen

    def numeric(self) -> "ExpPoly":
        return ExpPoly([(complex(c), k, complex(f)) for c, k, f in self.terms])

    def conjugate(self) -> "ExpPoly":
        return ExpPoly([(conj(c), k, conj(f)) for c, k, f in self.terms])

    def real(self) -> "ExpPoly":
        """Real part as a function of real t: (f + conj f) / 2."""
        return (self + self.conjugate()) * (ONE / 2)

    def imag(self) -> "ExpPoly":
        """Imaginary part as a function of real t: (f − conj f) / (2i)."""
        return (self - self.conjugate()) * (-I / 2)

    def value_at_zero(self):
        acc = ZERO
        for c, k, _ in self.terms:
            if k == 0:
                acc = acc + c
        return acc

    def __call__(self, t) -> complex:
        t = complex(t)
        return sum(complex(c) * t ** k * cmath.exp(complex(f) * t) for c, k, f in self.terms) + 0j

    def evaluate_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=complex)
        out = np.zeros_like(ts)
        for c, k, f in self.terms:
            out += complex(c) * ts ** k * np.exp(complex(f) * ts)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, k, f in self.terms:
            s = f"({format_scalar(c)})"
            if k:
                s += "*t" if k == 1 else f"*t^{k}"
            if f != 0:
                s += f"*exp(({format_scalar(f)})*t)"
            parts.append(s)
        return " + ".join(parts)


def differentiate(f: ExpPoly) -> ExpPoly:
    """d/dt [c t^k e^{μt}] = c k t^{k−1} e^{μt} + c μ t^k e^{μt}."""
    items = []
    for c, k, mu in f.terms:
        if k:
            items.append((c * k, k - 1, mu))
        if mu != 0:
            items.append((c * mu, k, mu))
    return ExpPoly(items)


def _close(a, b, scale: float = 1.0) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(complex(a) - complex(b)) <= 1e-9 * max(1.0, scale)


def solve_resonant(lam, f: ExpPoly) -> ExpPoly:
    """A particular solution g of g'' − λg = f.

    Per frequency ν the ansatz p(t)e^{νt} gives p'' + 2νp' + (ν² − λ)p = q;
    when ν² = λ the ansatz degree is raised (once for ν ≠ 0, twice for
    ν = λ = 0).
    """
    groups: dict = {}
    order = []
    for c, k, nu in f.terms:
        for key in order:
            if _close(key, nu, abs(complex(nu))):
                nu = key
                break
        else:
            order.append(nu)
        groups.setdefault(nu, {})[k] = c
    scale = abs(complex(lam))
    out = []
    for nu in order:
        q = groups[nu]
        deg = max(q)
        nu_is_zero = _close(nu, ZERO)
        shift = nu * nu - lam
        resonant = _close(nu * nu, lam, scale)
        if not nu_is_zero and not resonant:
            raise FrequencyError("frequency outside block closure")
        if not resonant:
            # ν = 0 with λ ≠ 0: p'' − λp = q
            p = [ZERO] * (deg + 3)
            for k in range(deg, -1, -1):
                p[k] = (q.get(k, ZERO) - (k + 2) * (k + 1) * p[k + 2]) * inv(shift)
            out += [(p[k], k, nu) for k in range(deg + 1)]
        elif not nu_is_zero:
            # r = p',  r' + 2ν r = q
            r = [ZERO] * (deg + 2)
            two_nu_inv = inv(2 * nu)
            for k in range(deg, -1, -1):
                r[k] = (q.get(k, ZERO) - (k + 1) * r[k + 1]) * two_nu_inv
            out += [(r[k] * inv(k + 1), k + 1, nu) for k in range(deg + 1)]
        else:
            out += [(q.get(k, ZERO) * inv((k + 1) * (k + 2)), k + 2, nu) for k in range(deg + 1)]
    g = ExpPoly(out)
    check = differentiate(differentiate(g)) - g * lam - f
    tol = 0.0 if (g.is_exact() and f.is_exact() and is_exact(lam)) else NUMERIC_TOL * max(1.0, f.max_coef())
    if not check.is_zero(tol):
        raise ArithmeticError(f"resonant solve failed substitution check: {check}")
    return g


# fundamental systems ----------------------------------------------------------

Vector = tuple  # tuple of ExpPoly


@dataclass(frozen=True)
class FundamentalSystem:
    solutions: tuple[Vector, ...]
    J: Matrix

    @property
    def n(self) -> int:
        return self.J.rows

    def is_exact(self) -> bool:
        return all(f.is_exact() for s in self.solutions for f in s)

    def initial_data(self) -> list[list]:
        return [[f.value_at_zero() for f in s] + [differentiate(f).value_at_zero() for f in s]
                for s in self.solutions]

    def initial_data_rank(self) -> int:
        rows = self.initial_data()
        if self.is_exact():
            return field_rank(rows)
        arr = np.array([[complex(v) for v in r] for r in rows], dtype=complex)
        return int(np.linalg.matrix_rank(arr, tol=1e-9 * max(1.0, np.abs(arr).max())))

    def substitution_residuals(self) -> list[list[ExpPoly]]:
        out = []
        for s in self.solutions:
            jphi = self.J.apply(s, ExpPoly())
            out.append([differentiate(differentiate(f)) - g for f, g in zip(s, jphi)])
        return out

    def check(self) -> bool:
        for s, res in zip(self.solutions, self.substitution_residuals()):
            exact = all(f.is_exact() for f in s) and self.J.is_exact()
            tol = 0.0 if exact else NUMERIC_TOL
            if not all(r.is_zero(tol) for r in res):
                return False
        return self.initial_data_rank() == 2 * self.n


def _block_solutions(z, k: int, seeds_sign: Sequence[int]) -> list[list[ExpPoly]]:
    """Solutions of ÿ = J^k_z y, level by level, for the chosen seeds."""
    if is_zero(z, 1e-12):
        seeds = [ExpPoly.const(ONE), ExpPoly.t()]
    else:
        mu = sqrt_any(z)
        seeds = [ExpPoly.exp(sign * mu) for sign in seeds_sign]
    out = []
    for level in range(k):
        for seed in seeds:
            y = [ExpPoly() for _ in range(k)]
            y[level] = seed
            for j in range(level - 1, -1, -1):
                y[j] = solve_resonant(z, y[j + 1])
            out.append(y)
    return out


def _normalize(vec: list[ExpPoly]) -> list[ExpPoly]:
    data = [f.value_at_zero() for f in vec] + [differentiate(f).value_at_zero() for f in vec]
    exact = all(f.is_exact() for f in vec)
    lead = next((v for v in data if (v != 0 if exact else abs(complex(v)) > 1e-12)), None)
    if lead is None:
        return vec
    s = inv(lead)
    return [f * s for f in vec]


def _is_real_eig(z) -> bool:
    im = imag_part(z)
    return (im == 0) if is_exact(im) else abs(im) <= 1e-12


def _is_negative(z) -> bool:
    return complex(z).real < 0


def fundamental_system(structure: JordanStructure, field: str | None = None) -> FundamentalSystem:
    """2n exp-poly solutions of ẍ = Jx built block by block by back-substitution."""
    field = field or structure.field
    if field == REAL and structure.field != REAL:
        structure = JordanStructure.make(structure.blocks, structure.rotations, REAL)
    if field == COMPLEX and structure.rotations:
        raise ValueError("rotation blocks only occur in real-canonical structures")
    n = structure.n
    sols: list[list[ExpPoly]] = []
    offset = 0

    def embed(local: list[ExpPoly], at: int) -> list[ExpPoly]:
        full = [ExpPoly() for _ in range(n)]
        full[at:at + len(local)] = local
        return full

    for mu, nu, k in structure.rotations:
        z = mu + I * nu
        for y in _block_solutions(z, k, (1, -1)):
            local = []
            for comp in y:
                local += [comp, comp * I]
            for part in ([f.real() for f in local], [f.imag() for f in local]):
                sols.append(embed(part, offset))
        offset += 2 * k
    for z, k in structure.blocks:
        if field == REAL and not _is_real_eig(z):
            raise ValueError("non-real eigenvalue in real mode")
        if field == REAL and _is_negative(z):
            for y in _block_solutions(z, k, (1,)):
                sols.append(embed([f.real() for f in y], offset))
                sols.append(embed([f.imag() for f in y], offset))
        else:
            for y in _block_solutions(z, k, (1, -1)):
                sols.append(embed(y, offset))
        offset += k
    sols = [_normalize(s) for s in sols]
    return FundamentalSystem(tuple(tuple(s) for s in sols), structure.matrix())
