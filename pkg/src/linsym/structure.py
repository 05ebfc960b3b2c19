"""Reduction to ÿ = Dy, invariant factors of λE − D, and Jordan structure."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .matrix import Matrix, jordan_block, rank
from .poly import (PolyMatrix, UniPoly, factor_rational_roots, smith_diagonal,
                   square_free_decomposition)
from .scalars import I, ONE, ZERO, QuadExtScalar, is_exact, rational, format_scalar

log = logging.getLogger(__name__)

REAL = "real"
COMPLEX = "complex"
CLUSTER_TOL = 1e-9


class NonCommutingError(ValueError):
    """A and B do not commute, so the reduction D = B − A² does not apply."""


# data types ------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantFactorData:
    """Nonconstant monic invariant polynomials, largest degree first."""

    factors: tuple[UniPoly, ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree for f in self.factors)

    @property
    def q(self) -> int:
        return len(self.factors)

    def characteristic_polynomial(self) -> UniPoly:
        out = UniPoly([ONE])
        for f in self.factors:
            out = out * f
        return out


def _eig_key(e):
    if isinstance(e, (int, Fraction)):
        return (0, Fraction(e), 0.0, "")
    z = complex(e)
    return (1 if isinstance(e, QuadExtScalar) else 2, 0, round(z.real, 9), round(z.imag, 9))


@dataclass(frozen=True)
class JordanStructure:
    """Multiset of Jordan blocks, plus real rotation blocks R²_{μν} in real mode.

    ``blocks`` holds ``(eigenvalue, size)``; ``rotations`` holds
    ``(mu, nu, size)`` with ``nu > 0`` and a real dimension of ``2*size``.
    Always canonically ordered: rotation blocks first, then blocks by
    eigenvalue (rationals, other exact values, numeric) with sizes descending.
    """

    blocks: tuple = ()
    rotations: tuple = ()
    field: str = COMPLEX
    exact: bool = True

    @classmethod
    def make(cls, blocks: Sequence = (), rotations: Sequence = (), field: str = COMPLEX) -> "JordanStructure":
        if field not in (REAL, COMPLEX):
            raise ValueError(f"unknown field {field!r}")
        blocks = [(_norm_eig(e), int(k)) for e, k in blocks]
        rots = [(_norm_eig(m), _norm_eig(v), int(k)) for m, v, k in rotations]
        if any(k < 1 for _, k in blocks) or any(k < 1 for *_, k in rots):
            raise ValueError("block sizes must be positive")
        if field == COMPLEX:
            # over C a rotation block is the pair of blocks μ ± iν
            for m, v, k in rots:
                blocks.append((_norm_eig(m + I * v), k))
                blocks.append((_norm_eig(m - I * v), k))
            rots = []
        else:
            fixed = []
            for m, v, k in rots:
                if not v:
                    raise ValueError("rotation block needs nu != 0")
                if (v < 0) if is_exact(v) else (float(v) < 0):
                    v = -v
                fixed.append((m, v, k))
            rots = fixed
            for e, _ in blocks:
                im = complex(e).imag
                if abs(im) > 0:
                    raise ValueError("non-real eigenvalue in a real Jordan structure; use a rotation block")
        blocks.sort(key=lambda b: (_eig_key(b[0]), -b[1]))
        rots.sort(key=lambda r: (_eig_key(r[0]), _eig_key(r[1]), -r[2]))
        exact = all(is_exact(e) for e, _ in blocks) and all(is_exact(m) and is_exact(v) for m, v, _ in rots)
        return cls(tuple(blocks), tuple(rots), field, exact)

    @property
    def n(self) -> int:
        return sum(k for _, k in self.blocks) + 2 * sum(k for *_, k in self.rotations)

    def matrix(self) -> Matrix:
        parts = [rotation_block(m, v, k) for m, v, k in self.rotations]
        parts += [jordan_block(e, k) for e, k in self.blocks]
        return Matrix.direct_sum(parts)

    def elementary_divisors(self) -> list[tuple[object, int]]:
        """(eigenvalue, size) over C; rotation blocks give the pair μ ± iν."""
        out = list(self.blocks)
        for m, v, k in self.rotations:
            out.append((_norm_eig(m + I * v), k))
            out.append((_norm_eig(m - I * v), k))
        return out

    def is_nilpotent(self) -> bool:
        return not self.rotations and all(_is_zero_eig(e) for e, _ in self.blocks)

    def is_scalar(self) -> bool:
        if self.rotations:
            return False
        if any(k != 1 for _, k in self.blocks):
            return False
        eigs = [e for e, _ in self.blocks]
        return all(_eig_equal(eigs[0], e) for e in eigs[1:])

    def block_sizes(self) -> list[int]:
        """Jordan block sizes in matrix order (a rotation block of size k counts as k)."""
        return [k for *_, k in self.rotations] + [k for _, k in self.blocks]

    def describe(self) -> str:
        parts = [f"R2({format_scalar(m)},{format_scalar(v)})^{k}" for m, v, k in self.rotations]
        parts += [f"J({format_scalar(e)})^{k}" for e, k in self.blocks]
        return " ⊕ ".join(parts)


def _norm_eig(e):
    if isinstance(e, (int, str)):
        return rational(e)
    if isinstance(e, float):
        return e + 0.0
    if isinstance(e, complex):
        return e.real + 0.0 if e.imag == 0 else complex(e.real + 0.0, e.imag + 0.0)
    return e


def _is_zero_eig(e) -> bool:
    return (not e) if is_exact(e) else abs(complex(e)) <= CLUSTER_TOL


def _eig_equal(a, b, tol: float = CLUSTER_TOL) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    za, zb = complex(a), complex(b)
    return abs(za - zb) <= tol * max(1.0, abs(za), abs(zb))


def rotation_block(mu, nu, size: int = 1) -> Matrix:
    """Real Jordan block: R²_{μν} on the diagonal and E² on the superdiagonal."""
    n = 2 * size
    out = [ZERO] * (n * n)
    for b in range(size):
        i = 2 * b
        out[i * n + i] = mu
        out[i * n + i + 1] = nu
        out[(i + 1) * n + i] = -nu
        out[(i + 1) * n + i + 1] = mu
        if b + 1 < size:
            out[i * n + i + 2] = ONE
            out[(i + 1) * n + i + 3] = ONE
    return Matrix(n, n, out)


@dataclass
class SystemSpec:
    """Input system ẍ = Aẋ + Bx + C(t), or ÿ = Dy, or a Jordan structure."""

    n: int
    field: str = COMPLEX
    A: Optional[Matrix] = None
    B: Optional[Matrix] = None
    has_forcing: bool = False
    D: Optional[Matrix] = None
    jordan: Optional[JordanStructure] = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("systems need n >= 2")
        given = [self.A is not None or self.B is not None, self.D is not None, self.jordan is not None]
        if sum(given) != 1:
            raise ValueError("give exactly one of (A, B), D, or a Jordan structure")
        if given[0]:
            if self.A is None or self.B is None:
                raise ValueError("both A and B are required")
            for m in (self.A, self.B):
                if m.shape != (self.n, self.n):
                    raise ValueError(f"matrix shape {m.shape} does not match n = {self.n}")
            if not (self.A @ self.B - self.B @ self.A).is_zero():
                raise NonCommutingError("matrices must commute")
        if self.D is not None and self.D.shape != (self.n, self.n):
            raise ValueError(f"matrix shape {self.D.shape} does not match n = {self.n}")
        if self.jordan is not None and self.jordan.n != self.n:
            raise ValueError(f"Jordan structure has size {self.jordan.n}, expected n = {self.n}")

    def reduced_matrix(self) -> Matrix:
        if self.D is not None:
            return self.D
        if self.jordan is not None:
            return self.jordan.matrix()
        return reduce_system(self.A, self.B)

    def structure(self) -> JordanStructure:
        if self.jordan is not None:
            if self.jordan.field == self.field:
                return self.jordan
            return JordanStructure.make(self.jordan.blocks, self.jordan.rotations, self.field)
        return jordan_structure(self.reduced_matrix(), self.field)


# operations ------------------------------------------------------------------

def reduce_system(A: Matrix, B: Matrix) -> Matrix:
    """D = B − A² for commuting A, B."""
    if not (A.is_square() and B.is_square() and A.shape == B.shape):
        raise ValueError("A and B must be square of equal size")
    if not (A @ B - B @ A).is_zero():
        raise NonCommutingError("matrices must commute")
    return B - A @ A


def smith_invariant_factors(D: Matrix) -> InvariantFactorData:
    if not D.is_square():
        raise ValueError("D must be square")
    diag = smith_diagonal(PolyMatrix.characteristic(D))
    factors = [f.monic() for f in diag if f.degree > 0]
    factors.reverse()
    return InvariantFactorData(tuple(factors))


def commutant_count_from_partition(partition: Sequence[int]) -> int:
    """N = n₁ + 3n₂ + … + (2q − 1)n_q for n₁ ≥ … ≥ n_q."""
    parts = list(partition)
    if any(a < b for a, b in zip(parts, parts[1:])) or any(p <= 0 for p in parts):
        raise ValueError(f"not a partition in descending order: {parts}")
    return sum((2 * i + 1) * p for i, p in enumerate(parts))


def commutant_count_from_divisors(divisors: Sequence[tuple[object, int]]) -> int:
    """N = Σ_ij σ_ij with σ_ij = min(k_i, k_j) for equal eigenvalues, else 0."""
    total = 0
    for ei, ki in divisors:
        for ej, kj in divisors:
            if _eig_equal(ei, ej):
                total += min(ki, kj)
    return total


def is_nilpotent(D: Matrix) -> bool:
    return (D ** D.rows).is_zero()


def is_scalar(D: Matrix) -> bool:
    c = D[0, 0]
    return all(D[i, j] == (c if i == j else 0) for i in range(D.rows) for j in range(D.cols))


def _blocks_from_rank_sequence(D: Matrix, eig: Fraction, mult: int) -> list[int]:
    n = D.rows
    shifted = D - Matrix.identity(n).scale(eig)
    ranks = [n]
    power = Matrix.identity(n)
    while ranks[-1] > n - mult:
        power = power @ shifted
        ranks.append(rank(power))
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
    sizes = []
    for k in range(1, len(at_least)):
        sizes += [k] * (at_least[k - 1] - at_least[k])
    return sorted(sizes, reverse=True)


def _numeric_divisors(inv: InvariantFactorData, rational_roots, tol: float) -> list[tuple[complex, int]]:
    found = []
    for f in inv.factors:
        rest = f
        for r, _ in rational_roots:
            lin = UniPoly.linear_factor(r)
            while True:
                q, rem = divmod(rest, lin)
                if rem:
                    break
                rest = q
        for s, mult in square_free_decomposition(rest):
            coeffs = [float(c) for c in reversed(s.coeffs)]
            for z in np.roots(coeffs):
                found.append((complex(z), mult))
    # match roots of the same eigenvalue across invariant factors
    reps: list[complex] = []
    out = []
    for z, k in found:
        for rep in reps:
            if abs(rep - z) <= tol * max(1.0, abs(z)):
                z = rep
                break
        else:
            reps.append(z)
        out.append((z, k))
    return out


def jordan_structure(D: Matrix, field: str = COMPLEX, tol: float = CLUSTER_TOL) -> JordanStructure:
    """Jordan (or real-canonical) structure of D.

    Rational eigenvalues are resolved exactly from rank sequences of
    (D − λE)^k; anything left in the characteristic polynomial is handled
    numerically and the result is flagged inexact.
    """
    if not D.is_square():
        raise ValueError("D must be square")
    inv = smith_invariant_factors(D)
    roots, residual = factor_rational_roots(inv.characteristic_polynomial())
    blocks: list = []
    for r, m in roots:
        blocks += [(r, k) for k in _blocks_from_rank_sequence(D, r, m)]
    rotations: list = []
    if residual.degree > 0:
        log.info("characteristic polynomial has irrational factor %s; eigenvalues numeric", residual)
        numeric = _numeric_divisors(inv, roots, tol)
        if field == COMPLEX:
            blocks += [(z if abs(z.imag) > tol * max(1.0, abs(z)) else z.real, k) for z, k in numeric]
        else:
            blocks += [(z.real, k) for z, k in numeric if abs(z.imag) <= tol * max(1.0, abs(z))]
            upper = [(z, k) for z, k in numeric if z.imag > tol * max(1.0, abs(z))]
            lower = [(z, k) for z, k in numeric if z.imag < -tol * max(1.0, abs(z))]
            if not _conjugate_match(upper, lower, tol):
                raise ValueError("inconsistent conjugate structure")
            rotations += [(z.real, z.imag, k) for z, k in upper]
    return JordanStructure.make(blocks, rotations, field)


def _conjugate_match(upper, lower, tol) -> bool:
    pool = list(lower)
    for z, k in upper:
        hit = next((i for i, (w, kk) in enumerate(pool)
                    if kk == k and abs(w.conjugate() - z) <= tol * max(1.0, abs(z)) * 10), None)
        if hit is None:
            return False
        pool.pop(hit)
    return not pool
