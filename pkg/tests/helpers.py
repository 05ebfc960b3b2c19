"""Shared builders for the test suite: corpora, random matrices, reference generator lists."""
from __future__ import annotations

import cmath
import random
from fractions import Fraction as F

from linsym.exppoly import ExpPoly
from linsym.fields import VectorField
from linsym.matrix import Matrix, jordan_block
from linsym.scalars import I, ONE, ZERO
from linsym.structure import COMPLEX, REAL, JordanStructure

CORPUS_EIGS = (-1, 0, 1, 2, 9)


def block_multisets(n, eigs=CORPUS_EIGS):
    """All multisets of Jordan blocks of total size n with eigenvalues from eigs."""
    kinds = [(e, k) for e in eigs for k in range(1, n + 1)]

    def rec(start, left):
        if left == 0:
            yield ()
            return
        for i in range(start, len(kinds)):
            e, k = kinds[i]
            if k <= left:
                for rest in rec(i, left - k):
                    yield ((e, k),) + rest
    yield from rec(0, n)


def make_structure(blocks, field=COMPLEX):
    return JordanStructure.make([(F(e), k) for e, k in blocks], (), field)


def structure_corpus(per_size=15, seed=7):
    """Deterministic non-scalar Jordan structures: per_size each for n = 2, 3, 4, 5."""
    rng = random.Random(seed)
    out = []
    for n in (2, 3, 4, 5):
        pool = [b for b in block_multisets(n) if not make_structure(b).is_scalar()]
        if len(pool) > per_size:
            pool = rng.sample(pool, per_size)
        out += [make_structure(b) for b in pool]
    return out


def random_rational_matrix(rng, n, lo=-3, hi=3, dens=(1, 2)):
    return Matrix(n, n, [F(rng.randint(lo, hi), rng.choice(dens)) for _ in range(n * n)])


def random_invertible(rng, n, lo=-2, hi=2):
    from linsym.matrix import rank
    while True:
        P = Matrix(n, n, [F(rng.randint(lo, hi)) for _ in range(n * n)])
        if rank(P) == n:
            return P


def conjugate(J, P):
    from linsym.matrix import inverse
    return P @ J @ inverse(P)


def unit_H(n, pairs):
    """Matrix with given {(row, col): value} entries (0-based)."""
    return Matrix(n, n, [F(pairs.get((i, j), 0)) for i in range(n) for j in range(n)])


def poly_field(n, entries):
    """Drift-only field from {component: [(coef, power, freq), ...]}."""
    phi = [ExpPoly(entries.get(b, [])) for b in range(n)]
    return VectorField.solution(phi)


def linear_field(n, pairs):
    return VectorField.linear(unit_H(n, pairs))


def time_translation(n):
    return VectorField.time_translation(n)


# reference generator lists ------------------------------------------------

def two_block_fields(lam1, lam2):
    """Reference generators for J²_{λ₁} ⊕ J²_{λ₂}, with distinct eigenvalues λ₁ ≠ λ₂.

    Covers the λ₂ ≠ 0 list and the λ₂ = 0 list; returns exact fields.
    """
    from linsym.scalars import sqrt_exact
    n = 4
    out = []

    def exp_pair(lam, a, b):
        r = sqrt_exact(F(lam))
        fields = []
        for s in (1, -1):
            w = s * r
            fields.append(poly_field(n, {a: [(ONE, 1, w)], b: [(2 * w, 0, w)]}))
        for s in (1, -1):
            fields.append(poly_field(n, {a: [(ONE, 0, s * r)]}))
        return fields

    def nil_pair(a, b):
        return [poly_field(n, {a: [(ONE, 3, ZERO)], b: [(F(6), 1, ZERO)]}),
                poly_field(n, {a: [(ONE, 2, ZERO)], b: [(F(2), 0, ZERO)]}),
                poly_field(n, {a: [(ONE, 1, ZERO)]}),
                poly_field(n, {a: [(ONE, 0, ZERO)]})]

    out += exp_pair(lam1, 0, 1)
    out += exp_pair(lam2, 2, 3) if lam2 != 0 else nil_pair(2, 3)
    out.append(linear_field(n, {(0, 0): 1, (1, 1): 1}))
    if lam2 == 0:
        out.append(linear_field(n, {(0, 1): 1}))
    out.append(linear_field(n, {(2, 2): 1, (3, 3): 1}))
    out.append(linear_field(n, {(2, 3): 1}))
    out.append(time_translation(n))
    return out


def equal_block_fields(lam):
    """Reference generators for J²_λ ⊕ J²_λ (17 fields for λ ≠ 0, 18 for λ = 0)."""
    from linsym.scalars import sqrt_exact
    n = 4
    out = []
    for a, b in ((0, 1), (2, 3)):
        if lam != 0:
            r = sqrt_exact(F(lam))
            for s in (1, -1):
                w = s * r
                out.append(poly_field(n, {a: [(ONE, 1, w)], b: [(2 * w, 0, w)]}))
            for s in (1, -1):
                out.append(poly_field(n, {a: [(ONE, 0, s * r)]}))
        else:
            out += [poly_field(n, {a: [(ONE, 3, ZERO)], b: [(F(6), 1, ZERO)]}),
                    poly_field(n, {a: [(ONE, 2, ZERO)], b: [(F(2), 0, ZERO)]}),
                    poly_field(n, {a: [(ONE, 1, ZERO)]}),
                    poly_field(n, {a: [(ONE, 0, ZERO)]})]
    for pairs in ({(0, 0): 1, (1, 1): 1}, {(0, 1): 1}, {(0, 2): 1, (1, 3): 1}, {(0, 3): 1},
                  {(2, 0): 1, (3, 1): 1}, {(2, 1): 1}, {(2, 2): 1, (3, 3): 1}, {(2, 3): 1}):
        out.append(linear_field(n, pairs))
    out.append(time_translation(n))
    if lam == 0:
        H = Matrix.diag([F(-2), F(-4), F(-2), F(-4)])
        out.append(VectorField(ONE, ZERO, H, tuple(ExpPoly() for _ in range(n)), "dilation"))
    return out


def rotation_structure(mu=1, nu=1):
    return JordanStructure.make([(F(0), 2), (F(0), 1)], [(F(mu), F(nu), 1)], REAL)


def rotation_fields(mu=1, nu=1):
    """The 18 reference generators for R²_{μν} ⊕ J²₀ ⊕ J¹₀ with α + iβ = √(μ + iν)."""
    n = 5
    root = cmath.sqrt(complex(mu, nu))
    al, be = root.real, root.imag
    c = al * al - be * be - mu
    ab2 = 2 * al * be

    def ecos(s):  # e^{sαt} cos βt
        return ExpPoly([(0.5, 0, s * al + 1j * be), (0.5, 0, s * al - 1j * be)])

    def esin(s):  # e^{sαt} sin βt
        return ExpPoly([(-0.5j, 0, s * al + 1j * be), (0.5j, 0, s * al - 1j * be)])

    def sol(p1, p2):
        phi = [p1, p2] + [ExpPoly() for _ in range(3)]
        return VectorField.solution(phi)

    fields = [
        sol(ecos(1) * nu, ecos(1) * c - esin(1) * ab2),
        sol(esin(1) * nu, esin(1) * c + ecos(1) * ab2),
        sol(ecos(-1) * nu, ecos(-1) * c + esin(-1) * ab2),
        sol(esin(-1) * nu, esin(-1) * c - ecos(-1) * ab2),
    ]
    fields += [
        poly_field(n, {2: [(ONE, 0, ZERO)]}),
        poly_field(n, {2: [(ONE, 1, ZERO)]}),
        poly_field(n, {2: [(ONE, 3, ZERO)], 3: [(F(6), 1, ZERO)]}),
        poly_field(n, {2: [(ONE, 2, ZERO)], 3: [(F(2), 0, ZERO)]}),
        poly_field(n, {4: [(ONE, 0, ZERO)]}),
        poly_field(n, {4: [(ONE, 1, ZERO)]}),
        linear_field(n, {(0, 0): 1, (1, 1): 1}),
        linear_field(n, {(0, 1): 1, (1, 0): -1}),
        linear_field(n, {(2, 2): 1, (3, 3): 1}),
        linear_field(n, {(2, 3): 1}),
        linear_field(n, {(2, 4): 1}),
        linear_field(n, {(4, 3): 1}),
        linear_field(n, {(4, 4): 1}),
        time_translation(n),
    ]
    return fields


def swap_blocks_permutation():
    """P with P·(J(0)² ⊕ J(λ)²)·P⁻¹ = J(λ)² ⊕ J(0)²."""
    order = [2, 3, 0, 1]
    return Matrix(4, 4, [F(1) if order[i] == j else F(0) for i in range(4) for j in range(4)])
