"""Maximal Lie invariance algebras of ẍ = Jx and their dimensions."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .commutant import gamma_particular, structure_commutant
from .exppoly import ExpPoly, fundamental_system
from .fields import (COMMUTANT, DILATION, PolyVectorField,
                     ProjectiveVectorField, VectorField, XPoly)
from .matrix import Matrix, inverse
from .scalars import ONE, ZERO
from .structure import (COMPLEX, JordanStructure, _eig_equal, commutant_count_from_divisors,
                        commutant_count_from_partition, is_nilpotent, is_scalar,
                        smith_invariant_factors)

FREE = "free"
NILPOTENT = "nilpotent"
NON_NILPOTENT = "non_nilpotent"

SCAN_RANGE = (2, 8)


class ScalarMatrixError(ValueError):
    """J is proportional to the identity; the free-system algebra applies instead."""


@dataclass
class SymmetryAlgebra:
    generators: list
    dimension: int
    classification: str
    N: int
    field: str = COMPLEX
    J: Matrix | None = None
    structure: JordanStructure | None = dc_field(default=None, repr=False)

    def __post_init__(self):
        if self.dimension != len(self.generators):
            raise ValueError("dimension must equal the number of generators")

    @property
    def n(self) -> int:
        return self.J.rows

    def is_exact(self) -> bool:
        return all(g.is_exact() for g in self.generators)

    def families(self) -> dict:
        out: dict = {}
        for g in self.generators:
            out[g.family] = out.get(g.family, 0) + 1
        return out

    def to_numeric(self) -> "SymmetryAlgebra":
        gens = []
        for g in self.generators:
            if isinstance(g, VectorField):
                gens.append(VectorField(g.c1, g.c0, g.H, tuple(f.numeric() for f in g.phi), g.family))
            else:
                gens.append(g)
        return SymmetryAlgebra(gens, self.dimension, self.classification, self.N,
                               self.field, self.J, self.structure)


def expected_dimension(n: int, N: int, nilpotent: bool) -> int:
    return 2 * n + N + (2 if nilpotent else 1)


def free_dimension(n: int) -> int:
    return (n + 2) ** 2 - 1


def build_algebra(structure: JordanStructure, field: str | None = None) -> SymmetryAlgebra:
    """Solutions, commutant fields, ∂_t, and the dilation when J is nilpotent."""
    field = field or structure.field
    if structure.field != field:
        structure = JordanStructure.make(structure.blocks, structure.rotations, field)
    if structure.is_scalar():
        raise ScalarMatrixError("J is scalar: use the free-system algebra")
    n = structure.n
    fs = fundamental_system(structure, field)
    gens: list = [VectorField.solution(phi) for phi in fs.solutions]
    basis = structure_commutant(structure)
    gens += [VectorField.linear(H, COMMUTANT) for H in basis]
    gens.append(VectorField.time_translation(n))
    nilpotent = structure.is_nilpotent()
    if nilpotent:
        # c₁ = 1 forces κ = −2 in the shifted commutator equation
        H = gamma_particular(structure, -2)
        gens.append(VectorField(ONE, ZERO, H, tuple(ExpPoly() for _ in range(n)), DILATION))
    dim = expected_dimension(n, basis.N, nilpotent)
    return SymmetryAlgebra(gens, dim, NILPOTENT if nilpotent else NON_NILPOTENT, basis.N,
                           field, structure.matrix(), structure)


def build_free_algebra(n: int) -> SymmetryAlgebra:
    """The (n+2)² − 1 projective fields of ẍ = 0, grouped by family."""
    if n < 1:
        raise ValueError("n must be positive")

    def unit(a):
        return [1 if i == a else 0 for i in range(n)]

    def two(a, c):
        e = [0] * n
        e[a] += 1
        e[c] += 1
        return e

    zero = [0] * n
    make = ProjectiveVectorField.from_monomials
    none = [[] for _ in range(n)]

    def eta_at(b, records):
        rows = [[] for _ in range(n)]
        rows[b] = records
        return rows

    gens = [make(n, xi=[(ONE, 0, zero)], eta=none)]
    gens += [make(n, eta=eta_at(a, [(ONE, 0, zero)])) for a in range(n)]
    gens.append(make(n, xi=[(ONE, 1, zero)], eta=none))
    gens += [make(n, xi=[(ONE, 0, unit(a))], eta=none) for a in range(n)]
    gens += [make(n, eta=eta_at(a, [(ONE, 1, zero)])) for a in range(n)]
    gens += [make(n, eta=eta_at(b, [(ONE, 0, unit(a))])) for a in range(n) for b in range(n)]
    gens += [make(n, xi=[(ONE, 1, unit(a))], eta=[[(ONE, 0, two(a, c))] for c in range(n)])
             for a in range(n)]
    gens.append(make(n, xi=[(ONE, 2, zero)], eta=[[(ONE, 1, unit(c))] for c in range(n)]))
    return SymmetryAlgebra(gens, free_dimension(n), FREE, n * n, COMPLEX, Matrix.zeros(n))


def dimension_only(D: Matrix) -> tuple[int, str, int]:
    """(dim 𝔤, classification, N) from the invariant-factor degrees of D."""
    if not D.is_square():
        raise ValueError("D must be square")
    n = D.rows
    if is_scalar(D):
        return free_dimension(n), FREE, n * n
    N = commutant_count_from_partition(smith_invariant_factors(D).degrees)
    nil = is_nilpotent(D)
    return expected_dimension(n, N, nil), NILPOTENT if nil else NON_NILPOTENT, N


def partition_from_divisors(divisors: Sequence[tuple[object, int]]) -> tuple[int, ...]:
    """Invariant-factor degrees n₁ ≥ … ≥ n_q from elementary divisors."""
    groups: list[list] = []
    for e, k in divisors:
        for g in groups:
            if _eig_equal(g[0], e):
                g[1].append(k)
                break
        else:
            groups.append([e, [k]])
    sizes = [sorted(g[1], reverse=True) for g in groups]
    q = max(len(s) for s in sizes)
    return tuple(sum(s[i] for s in sizes if i < len(s)) for i in range(q))


def structure_dimension(structure: JordanStructure) -> tuple[int, str, int]:
    """Same as :func:`dimension_only`, read off a Jordan structure."""
    n = structure.n
    if structure.is_scalar():
        return free_dimension(n), FREE, n * n
    N = commutant_count_from_divisors(structure.elementary_divisors())
    nil = structure.is_nilpotent()
    return expected_dimension(n, N, nil), NILPOTENT if nil else NON_NILPOTENT, N


def partitions(n: int, largest: int | None = None):
    """Partitions of n in descending order, largest parts first."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def realizable_dimensions(n: int) -> set[int]:
    """Every dim 𝔤 reached by a non-scalar n×n matrix.

    Any partition of n is the invariant-factor degree tuple of a nilpotent
    matrix (blocks J₀ of those sizes) and of a non-nilpotent one (same sizes,
    nonzero eigenvalue), so both classifications count for every partition
    except the all-ones partition of the scalar matrices.
    """
    lo, hi = SCAN_RANGE
    if not lo <= n <= hi:
        raise ValueError(f"n must lie in [{lo}, {hi}]")
    out = set()
    for p in partitions(n):
        if max(p) == 1:
            continue
        N = commutant_count_from_partition(p)
        out.add(expected_dimension(n, N, False))
        out.add(expected_dimension(n, N, True))
    return out


def _lift_poly(g: PolyVectorField, P: Matrix, Pinv: Matrix) -> PolyVectorField:
    n = g.n
    xi = g.xi.substitute_linear(Pinv)
    eta = [c.substitute_linear(Pinv) for c in g.eta]
    mixed = []
    for b in range(n):
        acc = XPoly(n)
        for a in range(n):
            if P[b, a]:
                acc = acc + eta[a] * P[b, a]
        mixed.append(acc)
    cls = ProjectiveVectorField if isinstance(g, ProjectiveVectorField) else PolyVectorField
    return cls(xi, mixed, g.family)


def lift_by_similarity(alg: SymmetryAlgebra, P: Matrix) -> SymmetryAlgebra:
    """Carry the algebra of ẍ = Jx to ẍ = (PJP⁻¹)x via the change y = Px."""
    if P.shape != (alg.n, alg.n):
        raise ValueError("P must be n×n")
    Pinv = inverse(P)
    gens = []
    for g in alg.generators:
        if isinstance(g, VectorField):
            phi = tuple(P.apply(g.phi, ExpPoly()))
            gens.append(VectorField(g.c1, g.c0, P @ g.H @ Pinv, phi, g.family))
        else:
            gens.append(_lift_poly(g, P, Pinv))
    return SymmetryAlgebra(gens, alg.dimension, alg.classification, alg.N, alg.field,
                           P @ alg.J @ Pinv, None)
