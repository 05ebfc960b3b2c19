"""Matrices commuting with D, and the shifted equation DH − HD = κD."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .matrix import Matrix, jordan_block, kernel_basis, solve
from .scalars import ONE, ZERO, rational
from .structure import JordanStructure, _eig_equal, rotation_block


class IncompatibleShiftError(ValueError):
    """DH − HD = κD with κ ≠ 0 has no solution (D is not nilpotent)."""


@dataclass(frozen=True)
class CommutantBasis:
    matrices: tuple[Matrix, ...]

    @property
    def N(self) -> int:
        return len(self.matrices)

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)


def commutator_map(D: Matrix) -> Matrix:
    """The n²×n² matrix of vec(H) ↦ vec(DH − HD), row-major vectorisation."""
    n = D.rows
    m = n * n
    out = [ZERO] * (m * m)
    for i in range(n):
        for j in range(n):
            row = (i * n + j) * m
            for k in range(n):
                d_ik = D[i, k]
                if d_ik:
                    out[row + k * n + j] += d_ik
                d_kj = D[k, j]
                if d_kj:
                    out[row + i * n + k] -= d_kj
    return Matrix(m, m, out)


def _unvec(v, n: int) -> Matrix:
    return Matrix(n, n, v)


def commutant_basis(D: Matrix) -> CommutantBasis:
    if not D.is_square():
        raise ValueError("D must be square")
    n = D.rows
    return CommutantBasis(tuple(_unvec(v, n) for v in kernel_basis(commutator_map(D))))


def solve_sylvester_shift(D: Matrix, kappa) -> Optional[Matrix]:
    """Some H with DH − HD = κD, or None when the system is inconsistent."""
    kappa = rational(kappa)
    n = D.rows
    rhs = [kappa * v for v in D.entries]
    x = solve(commutator_map(D), rhs)
    return None if x is None else _unvec(x, n)


def gamma_particular(structure: JordanStructure, kappa) -> Matrix:
    """κ·diag(1, …, k₁, 1, …, k₂, …) for a nilpotent Jordan structure."""
    kappa = rational(kappa)
    if not structure.is_nilpotent():
        raise IncompatibleShiftError("DH - HD = kappa*D has no solution: J is not nilpotent")
    ramps = [Fraction(i) for _, k in structure.blocks for i in range(1, k + 1)]
    return Matrix.diag([kappa * r for r in ramps])


def gamma_ramps(structure: JordanStructure) -> list[int]:
    return [i for _, k in structure.blocks for i in range(1, k + 1)]


def rational_standin(structure: JordanStructure) -> Matrix:
    """A rational matrix with the same commutant as ``structure.matrix()``.

    The commutant of a (real) Jordan matrix depends only on which blocks
    share an eigenvalue, so non-rational eigenvalues can be replaced by
    fresh rational values that preserve the equality pattern.
    """
    if all(isinstance(e, Fraction) for e, _ in structure.blocks) and \
            all(isinstance(m, Fraction) and isinstance(v, Fraction) for m, v, _ in structure.rotations):
        return structure.matrix()
    used = [e for e, _ in structure.blocks if isinstance(e, Fraction)]
    fresh = int(max((abs(e) for e in used), default=0)) + 1
    reps: list = []

    def stand(e):
        nonlocal fresh
        if isinstance(e, Fraction):
            return e
        for orig, s in reps:
            if _eig_equal(orig, e):
                return s
        reps.append((e, Fraction(fresh)))
        fresh += 1
        return reps[-1][1]

    parts = []
    rot_reps: list = []
    for m, v, k in structure.rotations:
        hit = next((s for (om, ov), s in rot_reps if _eig_equal(om, m) and _eig_equal(ov, v)), None)
        if hit is None:
            hit = Fraction(len(rot_reps) + 1)
            rot_reps.append(((m, v), hit))
        parts.append(rotation_block(hit, ONE, k))
    parts += [jordan_block(stand(e), k) for e, k in structure.blocks]
    return Matrix.direct_sum(parts)


def structure_commutant(structure: JordanStructure) -> CommutantBasis:
    return commutant_basis(rational_standin(structure))

