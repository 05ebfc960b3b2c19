"""Dense exact matrices and the rational linear-algebra kernels built on them."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .kernels import rref_fraction_free
from .scalars import ONE, ZERO, format_scalar, inv, is_exact, rational


class Matrix:
    """Immutable dense matrix over any scalar type (row-major storage).

    Entries are usually ``Fraction``; surds and complex numbers are allowed
    where the caller needs them (e.g. initial-data matrices).
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    # constructors ---------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], exact: bool = True) -> "Matrix":
        data = [list(r) for r in rows]
        if not data or not data[0]:
            raise ValueError("matrix must be non-empty")
        ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix rows")
        conv = (lambda v: v if is_exact(v) and not isinstance(v, int) else rational(v)) if exact else (lambda v: v)
        return cls(len(data), ncols, [conv(v) for r in data for v in r])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls(n, n, [values[i] if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def direct_sum(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [ZERO] * (n * m)
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[(r0 + i) * m + c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls(n, m, out)

    # access -----------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_exact(self) -> bool:
        return all(is_exact(v) for v in self.entries)

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return not any(self.entries)
        return all(abs(complex(v)) <= tol for v in self.entries)

    # arithmetic ---------------------------------------------------------------
    def _check_same(self, other: "Matrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "Matrix":
        return Matrix(self.rows, self.cols, [c * a for a in self.entries])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            out = []
            ocols = [other.entries[j::other.cols] for j in range(other.cols)]
            for i in range(self.rows):
                r = self.row(i)
                for col in ocols:
                    s = ZERO
                    for a, b in zip(r, col):
                        if a and b:
                            s = s + a * b
                    out.append(s)
            return Matrix(self.rows, other.cols, out)
        return self.apply(other, ZERO)

    def apply(self, vec, zero):
        """Matrix times a vector whose entries may be any module elements."""
        vec = list(vec)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for i in range(self.rows):
            acc = zero
            for a, v in zip(self.row(i), vec):
                if a:
                    acc = acc + v * a
            out.append(acc)
        return out

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise ValueError("power of non-square matrix")
        out = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    T = property(transpose)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def to_numpy(self):
        import numpy as np
        return np.array([[complex(v) for v in self.row(i)] for i in range(self.rows)], dtype=complex)

    def __repr__(self):
        body = "; ".join(", ".join(format_scalar(v) for v in self.row(i)) for i in range(self.rows))
        return f"Matrix([{body}])"


RatMatrix = Matrix


def jordan_block(eigenvalue, size: int) -> Matrix:
    return Matrix(size, size, [
        eigenvalue if i == j else (ONE if j == i + 1 else ZERO)
        for i in range(size) for j in range(size)
    ])


def commutes(a: Matrix, b: Matrix) -> bool:
    return (a @ b - b @ a).is_zero()


# rational kernels -----------------------------------------------------------

def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for r in rows:
        den = 1
        for v in r:
            if v:
                den = den * v.denominator // math.gcd(den, v.denominator)
        out.append([int(v * den) for v in r])
    return out


def _rational_rows(m) -> list[list[Fraction]]:
    if isinstance(m, Matrix):
        if not all(isinstance(v, (int, Fraction)) for v in m.entries):
            raise TypeError("rational kernel requires rational entries")
        return m.to_rows()
    return [list(r) for r in m]


def rref(m) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q (pivot entries 1) and pivot columns."""
    rows = _rational_rows(m)
    if not rows:
        return [], []
    ncols = len(rows[0])
    work = _integer_rows(rows)
    pivots, d = rref_fraction_free(work, ncols)
    reduced = [[Fraction(v, d) for v in work[i]] for i in range(len(pivots))]
    return reduced, pivots


def rank(m) -> int:
    """Exact rank via fraction-free elimination."""
    rows = _rational_rows(m)
    if not rows:
        return 0
    work = _integer_rows(rows)
    pivots, _ = rref_fraction_free(work, len(rows[0]))
    return len(pivots)


def kernel_basis(m) -> list[list[Fraction]]:
    """Right-nullspace basis; each vector's first nonzero entry is 1.

    Vectors are ordered by their free column, which is the pivot order of the
    echelon form.
    """
    rows = _rational_rows(m)
    ncols = len(rows[0])
    reduced, pivots = rref(rows)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        lead = next(x for x in v if x)
        basis.append([x / lead for x in v])
    return basis


def solve(m, b) -> list[Fraction] | None:
    """One solution of ``m x = b`` over Q, or None when inconsistent."""
    rows = _rational_rows(m)
    ncols = len(rows[0])
    aug = [list(r) + [rational(bi) if not isinstance(bi, Fraction) else bi] for r, bi in zip(rows, b)]
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for i, p in enumerate(pivots):
        x[p] = reduced[i][ncols]
    return x


# elimination over an arbitrary exact field ---------------------------------

def field_rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Gauss-Jordan over any exact field (rationals or surds).  Small inputs only."""
    work = [list(r) for r in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(work)) if work[i][c]), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        s = inv(work[r][c])
        work[r] = [v * s for v in work[r]]
        for i in range(len(work)):
            f = work[i][c]
            if i != r and f:
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def field_rank(rows: Sequence[Sequence]) -> int:
    return len(field_rref(rows)[1])


def inverse(m: Matrix) -> Matrix:
    """Exact inverse; raises ValueError when singular."""
    if not m.is_square():
        raise ValueError("inverse of non-square matrix")
    n = m.rows
    aug = [list(m.row(i)) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    red, piv = field_rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return Matrix(n, n, [red[i][n + j] for i in range(n) for j in range(n)])
