"""Independent checks on symmetry generators.

The invariance condition is evaluated symbolically: ξ and η become
polynomials in the jet variables (x, v = ẋ) with exp-polynomial coefficients
in t, so a residual can be tested for being identically zero or sampled.
For restricted fields the condition collapses to
``(φ̈ − Jφ) + (HJ − JH − 2c₁J)x``; :func:`residual_reduced` evaluates that
form on its own so the two paths can be compared.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .commutant import commutant_basis
from .exppoly import ExpPoly, differentiate
from .fields import PolyVectorField, VectorField, XPoly
from .matrix import Matrix, rref
from .poly import factor_rational_roots
from .scalars import ZERO, QuadExtScalar, _generators, _mul_keys
from .structure import (commutant_count_from_divisors, commutant_count_from_partition,
                        jordan_structure, smith_invariant_factors)

log = logging.getLogger(__name__)

DEFAULT_SAMPLES = 20
DEFAULT_TOL = 1e-9
SPAN_TOL = 1e-8
FD_STEP = 1e-5
FD_TOL = 1e-4


@dataclass(frozen=True)
class SamplePoint:
    t: float
    x: tuple
    v: tuple

    def jet(self) -> list:
        return list(self.x) + list(self.v)


def sample_points(n: int, count: int = DEFAULT_SAMPLES, seed: int = 0) -> list[SamplePoint]:
    """Seeded points with t, x, v uniform in [−1, 1]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        row = rng.uniform(-1.0, 1.0, size=2 * n + 1)
        out.append(SamplePoint(float(row[0]), tuple(row[1:n + 1].tolist()), tuple(row[n + 1:].tolist())))
    return out


@dataclass
class VerificationReport:
    max_residuals: list
    exact_zero: list
    tol: float
    seed: int
    samples: int
    closure: Optional[bool] = None
    cross_check: Optional[tuple] = None
    notes: list = field(default_factory=list)

    def failed_generators(self) -> list[int]:
        out = []
        for i, (r, z) in enumerate(zip(self.max_residuals, self.exact_zero)):
            if z is False or (z is None and not r <= self.tol):
                out.append(i)
        return out

    @property
    def cross_check_ok(self) -> bool:
        if self.cross_check is None:
            return True
        vals = [v for v in self.cross_check if v is not None]
        return len(set(vals)) == 1

    @property
    def passed(self) -> bool:
        return not self.failed_generators() and self.closure is not False and self.cross_check_ok


# residual polynomials -------------------------------------------------------

def _check_dims(Q, J: Matrix):
    if not J.is_square() or J.rows != Q.n:
        raise ValueError(f"field acts on {Q.n} variables but J is {J.rows}×{J.cols}")


def residual_poly(Q, J: Matrix) -> list[XPoly]:
    """Left-hand side of the invariance condition as polynomials in (x, v)."""
    _check_dims(Q, J)
    P = Q.to_poly()
    n = P.n
    m = 2 * n
    xi = P.xi.pad(m)
    eta = [e.pad(m) for e in P.eta]
    v = [XPoly.var(m, n + a) for a in range(n)]
    jx = []
    for b in range(n):
        acc = XPoly(m)
        for a in range(n):
            if J[b, a]:
                acc = acc + XPoly.var(m, a, J[b, a])
        jx.append(acc)

    def second_total(f: XPoly) -> XPoly:
        # f_tt + 2 f_{x^a t} v^a + f_{x^a x^c} v^a v^c + f_{x^a} (Jx)^a
        ft = f.d_t()
        out = ft.d_t()
        for a in range(n):
            fa = f.d_var(a)
            if not fa.terms:
                continue
            out = out + fa.d_t() * v[a] * 2 + fa * jx[a]
            for c in range(n):
                fac = fa.d_var(c)
                if fac.terms:
                    out = out + fac * v[a] * v[c]
        return out

    def first_total(f: XPoly) -> XPoly:
        out = f.d_t()
        for a in range(n):
            fa = f.d_var(a)
            if fa.terms:
                out = out + fa * v[a]
        return out

    xi2 = second_total(xi)
    xi1 = first_total(xi)
    out = []
    for b in range(n):
        r = second_total(eta[b]) - xi2 * v[b] - xi1 * jx[b] * 2
        for a in range(n):
            if J[b, a]:
                r = r - eta[a] * J[b, a]
        out.append(r)
    return out


def reduced_residual_poly(Q: VectorField, J: Matrix) -> list[XPoly]:
    """(φ̈ − Jφ) + (HJ − JH − 2c₁J)x, on the same (x, v) variables."""
    _check_dims(Q, J)
    n = Q.n
    m = 2 * n
    jphi = J.apply(Q.phi, ExpPoly())
    lin = Q.H @ J - J @ Q.H - J.scale(2 * Q.c1)
    out = []
    for b in range(n):
        r = XPoly.const(m, differentiate(differentiate(Q.phi[b])) - jphi[b])
        for a in range(n):
            if lin[b, a]:
                r = r + XPoly.var(m, a, lin[b, a])
        out.append(r)
    return out


def _evaluate(polys: Sequence[XPoly], pts: Sequence[SamplePoint]) -> list[np.ndarray]:
    return [np.array([p(pt.t, pt.jet()) for p in polys], dtype=complex) for pt in pts]


def residual(Q, J: Matrix, pts: Sequence[SamplePoint]) -> list[np.ndarray]:
    """Full invariance-condition residual vector at each sample point."""
    return _evaluate(residual_poly(Q, J), pts)


def residual_reduced(Q: VectorField, J: Matrix, pts: Sequence[SamplePoint]) -> list[np.ndarray]:
    return _evaluate(reduced_residual_poly(Q, J), pts)


def residual_is_zero(Q, J: Matrix) -> bool:
    """Exact test: the residual polynomial vanishes identically."""
    return all(r.is_zero() for r in residual_poly(Q, J))


def residual_fd(Q, J: Matrix, pt: SamplePoint, h: float = FD_STEP) -> np.ndarray:
    """Finite-difference residual, for debugging the closed-form paths."""
    _check_dims(Q, J)
    n = Q.n
    Jn = J.to_numpy()
    x = np.array(pt.x, dtype=complex)
    v = np.array(pt.v, dtype=complex)
    jx = Jn @ x

    def F(t, y):
        return Q.evaluate(t, y)

    t = pt.t
    f0 = F(t, x)
    f_tt = (F(t + h, x) - 2 * f0 + F(t - h, x)) / h ** 2
    f_vv = (F(t, x + h * v) - 2 * f0 + F(t, x - h * v)) / h ** 2
    f_tv = (F(t + h, x + h * v) - F(t + h, x - h * v) - F(t - h, x + h * v) + F(t - h, x - h * v)) / (4 * h * h)
    f_t = (F(t + h, x) - F(t - h, x)) / (2 * h)
    f_v = (F(t, x + h * v) - F(t, x - h * v)) / (2 * h)
    f_j = (F(t, x + h * jx) - F(t, x - h * jx)) / (2 * h)
    second = f_tt + 2 * f_tv + f_vv + f_j
    xi2, eta2 = second[0], second[1:]
    xi1 = f_t[0] + f_v[0]
    return eta2 - xi2 * v - 2 * xi1 * jx - Jn @ f0[1:]


# brackets and spans ---------------------------------------------------------

def lie_bracket(Q1, Q2):
    """[Q1, Q2] = Q1Q2 − Q2Q1 as derivations.

    Two restricted fields give a restricted field: ξ = c₀¹c₁² − c₀²c₁¹ and
    η = (H²H¹ − H¹H²)x + ξ¹φ̇² − ξ²φ̇¹ + H²φ¹ − H¹φ².
    """
    if isinstance(Q1, VectorField) and isinstance(Q2, VectorField):
        if Q1.n != Q2.n:
            raise ValueError("fields act on different numbers of variables")
        n = Q1.n
        zero = ExpPoly()
        xi1 = ExpPoly([(Q1.c1, 1, 0), (Q1.c0, 0, 0)])
        xi2 = ExpPoly([(Q2.c1, 1, 0), (Q2.c0, 0, 0)])
        h2p1 = Q2.H.apply(Q1.phi, zero)
        h1p2 = Q1.H.apply(Q2.phi, zero)
        phi = tuple(xi1 * differentiate(Q2.phi[b]) - xi2 * differentiate(Q1.phi[b]) + h2p1[b] - h1p2[b]
                    for b in range(n))
        c0 = Q1.c0 * Q2.c1 - Q2.c0 * Q1.c1
        return VectorField(ZERO, c0, Q2.H @ Q1.H - Q1.H @ Q2.H, phi)
    return Q1.to_poly().bracket(Q2.to_poly())


def _field_basis(keys: set[int]) -> list[int]:
    """Signed square-free keys of a ℚ-basis of the field generated by √keys."""
    gens = sorted({g for k in keys for g in _generators(k)})
    basis = [1]
    for g in gens:
        extra = []
        for b in basis:
            key, coef = _mul_keys(b, g)
            extra.append(key)
        basis += extra
    return basis


def _split(value) -> dict:
    """Rational coordinates of an exact scalar: signed key -> Fraction."""
    if isinstance(value, QuadExtScalar):
        return value.parts
    return {1: Fraction(value)} if value else {}


def _expand(coords: dict, mult_key: int) -> dict:
    """ℚ-coordinates of √mult_key · (field element vector)."""
    out: dict = {}
    for ck, val in coords.items():
        for k, q in _split(val).items():
            key, c = _mul_keys(k, mult_key)
            slot = (ck, key)
            out[slot] = out.get(slot, 0) + c * q
    return {s: q for s, q in out.items() if q}


class RowSpace:
    """Exact ℚ-row space kept in reduced echelon form over sparse keyed rows."""

    def __init__(self, rows: Sequence[dict]):
        cols = sorted({k for r in rows for k in r}, key=repr)
        self.index = {c: i for i, c in enumerate(cols)}
        dense = [[r.get(c, 0) for c in cols] for r in rows]
        if dense and cols:
            reduced, pivots = rref(Matrix.from_rows(dense))
        else:
            reduced, pivots = [], []
        self.rank = len(pivots)
        self.rows = []
        for row, p in zip(reduced, pivots):
            self.rows.append((cols[p], {cols[j]: q for j, q in enumerate(row) if q}))

    def contains(self, vec: dict) -> bool:
        vec = {k: v for k, v in vec.items() if v}
        if any(k not in self.index for k in vec):
            return False
        for pkey, row in self.rows:
            c = vec.get(pkey)
            if c:
                for k, q in row.items():
                    w = vec.get(k, 0) - c * q
                    if w:
                        vec[k] = w
                    else:
                        vec.pop(k, None)
        return not vec


def _surd_keys(coords: dict) -> set:
    return {k for val in coords.values() if isinstance(val, QuadExtScalar) for k in val.parts}


def _exact_span(fields: Sequence, extra: Sequence[dict] = ()) -> tuple[RowSpace, list[int]]:
    """Row space of ``fields`` over ℚ(√keys), keys collected from fields and ``extra``.

    Membership over that field matches membership over ℂ, since the rank
    of a system with entries in a subfield does not change on extension.
    """
    coords = [f.coordinates() for f in fields]
    keys = set().union(*(_surd_keys(c) for c in list(coords) + list(extra)))
    basis = _field_basis(keys)
    rows = [_expand(c, b) for c in coords for b in basis]
    return RowSpace(rows), basis


def _sample_matrix(fields: Sequence, pts: Sequence[SamplePoint]) -> np.ndarray:
    cols = [np.concatenate([f.evaluate(p.t, p.x) for p in pts]) for f in fields]
    return np.array(cols, dtype=complex).T


def in_span(target, fields: Sequence, tol: float = SPAN_TOL, seed: int = 0) -> bool:
    """Whether ``target`` lies in the span of ``fields`` over their scalar field."""
    if all(f.is_exact() for f in fields) and target.is_exact():
        tc = target.coordinates()
        space, _ = _exact_span(fields, [tc])
        return space.contains(_expand(tc, 1))
    return _numeric_in_span([target], fields, tol, seed)[0]


def _numeric_in_span(targets: Sequence, fields: Sequence, tol: float, seed: int) -> list[bool]:
    n = fields[0].n
    count = max(DEFAULT_SAMPLES, 2 * len(fields))
    pts = sample_points(n, count, seed)
    G = _sample_matrix(fields, pts)
    out = []
    for t in targets:
        b = np.concatenate([t.evaluate(p.t, p.x) for p in pts])
        coef, *_ = np.linalg.lstsq(G, b, rcond=None)
        res = np.linalg.norm(G @ coef - b)
        out.append(res <= tol * max(1.0, np.linalg.norm(b)))
    return out


def closure_check(alg, tol: float = SPAN_TOL, seed: int = 0) -> bool:
    """Every pairwise bracket of generators lies in their span."""
    gens = alg.generators
    brackets = [lie_bracket(gens[i], gens[j]) for i in range(len(gens)) for j in range(i + 1, len(gens))]
    if alg.is_exact():
        coords = [br.coordinates() for br in brackets]
        space, _ = _exact_span(gens, coords)
        return all(space.contains(_expand(c, 1)) for c in coords)
    return all(_numeric_in_span(brackets, gens, tol, seed))


def generators_independent(fields: Sequence, tol: float = SPAN_TOL, seed: int = 0) -> bool:
    if all(f.is_exact() for f in fields):
        space, basis = _exact_span(fields)
        return space.rank == len(fields) * len(basis)
    pts = sample_points(fields[0].n, max(DEFAULT_SAMPLES, 2 * len(fields)), seed)
    s = np.linalg.svd(_sample_matrix(fields, pts), compute_uv=False)
    return bool(s[-1] > tol * s[0])


def cross_check_N(D: Matrix) -> tuple[int, int, Optional[int]]:
    """(kernel dimension, count from invariant-factor degrees, count from elementary divisors)."""
    n_kernel = commutant_basis(D).N
    inv = smith_invariant_factors(D)
    n_degrees = commutant_count_from_partition(inv.degrees)
    _, leftover = factor_rational_roots(inv.characteristic_polynomial())
    n_divisors = None
    if leftover.degree <= 0:
        n_divisors = commutant_count_from_divisors(jordan_structure(D).elementary_divisors())
    return n_kernel, n_degrees, n_divisors


def verify_algebra(alg, J: Matrix | None = None, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                   tol: float = DEFAULT_TOL, closure: bool = True, D: Matrix | None = None) -> VerificationReport:
    J = alg.J if J is None else J
    pts = sample_points(J.rows, samples, seed)
    exact_J = J.is_exact()
    max_res, zero = [], []
    for i, g in enumerate(alg.generators):
        polys = residual_poly(g, J)
        if exact_J and g.is_exact():
            ok = all(p.is_zero() for p in polys)
            zero.append(ok)
            max_res.append(0.0 if ok else float(max(np.abs(r).max() for r in _evaluate(polys, pts))))
        else:
            zero.append(None)
            max_res.append(float(max(np.abs(r).max() for r in _evaluate(polys, pts))))
        log.debug("generator %d residual %.3g", i, max_res[-1])
    report = VerificationReport(max_res, zero, tol, seed, samples)
    if closure:
        report.closure = closure_check(alg, seed=seed)
    if D is not None:
        report.cross_check = cross_check_N(D)
    return report
