import random
from fractions import Fraction as F

import numpy as np
import pytest
import sympy

from helpers import (rotation_structure, linear_field, make_structure, poly_field, random_invertible,
                     conjugate, time_translation, unit_H)
from linsym.algebra import SymmetryAlgebra, build_algebra, build_free_algebra
from linsym.exppoly import ExpPoly, differentiate
from linsym.fields import ProjectiveVectorField, VectorField
from linsym.matrix import Matrix, jordan_block
from linsym.scalars import ONE, ZERO
from linsym.structure import rotation_block
from linsym.verify import (FD_TOL, closure_check, cross_check_N, generators_independent, in_span,
                           lie_bracket, residual, residual_fd, residual_is_zero, residual_reduced,
                           sample_points, verify_algebra)

ROT_J = Matrix.direct_sum([rotation_block(F(1), F(1)), jordan_block(F(0), 2), jordan_block(F(0), 1)])


def _max(res):
    return max(float(np.abs(r).max()) for r in res)


# independent oracle: the invariance condition written out with sympy ---------------

def sympy_residual(xi, eta, J, n):
    t = sympy.Symbol("t")
    x = sympy.symbols(f"x0:{n}")
    v = sympy.symbols(f"v0:{n}")
    Jm = sympy.Matrix(J)
    jx = Jm * sympy.Matrix(x)

    def total2(f):
        out = sympy.diff(f, t, 2)
        for a in range(n):
            out += 2 * sympy.diff(f, x[a], t) * v[a] + sympy.diff(f, x[a]) * jx[a]
            for c in range(n):
                out += sympy.diff(f, x[a], x[c]) * v[a] * v[c]
        return out

    def total1(f):
        return sympy.diff(f, t) + sum(sympy.diff(f, x[a]) * v[a] for a in range(n))

    X, E = xi(t, x), [e(t, x) for e in eta]
    res = [sympy.expand(total2(E[b]) - total2(X) * v[b] - 2 * total1(X) * jx[b]
                        - sum(Jm[b, a] * E[a] for a in range(n))) for b in range(n)]
    return res, (t, x, v)


def test_residual_matches_sympy_oracle():
    n = 2
    J = [[0, 1], [0, 0]]
    Jm = Matrix.from_rows(J)
    cases = [
        # t³∂₁ + 6t∂₂ : a symmetry
        (lambda t, x: 0, [lambda t, x: t ** 3, lambda t, x: 6 * t],
         poly_field(2, {0: [(ONE, 3, ZERO)], 1: [(F(6), 1, ZERO)]})),
        # x²∂₁ + t∂₂: not a symmetry
        (lambda t, x: 0, [lambda t, x: x[1], lambda t, x: t],
         VectorField(ZERO, ZERO, unit_H(2, {(0, 1): 1}), (ExpPoly(), ExpPoly.t()))),
        # t∂t − 2x¹∂₁ − 4x²∂₂ (the dilation with the wrong weight on x²: ramp order matters)
        (lambda t, x: t, [lambda t, x: -2 * x[0], lambda t, x: -4 * x[1]],
         VectorField(ONE, ZERO, Matrix.diag([F(-2), F(-4)]), (ExpPoly(), ExpPoly()))),
        # tx¹∂t + x¹x^c∂_c, projective, acting on a non-free system
        (lambda t, x: t * x[0], [lambda t, x: x[0] * x[0], lambda t, x: x[0] * x[1]],
         ProjectiveVectorField.from_monomials(2, xi=[(ONE, 1, [1, 0])],
                                               eta=[[(ONE, 0, [2, 0])], [(ONE, 0, [1, 1])]])),
    ]
    pts = sample_points(n, 10, 3)
    for xi, eta, field in cases:
        ref, (t, x, v) = sympy_residual(xi, eta, J, n)
        ours = residual(field, Jm, pts)
        for p, r in zip(pts, ours):
            subs = {t: p.t, **dict(zip(x, p.x)), **dict(zip(v, p.v))}
            expect = np.array([complex(e.subs(subs)) for e in ref])
            assert np.allclose(r, expect, atol=1e-12)
        assert residual_is_zero(field, Jm) == all(e == 0 for e in ref)


def test_residual_examples():
    pts = sample_points(5, 20, 0)
    good = linear_field(5, {(2, 4): 1})   # x⁴∂_{x³} in 0-based slots
    bad = linear_field(5, {(3, 2): 1})    # x³∂_{x⁴}
    assert residual_is_zero(good, ROT_J)
    assert _max(residual(good, ROT_J, pts)) == 0
    assert _max(residual(bad, ROT_J, pts)) > 0.1
    assert residual_is_zero(time_translation(5), ROT_J)
    proj = ProjectiveVectorField.from_monomials(3, xi=[(ONE, 2, [0, 0, 0])],
                                                eta=[[(ONE, 1, [1 if i == c else 0 for i in range(3)])] for c in range(3)])
    assert residual_is_zero(proj, Matrix.zeros(3))
    with pytest.raises(ValueError):
        residual(time_translation(3), ROT_J, pts)


def test_reduced_and_full_paths_agree():
    pts = sample_points(5, 20, 4)
    rng = random.Random(8)
    alg = build_algebra(rotation_structure(), "real")
    fields = list(alg.generators) + [linear_field(5, {(3, 2): 1})]
    for _ in range(10):
        H = Matrix(5, 5, [F(rng.randint(-2, 2)) for _ in range(25)])
        phi = [ExpPoly([(F(rng.randint(-3, 3)), rng.randint(0, 2), F(rng.choice([0, 1, -1])))]) for _ in range(5)]
        fields.append(VectorField(F(rng.randint(-1, 1)), F(rng.randint(-1, 1)), H, tuple(phi)))
    for g in fields:
        full = residual(g, ROT_J, pts)
        red = residual_reduced(g, ROT_J, pts)
        assert max(float(np.abs(a - b).max()) for a, b in zip(full, red)) < 1e-12


def test_finite_difference_third_opinion():
    pts = sample_points(5, 5, 2)
    for g in [linear_field(5, {(3, 2): 1}), build_algebra(rotation_structure(), "real").generators[0],
              VectorField(ONE, ZERO, Matrix.diag([F(1)] * 5), tuple(ExpPoly.t() for _ in range(5)))]:
        for p, r in zip(pts, residual(g, ROT_J, pts)):
            assert np.abs(residual_fd(g, ROT_J, p) - r).max() < FD_TOL


# brackets -------------------------------------------------------------------

def sympy_bracket(f1, f2, n):
    t = sympy.Symbol("t")
    x = sympy.symbols(f"x0:{n}")
    c1 = [f1[0](t, x)] + [e(t, x) for e in f1[1]]
    c2 = [f2[0](t, x)] + [e(t, x) for e in f2[1]]
    vars_ = (t,) + tuple(x)

    def act(c, f):
        return sum(ci * sympy.diff(f, vi) for ci, vi in zip(c, vars_))

    return [sympy.expand(act(c1, b) - act(c2, a)) for a, b in zip(c1, c2)], t, x


def test_bracket_matches_sympy():
    H1 = unit_H(2, {(0, 1): 1})
    H2 = unit_H(2, {(0, 0): 1, (1, 1): 2})
    mu = F(1)
    Q1 = VectorField(ONE, F(2), H1, (ExpPoly.monomial(ONE, 1, mu), ExpPoly.const(F(3))))
    Q2 = VectorField(F(-1), ONE, H2, (ExpPoly.t(), ExpPoly.exp(-mu)))
    s1 = (lambda t, x: t + 2, [lambda t, x: x[1] + t * sympy.exp(t), lambda t, x: 3])
    s2 = (lambda t, x: -t + 1, [lambda t, x: x[0] + t, lambda t, x: 2 * x[1] + sympy.exp(-t)])
    ref, t, x = sympy_bracket(s1, s2, 2)
    br = lie_bracket(Q1, Q2)
    generic = Q1.to_poly().bracket(Q2.to_poly())
    for tv in (0.3, -0.8):
        for xv in ((0.1, 0.5), (-0.4, 0.9)):
            subs = {t: tv, x[0]: xv[0], x[1]: xv[1]}
            expect = np.array([complex(e.subs(subs)) for e in ref])
            assert np.allclose(br.evaluate(tv, xv), expect, atol=1e-12)
            assert np.allclose(generic.evaluate(tv, xv), expect, atol=1e-12)


def test_bracket_examples():
    alg = build_algebra(make_structure([(0, 2), (0, 1)]))
    T = alg.generators[-2]
    Dil = alg.generators[-1]
    br = lie_bracket(Dil, T)
    assert br.c0 == -1 and br.c1 == 0 and br.H.is_zero() and not any(br.phi)
    X = alg.generators[0]
    br = lie_bracket(T, X)
    assert br.phi == tuple(differentiate(f) for f in X.phi)
    Ha, Hb = unit_H(3, {(0, 1): 1}), unit_H(3, {(1, 2): 1})
    br = lie_bracket(VectorField.linear(Ha), VectorField.linear(Hb))
    assert br.H == Hb @ Ha - Ha @ Hb


# spans and closure ------------------------------------------------------------

def test_closure_examples():
    assert closure_check(build_algebra(make_structure([(2, 2), (3, 2)])))
    assert closure_check(build_free_algebra(2))
    alg = build_algebra(rotation_structure(), "real")
    assert closure_check(alg)
    gens = list(alg.generators)
    gens[11] = linear_field(5, {(3, 2): 1})
    injected = SymmetryAlgebra(gens, alg.dimension, alg.classification, alg.N, alg.field, alg.J)
    assert not closure_check(injected)


def test_exact_closure_detects_injection():
    alg = build_algebra(make_structure([(0, 2), (0, 1)]))
    gens = list(alg.generators)
    gens[7] = linear_field(3, {(1, 0): 1})
    assert not closure_check(SymmetryAlgebra(gens, alg.dimension, alg.classification, alg.N, alg.field, alg.J))


def test_bracket_span_does_not_grow():
    alg = build_algebra(make_structure([(2, 2), (2, 1)]))
    gens = alg.generators
    brackets = [lie_bracket(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]]
    assert all(in_span(b, gens) for b in brackets)
    assert generators_independent(gens)


def test_in_span_irrational_coordinates():
    # e^{√2 t}∂₁ is not a rational combination of e^{t}∂₁ fields
    from linsym.scalars import sqrt_exact
    r2 = sqrt_exact(F(2))
    a = poly_field(2, {0: [(ONE, 0, r2)]})
    b = poly_field(2, {0: [(r2, 0, r2)]})
    assert in_span(b, [a])
    assert not in_span(poly_field(2, {0: [(ONE, 0, ONE)]}), [a])


def test_cross_check_examples():
    D = Matrix.direct_sum([jordan_block(F(2), 2), jordan_block(F(3), 2)])
    assert cross_check_N(D) == (4, 4, 4)
    assert cross_check_N(Matrix.from_rows([[0, 2], [1, 0]])) == (2, 2, None)
    assert cross_check_N(Matrix.identity(3)) == (9, 9, 9)


def test_verify_algebra_reports():
    alg = build_algebra(rotation_structure(), "real")
    rep = verify_algebra(alg, D=ROT_J)
    assert rep.passed and rep.closure and rep.cross_check == (7, 7, None)
    assert all(r < 1e-9 for r in rep.max_residuals)
    gens = list(alg.generators)
    gens[11] = linear_field(5, {(3, 2): 1})
    bad = SymmetryAlgebra(gens, alg.dimension, alg.classification, alg.N, alg.field, alg.J)
    rep = verify_algebra(bad)
    assert rep.failed_generators() == [11] and not rep.passed


def test_reports_are_deterministic():
    alg = build_algebra(rotation_structure(), "real").to_numeric()
    a = verify_algebra(alg, seed=5, closure=False)
    b = verify_algebra(alg, seed=5, closure=False)
    assert a.max_residuals == b.max_residuals
