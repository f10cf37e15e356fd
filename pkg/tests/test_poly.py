import math

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from hnpoly.notation import parse_poly
from hnpoly.poly import (Poly, PolyMatrix, diff, directional_power, euler, evaluate, evaluate_matrix,
                         gradient, hessian, laplacian, matrix_is_nilpotent, sigma2, trace_power)
from hnpoly.scalars import GF, QQ, QQI

from oracles import (oracle_expand_diff, oracle_hessian, oracle_laplacian, oracle_matrix_power,
                     oracle_trace_nilpotent, to_sympy)
from strategies import homogeneous_polys, poly_pairs, polys

i = QQI.i
H2 = parse_poly("(z1+i*z2)^2")
H3 = parse_poly("(z1+i*z2)^3")


def test_diff_examples():
    assert diff(parse_poly("z1^2*z2"), 0) == parse_poly("2*z1*z2")
    assert not diff(parse_poly("z1^3", 2), 1)


def test_diff_isotropic_cube_matches_oracle():
    got = diff(H3, 0)
    assert got == oracle_expand_diff(H3, 0)
    assert got == parse_poly("3*(z1+i*z2)^2")


def test_diff_index_checked():
    with pytest.raises(IndexError):
        diff(parse_poly("z1"), 3)


def test_gradient_examples():
    half = sigma2(3, QQ) / QQ(2)
    assert gradient(half) == [Poly.var(3, QQ, j) for j in range(3)]
    assert all(not g for g in gradient(Poly.constant(2, QQ, 5)))
    g = gradient(H2)
    assert g == [oracle_expand_diff(H2, 0), oracle_expand_diff(H2, 1)]
    assert g == [parse_poly("2*(z1+i*z2)"), parse_poly("2i*(z1+i*z2)")]


def test_laplacian_examples():
    assert laplacian(sigma2(4, QQ)) == 8
    assert not laplacian(parse_poly("z1*z2"))
    P = parse_poly("z1^2*z2^2")
    assert laplacian(P) == oracle_laplacian(P) == parse_poly("2*z2^2+2*z1^2")


def test_hessian_examples():
    assert hessian(parse_poly("z1*z2")).rows == [[0, 1], [1, 0]]
    H = hessian(H2)
    ref = oracle_hessian(H2)
    assert [[to_sympy(x) for x in row] for row in H.rows] == ref.tolist()
    assert H.rows == [[2, 2 * i], [2 * i, -2]]
    ident = hessian(sigma2(3, QQ) / QQ(2))
    assert all(ident[a, b] == (1 if a == b else 0) for a in range(3) for b in range(3))


def test_directional_power_examples():
    assert directional_power(parse_poly("z1^2", 2), (1, 0), 1) == parse_poly("2*z1", 2)
    P = H3
    assert directional_power(P, (QQI.one, QQI.zero), 1) == parse_poly("3*(z1+i*z2)^2")


@given(homogeneous_polys(ring=QQ), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_full_directional_power_is_value_times_factorial(Pd, beta):
    P, d = Pd
    beta = beta[:P.n]
    got = directional_power(P, beta, d)
    assert got == Poly.constant(P.n, QQ, math.factorial(d) * evaluate(P, beta))


def test_nilpotent_examples():
    assert matrix_is_nilpotent(hessian(H2))
    assert oracle_matrix_power(oracle_hessian(H2))
    swap = hessian(parse_poly("z1*z2"))
    assert not matrix_is_nilpotent(swap)
    zero = PolyMatrix([[Poly(2, QQ)] * 2] * 2, 2, QQ)
    assert matrix_is_nilpotent(zero)
    with pytest.raises(ValueError):
        matrix_is_nilpotent(PolyMatrix([[Poly(2, QQ)] * 2], 2, QQ))


def test_trace_power_examples():
    assert trace_power(hessian(parse_poly("z1*z2")), 2) == 2
    for m in (1, 2, 3):
        assert not trace_power(hessian(H2), m)
    ident = hessian(sigma2(2, QQ) / QQ(2))
    assert trace_power(ident, 3) == 2


def test_evaluate_examples():
    assert evaluate(sigma2(2, QQI), (QQI.one, i)) == 0
    assert evaluate(H3, (1, 0)) == 1
    got = evaluate_matrix(hessian(H3), (QQI.one, QQI.zero))
    assert got == [[6, 6 * i], [6 * i, -6]]


def test_zero_polynomial_degree_sentinel():
    Z = Poly(2, QQ)
    assert Z.degree == -math.inf and Z.order == math.inf


@given(polys(max_degree=4))
def test_mixed_partials_commute(P):
    for a in range(P.n):
        for b in range(P.n):
            assert diff(diff(P, a), b) == diff(diff(P, b), a)


@given(polys(max_degree=4))
def test_hessian_symmetric_and_trace_is_laplacian(P):
    H = hessian(P)
    assert H.is_symmetric()
    assert H.trace() == laplacian(P)


@given(poly_pairs())
def test_leibniz(pair):
    P, Q = pair
    for a in range(P.n):
        assert diff(P * Q, a) == diff(P, a) * Q + P * diff(Q, a)


@given(homogeneous_polys(ring=QQI))
def test_euler_identity(Pd):
    P, d = Pd
    assert euler(P) == P.scale(d)


@given(polys(ring=QQ, max_degree=3, n=2))
def test_laplacian_matches_oracle(P):
    assert laplacian(P) == oracle_laplacian(P)


@given(poly_pairs(max_degree=3))
def test_product_matches_sympy(pair):
    P, Q = pair
    if P.ring.characteristic:
        return
    from oracles import from_sympy
    assert P * Q == from_sympy(to_sympy(P) * to_sympy(Q), P.n, P.ring)


@given(poly_pairs(max_degree=4), st.integers(0, 6))
def test_truncated_product(pair, N):
    P, Q = pair
    assert P.mul(Q, N) == (P * Q).truncate(N)


@st.composite
def small_matrices(draw):
    ring = draw(st.sampled_from([QQ, QQI]))
    size = draw(st.integers(1, 3))
    # strictly upper triangular in a random basis is nilpotent; mix in random ones too
    ents = [[draw(polys(n=2, ring=ring, max_degree=2, max_terms=2)) for _ in range(size)] for _ in range(size)]
    if draw(st.booleans()):
        for a in range(size):
            for b in range(a + 1):
                ents[a][b] = Poly(2, ring)
    return PolyMatrix(ents, 2, ring)


@given(small_matrices())
def test_nilpotent_iff_traces_vanish(M):
    size = M.shape[0]
    by_power = matrix_is_nilpotent(M)
    by_trace = all(not trace_power(M, m) for m in range(1, size + 1))
    assert by_power == by_trace
    sym = sp.Matrix([[to_sympy(x) for x in row] for row in M.rows])
    assert by_power == oracle_matrix_power(sym) == oracle_trace_nilpotent(sym)


def test_prime_field_arithmetic():
    F = GF(3)
    P = parse_poly("z1+1", 1, F)
    assert P ** 3 == parse_poly("z1^3+1", 1, F)
