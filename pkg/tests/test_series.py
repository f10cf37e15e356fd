import pytest
from hypothesis import given, settings, strategies as st

from hnpoly.corpus import random_poly
from hnpoly.notation import parse_poly
from hnpoly.poly import Poly, gradient, sigma2
from hnpoly.scalars import QQ, QQI
from hnpoly.series import (FormalMap, NonInvertibleLinearPart, SeriesError, TruncSeries, compose,
                           extract_Q, identity_map, invert_map, symmetric_map, truncate)

H3 = parse_poly("(z1+i*z2)^3")


def _t(nz, ring):
    e = [0] * (nz + 1)
    e[nz] = 1
    return Poly(nz + 1, ring, {tuple(e): 1})


def test_symmetric_map_quadratic():
    F = symmetric_map(sigma2(2, QQ) / QQ(2), 4)
    t = _t(2, QQ)
    for j, c in enumerate(F):
        z = Poly.var(3, QQ, j)
        assert c.body == z - t * z


def test_symmetric_map_isotropic_cube():
    F = symmetric_map(H3, 5)
    t = _t(2, QQI)
    g = gradient(H3)
    for j, c in enumerate(F):
        assert c.body == Poly.var(3, QQI, j) - t * g[j].extend(3)
    assert g[1] == g[0].scale(QQI.i)


def test_symmetric_map_zero_is_identity():
    F = symmetric_map(Poly(2, QQ), 4)
    assert F.is_identity()


def test_symmetric_map_order_checked():
    with pytest.raises(SeriesError):
        symmetric_map(parse_poly("z1"), 4)


def test_compose_identity_right():
    F = symmetric_map(H3, 5)
    assert compose(F, identity_map(2, QQI, 5, True)) == F


def test_geometric_inverse_of_scaling():
    # (1-t)z composed with z(1 + t + ... + t^K) is z up to t^(K+1)
    K = 6
    F = symmetric_map(sigma2(2, QQ) / QQ(2), 3)
    geo = Poly(3, QQ)
    for k in range(K + 1):
        geo = geo + Poly(3, QQ, {(0, 0, k): 1})
    G = FormalMap(tuple(TruncSeries(Poly.var(3, QQ, j) * geo, 2, 3) for j in range(2)))
    FG = compose(F, G)
    for j, c in enumerate(FG):
        rest = c.body - Poly.var(3, QQ, j)
        assert all(e[2] == K + 1 for e in rest.terms)


def test_inverse_of_quadratic_is_geometric():
    F = symmetric_map(sigma2(2, QQ) / QQ(2), 3, t_order=5)
    G = invert_map(F)
    Q = extract_Q(G, 5)
    assert all(q == sigma2(2, QQ) / QQ(2) for q in Q)


def test_identity_inverse():
    I = identity_map(3, QQ, 5)
    assert invert_map(I) == I


def test_quasi_translation():
    F = symmetric_map(H3, 7)
    G = invert_map(F)
    t = _t(2, QQI)
    g = gradient(H3)
    for j, c in enumerate(G):
        assert c.body == Poly.var(3, QQI, j) + t * g[j].extend(3)
    assert extract_Q(G) == [H3]


def test_non_invertible_linear_part():
    # at t = 1, F = z - grad(sigma2/2) = 0 has no linear part to invert
    F = symmetric_map(sigma2(2, QQ) / QQ(2), 3, deformed=False)
    with pytest.raises(NonInvertibleLinearPart):
        invert_map(F)


def test_extract_Q_identity():
    assert extract_Q(identity_map(2, QQ, 5, True), 3) == [Poly(2, QQ)] * 3


def test_compose_rejects_constant_term():
    F = symmetric_map(H3, 4)
    shifted = FormalMap(tuple(TruncSeries(c.body + 1, c.nz, c.N) for c in identity_map(2, QQI, 4, True)))
    with pytest.raises(SeriesError):
        compose(F, shifted)


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_inverse_round_trip(seed, n):
    P = random_poly(n, 3, seed, QQ, min_degree=3)
    if not P:
        return
    F = symmetric_map(P, 5)
    G = invert_map(F)
    assert compose(F, G).is_identity()
    assert compose(G, F).is_identity()
    assert invert_map(G) == F


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.sampled_from([3, 4]))
def test_homogeneous_Q_degrees(seed, d):
    P = random_poly(2, d, seed, QQ, min_degree=d)
    if not P or not P.is_homogeneous:
        return
    N = 2 + 3 * (d - 2) + 1
    Q = extract_Q(invert_map(symmetric_map(P, N)), 3)
    for m, q in enumerate(Q, 1):
        assert not q or (q.is_homogeneous and q.degree == m * (d - 2) + 2)


def test_truncate():
    s = truncate(parse_poly("z1 + z1^3 + z1^5"), 3)
    assert s.body == parse_poly("z1 + z1^3") and s.order == 1


def test_t_truncated_inverse_with_quadratic_part():
    P = parse_poly("z1^2 + z1*z2^2")
    F = symmetric_map(P, 5, t_order=4)
    G = invert_map(F)
    assert compose(F, G).is_identity() and compose(G, F).is_identity()
