import random

import pytest
from hypothesis import given, settings, strategies as st

from hnpoly.charp import (CharPError, DiffOperator, charp_strict_threshold, charp_threshold,
                          frobenius_commutation_check, general_lambda_vc, isotropic_ring, vc_charp,
                          vc_charp_hn_series)
from hnpoly.corpus import random_poly
from hnpoly.notation import parse_poly
from hnpoly.poly import Poly, laplacian
from hnpoly.scalars import GF, GFI, QQ
from hnpoly.series import truncate


def test_square_mod_3():
    F = GF(3)
    P = parse_poly("z1^2", 1, F)
    assert laplacian(P ** 3, times=2) == Poly(1, F)
    # over QQ the same derivative is 360 z1^2, and 360 = 3 * 120
    assert laplacian(parse_poly("z1^6", 1), times=2) == parse_poly("360*z1^2", 1)
    rep = vc_charp(P)
    assert rep.threshold == 2 and rep.ok


def test_thresholds():
    assert charp_threshold(3, 2) == 2 and charp_threshold(2, 3) == 2
    assert charp_strict_threshold(2, 3) == 3 and charp_strict_threshold(1, 3) == 2


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_characteristic_two(seed, n):
    P = random_poly(n, 4, seed, GF(2), min_degree=0)
    if not P or P.degree < 1:
        return
    d = int(P.degree)
    rep = vc_charp(P)
    assert rep.ok and all(rep.vanished[m] for m in range(-(-d // 2), rep.scanned + 1))


@pytest.mark.parametrize("p", [2, 5, 7, 11])
def test_linear_forms_vanish_from_the_threshold(p):
    P = parse_poly("z1 + 2*z2", 2, GF(p))
    rep = vc_charp(P)
    assert rep.ok and rep.threshold == -(-(p - 1) // 2)


def test_boundary_fails_for_linear_forms_mod_3():
    # 2m = d(p-1) at m = 1: Delta z1^2 = 2 is a unit mod 3
    F = GF(3)
    P = parse_poly("z1", 1, F)
    assert laplacian(P * P) == Poly.constant(1, F, 2)
    rep = vc_charp(P)
    assert not rep.ok and rep.vanished[1] is False
    assert rep.strict_ok and rep.strict_threshold == 2


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 5]), st.integers(1, 3))
def test_strict_threshold_always_vanishes(seed, p, n):
    P = random_poly(n, 4, seed, GF(p), min_degree=0)
    if not P or P.degree < 1:
        return
    assert vc_charp(P).strict_ok


def test_errors():
    with pytest.raises(CharPError):
        vc_charp(Poly(1, GF(3)))
    with pytest.raises(CharPError):
        vc_charp(parse_poly("z1^2", 1))
    with pytest.raises(CharPError):
        vc_charp(Poly.constant(1, GF(3), 1))


def test_series_over_f5():
    R = isotropic_ring(5)
    assert R is GF(5) and R.i == R(2)
    P = parse_poly("(z1+2*z2)^3", 2, R)
    rep = vc_charp_hn_series(truncate(P, 12))
    assert rep.ok and rep.threshold == 4 and rep.up_to_degree == 12


def test_series_zero_and_p2():
    assert vc_charp_hn_series(truncate(Poly(2, GF(5)), 8)).ok
    P = parse_poly("(z1+z2)^2", 2, GF(2))
    rep = vc_charp_hn_series(truncate(P, 8))
    assert rep.threshold == 1 and rep.ok


def test_series_not_hn_rejected():
    with pytest.raises(CharPError):
        vc_charp_hn_series(truncate(parse_poly("z1*z2", 2, GF(5)), 8))


def test_isotropic_ring_for_p_3_mod_4():
    R = isotropic_ring(7)
    assert R == GFI(7)
    P = parse_poly("(z1+i*z2)^3", 2, R)
    assert vc_charp_hn_series(truncate(P, 10)).ok


def test_frobenius_examples():
    F2, F3 = GF(2), GF(3)
    lap = DiffOperator.laplace(2, F2)
    assert frobenius_commutation_check(parse_poly("z1", 2, F2), parse_poly("z2", 2, F2), lap)
    d1 = DiffOperator.partial(1, F3, 0)
    z = parse_poly("z1", 1, F3)
    assert frobenius_commutation_check(z, z, d1)
    assert d1(z ** 4) == z ** 3
    assert frobenius_commutation_check(z, Poly.constant(1, F3, 2), d1)


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 5]), st.integers(1, 2))
def test_frobenius_random(seed, p, m):
    R = GF(p)
    u = random_poly(2, 2, seed, R)
    v = random_poly(2, 3, seed + 1, R)
    assert frobenius_commutation_check(u, v, DiffOperator.laplace(2, R), m)


def test_lambda_examples():
    F2 = GF(2)
    d1 = DiffOperator.partial(1, F2, 0)
    rep = general_lambda_vc(d1, parse_poly("z1", 1, F2))
    assert rep.ok and rep.first_vanishing == 1
    P = parse_poly("z1^2 + z1*z2", 2, GF(5))
    lap = general_lambda_vc(DiffOperator.laplace(2, GF(5)), P)
    direct = vc_charp(P)
    assert lap.vanished[:len(direct.vanished)] == direct.vanished[:len(lap.vanished)]
    const = general_lambda_vc(d1, Poly.constant(1, F2, 1))
    assert const.ok and const.first_vanishing == 1
    with pytest.raises(CharPError):
        general_lambda_vc(DiffOperator(Poly.constant(1, F2, 1)), parse_poly("z1", 1, F2))
