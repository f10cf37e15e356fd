import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hnpoly.inversion import qpair_recursive
from hnpoly.notation import parse_poly
from hnpoly.poly import sigma2
from hnpoly.radius import (NumericPoly, convergence_probe, factorial_sum_check, factorial_sum_pair,
                           qm_bound_check, radius_general, radius_general_formula, radius_hn,
                           radius_hn_formula, sup_norm)
from hnpoly.scalars import QQ


def test_sup_norm_isotropic_quartic():
    sn = sup_norm(parse_poly("(z1+i*z2)^4"))
    assert abs(sn.value - 4) / 4 < 0.01
    assert abs(np.linalg.norm(sn.witness) - 1) < 1e-12
    assert abs(abs(NumericPoly(parse_poly("(z1+i*z2)^4"))(sn.witness[None, :])[0]) - sn.value) < 1e-12


def test_sup_norm_sigma2():
    assert abs(sup_norm(sigma2(3, QQ)).value - 1) < 0.01


def test_sup_norm_constant_rejected():
    with pytest.raises(ValueError):
        sup_norm(parse_poly("3", 1))


def test_radius_examples():
    P = parse_poly("(z1+i*z2)^4")
    assert radius_hn(P, 4.0) == pytest.approx(128 ** -0.5)
    assert radius_general_formula(2, 3, 1.0) == pytest.approx(1 / 8)
    with pytest.raises(ValueError):
        radius_hn(parse_poly("z1*z2"))
    with pytest.raises(ValueError):
        radius_general(parse_poly("z1^2"))


@given(st.floats(0.1, 10), st.floats(1.01, 3), st.integers(3, 7), st.integers(1, 6))
def test_radius_formulas_decrease_in_norm(norm, factor, d, n):
    assert radius_general_formula(n, d, norm * factor) < radius_general_formula(n, d, norm)
    assert radius_hn_formula(d + 1, norm * factor) < radius_hn_formula(d + 1, norm)


def test_radius_formulas_not_monotone_in_degree():
    # at |P| = 1 both radii grow with d
    assert radius_general_formula(2, 3, 1.0) == pytest.approx(1 / 8)
    assert radius_general_formula(2, 4, 1.0) == pytest.approx(1 / 4)
    assert radius_hn_formula(4, 1.0) < radius_hn_formula(5, 1.0)
    # they shrink with d only when n 2^(d-1) |P| is small
    assert radius_general_formula(2, 4, 1e-3) < radius_general_formula(2, 3, 1e-3)


def test_bound_on_quadratic():
    # |Q_[m](a)| <= r^2/2 while the bound is 2^(m+1) r^2, so the ratio is at most 2^(-m-1)
    rep = qm_bound_check(sigma2(2, QQ) / QQ(2), 0.1, 5, samples=300)
    assert rep.ok
    for m, ratio in enumerate(rep.worst_ratio, 1):
        assert ratio <= 2.0 ** (-m - 1) + 1e-9


def test_bound_first_term_is_max_principle():
    P = parse_poly("z1^3 + z1*z2^2")
    rep = qm_bound_check(P, 1.0, 1, samples=500)
    assert rep.ok and rep.worst_ratio[0] <= 1


def test_bound_fails_for_cube_at_m6():
    # the term bound is violated at m = 6 by a finite margin
    P = parse_poly("z1^3", 1)
    rep = qm_bound_check(P, 1.0, 6, samples=2000)
    assert rep.worst_ratio[4] < 1 < rep.worst_ratio[5]


def test_factorial_sum():
    assert factorial_sum_pair(5, 1) == (120, 120)
    assert factorial_sum_check(8, 8)


def test_probe_self_inverting_constant_partials():
    P = parse_poly("(z1+i*z2)^4")
    rep = convergence_probe(P, [0.03, 0.01j], 5)
    assert all(r.partial == rep.rows[0].partial for r in rep.rows)


def test_probe_at_origin():
    rep = convergence_probe(parse_poly("z1^3 + z2^3"), [0, 0], 4)
    assert all(r.term == 0 for r in rep.rows) and rep.ok


def test_probe_quadratic_reports_without_asserting():
    rep = convergence_probe(sigma2(2, QQ) / QQ(2), [0.5, 0.0], 6)
    assert rep.radius is None and rep.ok
    assert all(abs(r.term - 0.125) < 1e-12 for r in rep.rows)


def test_probe_csv():
    csv = convergence_probe(parse_poly("z1^3"), [0.05], 3).to_csv()
    assert csv.splitlines()[0].startswith("m,term_re") and len(csv.splitlines()) == 4


def test_numeric_poly_matches_exact():
    P = parse_poly("(z1+i*z2)^3 + 1/2*z1")
    from hnpoly.poly import evaluate
    from hnpoly.scalars import QQI
    val = NumericPoly(P)(np.array([[1.0, 2.0]]))[0]
    exact = QQI.to_complex(evaluate(P, (1, 2)))
    assert abs(val - exact) < 1e-12
