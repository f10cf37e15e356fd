import random

import pytest
from hypothesis import given, settings, strategies as st

from hnpoly.corpus import gen_block_pair, gen_hn_spec, gen_isotropic, gen_random_spec
from hnpoly.harmonic import (DependentForms, HarmonicSpec, NotHN, NotIsotropic, SpecError, build_graph,
                             disjointness, hes_product_vanishes, matrices, reduction_check,
                             span_dim, spec_from_json, spec_to_json, split_by_components,
                             trace_identity_check, willems_structure_check)
from hnpoly.hn import is_hn_direct
from hnpoly.notation import parse_poly
from hnpoly.poly import Poly, PolyMatrix, hessian, laplacian, linear_form, matrix_is_nilpotent
from hnpoly.scalars import QQ, QQI, bilinear


def _draw_spec(rng, seed):
    n = rng.randint(2, 4)
    return gen_random_spec(n, rng.choice((3, 4)), rng.randint(1, 2 if n == 2 else 3), seed)


i = QQI.i
one, zero = QQI.one, QQI.zero


def spec(n, d, forms):
    return HarmonicSpec(n, d, tuple(forms))


def test_assemble_single_form():
    assert spec(2, 3, [(1, (one, i))]).assemble() == parse_poly("(z1+i*z2)^3")


def test_assemble_two_blocks():
    S = spec(4, 3, [(1, (one, i, zero, zero)), (1, (zero, zero, one, i))])
    assert S.assemble() == parse_poly("(z1+i*z2)^3 + (z3+i*z4)^3", 4)
    assert spec(3, 3, []).assemble() == Poly(3, QQI)


def test_spec_validation():
    with pytest.raises(NotIsotropic):
        spec(2, 3, [(1, (one, one))])
    with pytest.raises(DependentForms):
        spec(2, 3, [(1, (one, i)), (2, (one, i))])
    with pytest.raises(SpecError):
        spec(2, 1, [(1, (one, i))])


def test_json_roundtrip():
    S = gen_random_spec(4, 3, 3, 7)
    assert spec_from_json(spec_to_json(S)) == S
    raw = {"n": 4, "d": 3, "forms": [{"c": "1", "alpha": ["1", "i", "0", "0"]}]}
    assert spec_from_json(raw).assemble() == parse_poly("(z1+i*z2)^3", 4)


def test_matrices_examples():
    m = matrices(spec(2, 3, [(1, (one, i))]))
    assert m.A.rows == [[0]]
    S = gen_random_spec(4, 4, 2, 3)
    m = matrices(S, 1)
    assert m.A[0, 1] == bilinear(S.alphas[0], S.alphas[1])
    assert m.Psi_j.is_symmetric() == (m.Psi_j == m.Psi_j.transpose())
    with pytest.raises(ValueError):
        matrices(S, 5)


def test_middle_shift_is_symmetric_for_equal_coefficients():
    S = gen_random_spec(4, 4, 3, 9)
    same = HarmonicSpec(S.n, S.d, tuple((1, a) for a in S.alphas))
    assert matrices(same, 1).Psi_j.is_symmetric()


def test_trace_identity_examples():
    assert trace_identity_check(spec(2, 3, [(1, (one, i))]), 4)
    assert trace_identity_check(gen_random_spec(4, 3, 2, 1), 4)


def test_graph_examples():
    S = spec(4, 3, [(1, (one, i, zero, zero)), (1, (zero, zero, one, i))])
    G = build_graph(S)
    assert not G.edges and len(G.components()) == 2
    assert build_graph(spec(2, 3, [(1, (one, i))])).k == 1
    R = gen_random_spec(2, 3, 2, 1)
    assert len(build_graph(R).edges) == 1
    assert "1 -- 2" in build_graph(R).to_dot()


def test_span_dim():
    S = spec(4, 3, [(1, (one, i, zero, zero)), (1, (zero, zero, one, i))])
    assert span_dim(S) == 2


def test_disjointness_examples():
    S = parse_poly("(z1+i*z2)^4", 4)
    T = parse_poly("(z3+i*z4)^4", 4)
    assert disjointness(S, T)
    z = parse_poly("z1^2")
    assert not disjointness(z, z)
    assert disjointness(S, Poly.constant(4, QQI, 3))


def test_reduction_examples():
    S = spec(4, 4, [(1, (one, i, zero, zero)), (1, (zero, zero, one, i))])
    assert reduction_check(S, 4)
    assert reduction_check(spec(2, 3, [(1, (one, i))]), 3)
    three = spec(6, 3, [(1, (one, i, zero, zero, zero, zero)), (2, (zero, zero, one, i, zero, zero)),
                        (-1, (zero, zero, zero, zero, one, i))])
    rep = reduction_check(three, 3)
    assert rep and len(rep.components) == 3
    assert len(split_by_components(three)) == 3


def test_willems_examples():
    rep = willems_structure_check(spec(2, 4, [(1, (one, i))]))
    assert rep.l == 1 and rep.edges == 0 and rep.consistent
    rep = willems_structure_check(spec(4, 4, [(1, (one, i, zero, zero)), (1, (zero, zero, one, i))]))
    assert rep.l == 2 and rep.consistent
    with pytest.raises(SpecError):
        willems_structure_check(spec(2, 3, [(1, (one, i))]))
    with pytest.raises(NotHN):
        willems_structure_check(gen_random_spec(3, 4, 2, 5))


def test_corpus_hn_specs_never_path_or_cycle():
    from hnpoly.corpus import load_corpus
    for e in load_corpus():
        if e.spec.d >= 4 and is_hn_direct(e.spec.assemble()):
            rep = willems_structure_check(e.spec)
            assert rep.consistent and not rep.is_path and not rep.is_cycle


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6), st.integers(2, 5), st.integers(2, 5))
def test_isotropic_power_harmonic_and_rank_one_hessian(seed, n, d):
    a = gen_isotropic(n, seed)
    h = linear_form(a, QQI)
    P = h ** d
    assert not laplacian(P)
    H = hessian(P)
    scale = h ** (d - 2)
    for r in range(n):
        for c in range(n):
            assert H[r, c] == scale.scale(a[r] * a[c] * (d * (d - 1)))


@settings(max_examples=8)
@given(st.integers(0, 10 ** 6))
def test_disjoint_blocks(seed):
    S, T = gen_block_pair(5, 3, seed)
    s, t = S.assemble(), T.assemble()
    assert disjointness(s, t) and hes_product_vanishes(s, t)
    assert is_hn_direct(s + t) == (is_hn_direct(s) and is_hn_direct(t))


@settings(max_examples=8)
@given(st.integers(0, 10 ** 6))
def test_trace_identity_random(seed):
    rng = random.Random(seed)
    S = _draw_spec(rng, seed)
    chk = trace_identity_check(S, 4)
    assert chk.ok and chk.hn_agrees
