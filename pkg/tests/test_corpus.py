import pytest
from hypothesis import given, settings, strategies as st

from hnpoly.corpus import (builtin_corpus, corpus_to_json, gen_block_pair, gen_hn_spec, gen_isotropic,
                           gen_orthogonal, gen_random_spec, load_corpus, random_hn_poly)
from hnpoly.harmonic import build_graph, disjointness
from hnpoly.hn import grad_pairing, is_hn_direct
from hnpoly.scalars import QQI, bilinear


@given(st.integers(2, 6), st.integers(0, 10 ** 6))
def test_isotropic_vectors(n, seed):
    a = gen_isotropic(n, seed)
    assert len(a) == n and any(a) and not bilinear(a, a)


def test_isotropic_rejects_dimension_one():
    with pytest.raises(ValueError):
        gen_isotropic(1, 0)


@given(st.integers(2, 6), st.integers(0, 10 ** 6))
def test_orthogonal_matrices(n, seed):
    O = gen_orthogonal(n, seed)
    for a in range(n):
        for b in range(n):
            assert bilinear(O[a], O[b]) == (1 if a == b else 0)


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6), st.sampled_from([(4, 3, 2), (4, 4, 2), (6, 3, 3), (2, 3, 1)]))
def test_isotropic_specs_hn_self_inverting(seed, shape):
    spec = gen_hn_spec(*shape, seed)
    P = spec.assemble()
    assert is_hn_direct(P) and not grad_pairing(P)


def test_single_direction_allows_one_form():
    with pytest.raises(ValueError):
        gen_hn_spec(3, 3, 2, 0)


@settings(max_examples=4)
@given(st.integers(0, 10 ** 6))
def test_star_specs(seed):
    spec = gen_hn_spec(4, 3, 4, seed, kind="star")
    P = spec.assemble()
    assert is_hn_direct(P) and grad_pairing(P)
    assert build_graph(spec).edges


@settings(max_examples=6)
@given(st.integers(0, 10 ** 6), st.sampled_from(["generic", "isotropic"]))
def test_block_pairs_disjoint(seed, kind):
    S, T = gen_block_pair(5, 3, seed, kind=kind)
    assert disjointness(S.assemble(), T.assemble())


def test_generators_deterministic():
    assert gen_random_spec(4, 3, 2, 5) == gen_random_spec(4, 3, 2, 5)
    assert random_hn_poly(3, 8) == random_hn_poly(3, 8)


def test_corpus_shape():
    entries = load_corpus()
    assert len(entries) == 20
    assert all(e.spec.n <= 6 and e.spec.d in (3, 4) and e.spec.k <= 4 for e in entries)
    kinds = {e.kind for e in entries}
    assert kinds == {"isotropic", "star", "generic"}


def test_corpus_flags():
    for e in load_corpus():
        P = e.spec.assemble()
        hn, si = is_hn_direct(P), not grad_pairing(P)
        edges = bool(build_graph(e.spec).edges)
        if e.kind == "isotropic":
            assert hn and si and not edges
        elif e.kind == "star":
            assert hn and not si and edges
        else:
            assert not hn and edges


def test_shipped_corpus_is_regenerated_exactly():
    assert corpus_to_json(builtin_corpus()) == corpus_to_json(load_corpus())
