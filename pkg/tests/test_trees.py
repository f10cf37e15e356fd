import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from hnpoly.corpus import gen_hn_spec, gen_random_spec, random_poly
from hnpoly.harmonic import build_graph, split_by_components
from hnpoly.inversion import qpair_recursive
from hnpoly.notation import parse_poly
from hnpoly.poly import Poly, sigma2
from hnpoly.scalars import QQ, QQI
from hnpoly.trees import (TREE_CAP, Tree, all_vertex_maps, enumerate_trees, omega_maps, q_tree_term,
                          q_tree_term_for_map, q_tree_term_restricted, q_tree_term_spec, tree_sum,
                          tree_sum_spec, trees_of_size)

from oracles import (cayley_count, factorial_weighted_total, oracle_aut_bruteforce,
                     oracle_labeled_tree_enum, oracle_literal_edge_labels, oracle_unlabeled_tree_counts)


def _draw_spec(rng, seed):
    n = rng.randint(2, 4)
    return gen_random_spec(n, rng.choice((3, 4)), rng.randint(1, 2 if n == 2 else 3), seed)


KNOWN = [1, 1, 1, 2, 3, 6, 11, 23, 47]


def test_counts_match_known_sequence():
    assert [len(trees_of_size(m)) for m in range(1, 10)] == KNOWN
    assert oracle_unlabeled_tree_counts(9) == KNOWN


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_counts_match_labeled_enumeration(m):
    classes = oracle_labeled_tree_enum(m)
    assert len(classes) == len(trees_of_size(m))
    assert sum(c for _, c in classes) == cayley_count(m)


@pytest.mark.parametrize("m", range(1, 8))
def test_aut_orders(m):
    trees = trees_of_size(m)
    for T in trees:
        assert T.aut_order == oracle_aut_bruteforce(m, T.edges)
    assert factorial_weighted_total(m, [T.aut_order for T in trees]) == cayley_count(m)


def test_small_aut_examples():
    assert trees_of_size(2)[0].aut_order == 2
    star = Tree.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert star.aut_order == 6


def test_cap_enforced():
    with pytest.raises(ValueError):
        enumerate_trees(TREE_CAP + 1)


def test_invalid_tree():
    with pytest.raises(ValueError):
        Tree.from_edges(4, [(0, 1), (1, 2), (0, 2)])


@settings(max_examples=30)
@given(st.integers(2, 8), st.integers(0, 10 ** 6))
def test_canonical_code_iff_isomorphic(m, seed):
    rng = random.Random(seed)
    a = nx.random_labeled_tree(m, seed=rng.randrange(10 ** 6))
    b = nx.random_labeled_tree(m, seed=rng.randrange(10 ** 6))
    Ta, Tb = Tree.from_edges(m, list(a.edges)), Tree.from_edges(m, list(b.edges))
    assert (Ta.code == Tb.code) == nx.is_isomorphic(a, b)


def test_tree_term_examples():
    single, edge = trees_of_size(1)[0], trees_of_size(2)[0]
    P = parse_poly("z1^3 + z2")
    assert q_tree_term(single, P) == P
    half = sigma2(3, QQ) / QQ(2)
    assert q_tree_term(edge, half) == sigma2(3, QQ)
    assert not q_tree_term(edge, parse_poly("(z1+i*z2)^3"))


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("src", ["z1^3 + 2*z1*z2", "z1^2*z2 - z2^3 + z1*z3", "(z1+i*z2)^2*z2"])
def test_contraction_matches_literal_labels(m, src):
    P = parse_poly(src, 3)
    for T in trees_of_size(m):
        assert q_tree_term(T, P) == oracle_literal_edge_labels(m, T.edges, P)


@settings(max_examples=12)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_tree_sum_matches_recursion(seed, n):
    P = random_poly(n, 3, seed, QQ, min_degree=2)
    if not P:
        return
    Q = qpair_recursive(P, 5).Q
    for m in range(1, 6):
        assert tree_sum(P, m) == Q[m - 1]


def test_omega_examples():
    edge = trees_of_size(2)[0]
    spec = gen_random_spec(2, 3, 2, 1)
    G = build_graph(spec)
    assert G.edges == frozenset({(0, 1)})
    assert omega_maps(edge, G) == [(0, 1), (1, 0)]
    single = gen_hn_spec(2, 3, 1, 1)
    assert omega_maps(edge, build_graph(single)) == []
    assert len(omega_maps(trees_of_size(1)[0], G)) == 2


def test_restricted_single_form():
    spec = gen_hn_spec(2, 3, 1, 1)
    assert not q_tree_term_restricted(trees_of_size(2)[0], spec)


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_excluded_maps_contribute_nothing(seed):
    rng = random.Random(seed)
    spec = _draw_spec(rng, seed)
    G = build_graph(spec)
    for m in (2, 3, 4):
        for T in trees_of_size(m):
            allowed = set(omega_maps(T, G))
            for f in all_vertex_maps(T, spec.k):
                if f not in allowed:
                    assert not q_tree_term_for_map(T, spec, f)


def test_omega_splits_over_components():
    from hnpoly.corpus import gen_block_pair
    from hnpoly.harmonic import HarmonicSpec
    S, T = gen_block_pair(4, 3, 5, kind="generic")
    spec = HarmonicSpec(4, 3, S.forms + T.forms)
    G = build_graph(spec)
    comps = G.components()
    for tree in trees_of_size(3):
        maps = omega_maps(tree, G)
        assert all(set(f) <= set(c) for f in maps for c in comps if f[0] in c)
        pieces = []
        for c in comps:
            sub = build_graph(spec.subspec(c))
            pieces += [tuple(c[v] for v in f) for f in omega_maps(tree, sub)]
        assert sorted(pieces) == maps


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_factorized_spec_sum_matches_generic(seed):
    rng = random.Random(seed)
    spec = _draw_spec(rng, seed)
    P = spec.assemble()
    for m in (1, 2, 3, 4):
        assert tree_sum_spec(spec, m) == tree_sum(P, m)
    for T in trees_of_size(4):
        assert q_tree_term_spec(T, spec) == q_tree_term(T, P)
