"""Hypothesis strategies for scalars and small polynomials."""
from hypothesis import strategies as st

from hnpoly.poly import Poly
from hnpoly.scalars import GF, QQ, QQI, GaussianRational

from gmpy2 import mpq

small_ints = st.integers(-5, 5)
rationals = st.builds(lambda a, b: mpq(a, b), st.integers(-9, 9), st.integers(1, 6))
gaussians = st.builds(GaussianRational, rationals, rationals)

RINGS = {"Q": QQ, "QI": QQI, "F5": GF(5), "F7": GF(7)}


def scalars(ring):
    if ring is QQ:
        return rationals
    if ring is QQI:
        return gaussians
    return st.integers(0, ring.p - 1).map(ring.coerce)


@st.composite
def polys(draw, n=None, ring=None, max_degree=4, max_terms=6, min_degree=0):
    if n is None:
        n = draw(st.integers(1, 3))
    if ring is None:
        ring = draw(st.sampled_from(list(RINGS.values())))
    exps = st.lists(st.integers(0, max_degree), min_size=n, max_size=n).filter(
        lambda e: min_degree <= sum(e) <= max_degree)
    terms = draw(st.dictionaries(exps.map(tuple), scalars(ring), max_size=max_terms))
    return Poly(n, ring, terms)


@st.composite
def homogeneous_polys(draw, n=None, ring=QQ, d=None, max_terms=5):
    if n is None:
        n = draw(st.integers(1, 3))
    if d is None:
        d = draw(st.integers(1, 4))
    exps = st.lists(st.integers(0, d), min_size=n, max_size=n).filter(lambda e: sum(e) == d)
    terms = draw(st.dictionaries(exps.map(tuple), scalars(ring), min_size=1, max_size=max_terms))
    P = Poly(n, ring, terms)
    return P, d


@st.composite
def poly_pairs(draw, max_degree=3):
    n = draw(st.integers(1, 3))
    ring = draw(st.sampled_from([QQ, QQI, GF(5)]))
    return (draw(polys(n=n, ring=ring, max_degree=max_degree)),
            draw(polys(n=n, ring=ring, max_degree=max_degree)))
