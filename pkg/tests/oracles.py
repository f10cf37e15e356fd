"""Brute-force references for the tests.

Everything here is deliberately naive and goes through sympy / networkx
rather than the package's own arithmetic, so agreement with the optimized
code is meaningful.
"""
from __future__ import annotations

import itertools
import math

import networkx as nx
import sympy as sp

from hnpoly.poly import Poly
from hnpoly.scalars import QQ, QQI, GaussianRational

from gmpy2 import mpq


def symbols(n):
    return sp.symbols(f"z1:{n + 1}")


def _coeff_to_sympy(c):
    if isinstance(c, GaussianRational):
        return (sp.Rational(int(c.re.numerator), int(c.re.denominator))
                + sp.I * sp.Rational(int(c.im.numerator), int(c.im.denominator)))
    return sp.Rational(int(c.numerator), int(c.denominator))


def to_sympy(P: Poly):
    zs = symbols(P.n)
    expr = sp.Integer(0)
    for e, c in P.terms.items():
        mono = sp.Integer(1)
        for z, k in zip(zs, e):
            mono *= z ** k
        expr += _coeff_to_sympy(c) * mono
    return expr


def _coeff_from_sympy(c, ring):
    re, im = sp.re(c), sp.im(c)
    q_re = mpq(int(sp.numer(re)), int(sp.denom(re)))
    if ring is QQ:
        if im != 0:
            raise ValueError("imaginary coefficient in a QQ polynomial")
        return q_re
    q_im = mpq(int(sp.numer(im)), int(sp.denom(im)))
    return GaussianRational(q_re, q_im)


def from_sympy(expr, n: int, ring=QQI) -> Poly:
    zs = symbols(n)
    expr = sp.expand(expr)
    if expr == 0:
        return Poly(n, ring)
    sp_poly = sp.Poly(expr, *zs)
    return Poly(n, ring, {tuple(e): _coeff_from_sympy(c, ring) for e, c in sp_poly.terms()})


def oracle_expand_diff(P: Poly, i: int, k: int = 1) -> Poly:
    """``D_i^k P`` by symbolic differentiation of the expanded expression."""
    zs = symbols(P.n)
    return from_sympy(sp.diff(to_sympy(P), zs[i], k), P.n, P.ring)


def oracle_laplacian(P: Poly) -> Poly:
    zs = symbols(P.n)
    f = to_sympy(P)
    return from_sympy(sum(sp.diff(f, z, 2) for z in zs), P.n, P.ring)


def oracle_hessian(P: Poly):
    zs = symbols(P.n)
    return sp.hessian(to_sympy(P), zs)


def oracle_matrix_power(H) -> bool:
    """Nilpotency of a polynomial matrix by computing its n-th power outright."""
    H = sp.Matrix(H)
    power = H ** H.shape[0]
    return all(sp.expand(x) == 0 for x in power)


def oracle_prufer_trees(m: int):
    """Every labeled tree on ``m`` vertices, decoded from its Prufer sequence."""
    if m == 1:
        yield nx.empty_graph(1)
        return
    if m == 2:
        yield nx.path_graph(2)
        return
    for seq in itertools.product(range(m), repeat=m - 2):
        yield nx.from_prufer_sequence(list(seq))


def oracle_labeled_tree_enum(m: int):
    """Isomorphism classes of labeled trees: list of (representative, labeled count)."""
    classes: list = []
    for T in oracle_prufer_trees(m):
        for rec in classes:
            if nx.is_isomorphic(rec[0], T):
                rec[1] += 1
                break
        else:
            classes.append([T, 1])
    return [(T, c) for T, c in classes]


def oracle_aut_bruteforce(m: int, edges) -> int:
    """``|Aut T|`` by testing every vertex permutation."""
    es = {frozenset(e) for e in edges}
    count = 0
    for perm in itertools.permutations(range(m)):
        if all(frozenset((perm[a], perm[b])) in es for a, b in edges):
            count += 1
    return count


def oracle_unlabeled_tree_counts(m_max: int) -> list[int]:
    """Unlabeled tree counts from rooted counts (Otter's dissimilarity formula)."""
    r = [0, 1]
    for k in range(1, m_max):
        # r_{k+1} = (1/k) sum_{j=1..k} (sum_{d | j} d r_d) r_{k-j+1}
        s = 0
        for j in range(1, k + 1):
            s += sum(d * r[d] for d in range(1, j + 1) if j % d == 0) * r[k - j + 1]
        r.append(s // k)
    out = []
    for m in range(1, m_max + 1):
        pairs = sum(r[i] * r[m - i] for i in range(1, m))
        if m % 2 == 0:
            pairs -= r[m // 2]
        out.append(r[m] - pairs // 2)
    return out


def oracle_literal_edge_labels(m: int, edges, P: Poly) -> Poly:
    """``sum_l prod_v D_{adj(v), l} P`` by enumerating all ``n^|E|`` labellings."""
    zs = symbols(P.n)
    f = to_sympy(P)
    total = sp.Integer(0)
    for labels in itertools.product(range(P.n), repeat=len(edges)):
        prod = sp.Integer(1)
        for v in range(m):
            g = f
            for (a, b), lab in zip(edges, labels):
                if v in (a, b):
                    g = sp.diff(g, zs[lab])
            prod *= g
            if prod == 0:
                break
        total += prod
    return from_sympy(total, P.n, P.ring)


def oracle_trace_nilpotent(H) -> bool:
    """Nilpotency by ``Tr H^m = 0`` for m = 1..n (characteristic zero)."""
    H = sp.Matrix(H)
    A = sp.eye(H.shape[0])
    for _ in range(H.shape[0]):
        A = (A * H).applyfunc(sp.expand)
        if sp.expand(A.trace()) != 0:
            return False
    return True


def cayley_count(m: int) -> int:
    return m ** (m - 2) if m >= 2 else 1


def factorial_weighted_total(m: int, auts) -> int:
    """``sum over classes of m!/|Aut|``; should equal the labeled count ``m^(m-2)``."""
    return sum(math.factorial(m) // a for a in auts)
