"""Unlabeled trees, their automorphism counts, and the tree sums building Q_[m].

For a tree T and polynomial P::

    Q_{T,P} = sum over edge labellings l: E(T) -> [n] of prod_v D_{adj(v), l} P

and ``Q_[m] = sum_{|V(T)| = m} Q_{T,P} / |Aut T|``.  The labelling sum is
evaluated bottom-up: each child subtree contributes a polynomial vector W_c,
the product of the linear symbols ``<W_c, xi>`` is expanded as
``sum_beta s_beta xi^beta``, and ``xi^beta`` becomes ``D^beta`` applied to
the vertex polynomial.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .poly import Poly, diff

__all__ = [
    "Tree", "TREE_CAP", "enumerate_trees", "trees_of_size", "q_tree_term", "q_tree_term_general",
    "q_tree_term_restricted", "q_tree_term_for_map", "q_tree_term_spec", "omega_maps", "tree_sum",
    "tree_sum_spec",
]

TREE_CAP = 9


def _adjacency(m: int, edges) -> list[list[int]]:
    adj = [[] for _ in range(m)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def _rooted_code(adj, root, parent=-1) -> str:
    kids = sorted(_rooted_code(adj, c, root) for c in adj[root] if c != parent)
    return "(" + "".join(kids) + ")"


def _rooted_aut(adj, root, parent=-1) -> tuple[str, int]:
    """Canonical code and automorphism count of the subtree rooted at ``root``."""
    kids = [_rooted_aut(adj, c, root) for c in adj[root] if c != parent]
    aut = 1
    for _, a in kids:
        aut *= a
    for mult in Counter(code for code, _ in kids).values():
        aut *= math.factorial(mult)
    return "(" + "".join(sorted(code for code, _ in kids)) + ")", aut


def _centroids(adj) -> list[int]:
    m = len(adj)
    if m == 1:
        return [0]
    size = [1] * m
    order, parent = [0], [-1] * m
    for v in order:
        for w in adj[v]:
            if w != parent[v]:
                parent[w] = v
                order.append(w)
    for v in reversed(order[1:]):
        size[parent[v]] += size[v]
    out = []
    for v in range(m):
        worst = m - size[v]
        for w in adj[v]:
            if w != parent[v]:
                worst = max(worst, size[w])
        if 2 * worst <= m:
            out.append(v)
    return out


@dataclass(frozen=True)
class Tree:
    m: int
    edges: tuple
    code: str
    aut_order: int

    @classmethod
    def from_edges(cls, m: int, edges) -> "Tree":
        edges = tuple(tuple(sorted(e)) for e in edges)
        if m < 1 or len(edges) != m - 1:
            raise ValueError("a tree on m vertices has m - 1 edges")
        adj = _adjacency(m, edges)
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != m:
            raise ValueError("edges do not form a tree")
        cents = _centroids(adj)
        if len(cents) == 1:
            code, aut = _rooted_aut(adj, cents[0])
        else:
            # the central edge splits T into two halves of equal size
            a, b = cents
            ca, aa = _rooted_aut(adj, a, b)
            cb, ab = _rooted_aut(adj, b, a)
            code = "|".join(sorted([ca, cb]))
            aut = aa * ab * (2 if ca == cb else 1)
        return cls(m, edges, code, aut)

    def adjacency(self) -> list[list[int]]:
        return _adjacency(self.m, self.edges)

    def to_dict(self) -> dict:
        return {"m": self.m, "edges": [list(e) for e in self.edges], "aut": self.aut_order}


@lru_cache(maxsize=None)
def trees_of_size(m: int) -> tuple:
    """One representative per isomorphism class of trees with m vertices."""
    if not 1 <= m <= TREE_CAP:
        raise ValueError(f"tree size must lie in 1..{TREE_CAP}, got {m}")
    if m == 1:
        return (Tree.from_edges(1, ()),)
    out, seen = [], set()
    for T in trees_of_size(m - 1):
        for v in range(m - 1):
            S = Tree.from_edges(m, T.edges + ((v, m - 1),))
            if S.code not in seen:
                seen.add(S.code)
                out.append(S)
    return tuple(out)


def enumerate_trees(m_max: int) -> list[Tree]:
    if not 1 <= m_max <= TREE_CAP:
        raise ValueError(f"m_max must lie in 1..{TREE_CAP}, got {m_max}")
    return [T for m in range(1, m_max + 1) for T in trees_of_size(m)]


# --------------------------------------------------------------------------
# tree terms

class _Derivs:
    """Memoized ``D^beta f`` for one polynomial f."""

    def __init__(self, f: Poly):
        self.f = f
        self.memo = {(0,) * f.n: f}

    def get(self, beta: tuple) -> Poly:
        hit = self.memo.get(beta)
        if hit is not None:
            return hit
        i = max(j for j, b in enumerate(beta) if b)
        prev = beta[:i] + (beta[i] - 1,) + beta[i + 1:]
        out = diff(self.get(prev), i)
        self.memo[beta] = out
        return out


def _contract(symbols: list[list[Poly]], derivs: _Derivs, n: int, extra: int | None) -> Poly:
    """``sum_beta s_beta D^beta (D_extra f)`` where ``prod_c <W_c, xi> = sum s_beta xi^beta``."""
    f = derivs.f
    if f and len(symbols) + (extra is not None) > f.degree:
        return Poly(n, f.ring)
    base = (0,) * n
    if extra is not None:
        base = base[:extra] + (1,) + base[extra + 1:]
    prod: dict = {(0,) * n: None}  # None stands for the constant 1
    for W in symbols:
        nxt: dict = {}
        for beta, s in prod.items():
            for j, w in enumerate(W):
                if not w:
                    continue
                nb = beta[:j] + (beta[j] + 1,) + beta[j + 1:]
                # D^nb f vanishing kills every extension of nb
                if not derivs.get(tuple(a + b for a, b in zip(nb, base))):
                    continue
                term = w if s is None else s * w
                old = nxt.get(nb)
                nxt[nb] = term if old is None else old + term
        prod = {b: s for b, s in nxt.items() if s}
        if not prod:
            return Poly(n, derivs.f.ring)
    acc = Poly(n, derivs.f.ring)
    for beta, s in prod.items():
        if extra is not None:
            beta = beta[:extra] + (beta[extra] + 1,) + beta[extra + 1:]
        D = derivs.get(beta)
        if D:
            acc = acc + (D if s is None else D * s)
    return acc


def q_tree_term_general(T: Tree, vertex_poly: Callable[[int], Poly]) -> Poly:
    """``Q_{T}`` with a possibly different polynomial at each vertex."""
    adj = T.adjacency()
    cache: dict = {}

    def derivs(v):
        f = vertex_poly(v)
        key = id(f)
        if key not in cache:
            cache[key] = (f, _Derivs(f))
        return cache[key][1]

    n = vertex_poly(0).n

    def vec(v, parent) -> list[Poly]:
        kids = [vec(c, v) for c in adj[v] if c != parent]
        dv = derivs(v)
        return [_contract(kids, dv, n, i) for i in range(n)]

    kids = [vec(c, 0) for c in adj[0]]
    return _contract(kids, derivs(0), n, None)


def q_tree_term(T: Tree, P: Poly) -> Poly:
    return q_tree_term_general(T, lambda v: P)


def tree_sum(P: Poly, m: int) -> Poly:
    """``sum_{|V(T)| = m} Q_{T,P} / |Aut T|``."""
    acc = Poly(P.n, P.ring)
    for T in trees_of_size(m):
        term = q_tree_term(T, P)
        if term:
            acc = acc + term / P.ring.coerce(T.aut_order)
    return acc


def omega_maps(T: Tree, G) -> list[tuple]:
    """Vertex maps ``f: V(T) -> [k]`` sending every edge of T to an edge of G."""
    adj = T.adjacency()
    order, parent = [0], {0: -1}
    for v in order:
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    out = []
    f = [None] * T.m

    def place(idx):
        if idx == T.m:
            out.append(tuple(f))
            return
        v = order[idx]
        p = parent[v]
        cands = range(G.k) if p < 0 else G.neighbors(f[p])
        for c in cands:
            f[v] = c
            place(idx + 1)
        f[v] = None

    if G.k:
        place(0)
    return sorted(out)


def q_tree_term_for_map(T: Tree, spec, f: Sequence[int]) -> Poly:
    """The labelling sum with vertex v carrying ``c_{f(v)} h_{f(v)}^d``."""
    terms = [spec.term(i) for i in range(spec.k)]
    return q_tree_term_general(T, lambda v: terms[f[v]])


def q_tree_term_restricted(T: Tree, spec, G=None, check: bool = True) -> Poly:
    """``Q_{T,P}`` summed only over adjacency-preserving vertex maps."""
    from .harmonic import build_graph
    if G is None:
        G = build_graph(spec)
    acc = Poly(spec.n, spec.ring)
    for f in omega_maps(T, G):
        acc = acc + q_tree_term_for_map(T, spec, f)
    if check and acc != q_tree_term(T, spec.assemble()):
        raise AssertionError("restricted tree sum differs from the full tree term")
    return acc


def all_vertex_maps(T: Tree, k: int):
    return itertools.product(range(k), repeat=T.m)


def q_tree_term_spec(T: Tree, spec, G=None) -> Poly:
    """``Q_{T,P}`` for ``P = sum c_a h_a^d`` without expanding derivatives.

    At a vertex of degree r, ``D^r (c h^d) = c (d)_r h^(d-r) alpha^(x r)``, so
    each edge label sum collapses to the pairing of the two forms at its ends
    and only adjacency-preserving vertex maps survive.
    """
    from .harmonic import build_graph
    from .scalars import bilinear
    d, ring = spec.d, spec.ring
    adj = T.adjacency()
    degs = [len(a) for a in adj]
    if max(degs) > d:
        return Poly(spec.n, ring)
    if G is None:
        G = build_graph(spec)
    alphas = spec.alphas
    gram = [[bilinear(a, b) for b in alphas] for a in alphas]
    falling = [ring.coerce(math.perm(d, r)) for r in range(d + 1)]
    grouped: dict = {}
    for f in omega_maps(T, G):
        c = ring.one
        for a, b in T.edges:
            c = c * gram[f[a]][f[b]]
        for v in range(T.m):
            c = c * spec.forms[f[v]][0] * falling[degs[v]]
        if not c:
            continue
        expo = [0] * spec.k
        for v in range(T.m):
            expo[f[v]] += d - degs[v]
        key = tuple(expo)
        grouped[key] = grouped.get(key, ring.zero) + c
    hs = spec.linear_forms()
    pw: dict = {}

    def hpow(a, e):
        if (a, e) not in pw:
            pw[(a, e)] = hs[a] ** e
        return pw[(a, e)]

    acc = Poly(spec.n, ring)
    for expo, c in grouped.items():
        if not c:
            continue
        term = Poly.constant(spec.n, ring, c)
        for a, e in enumerate(expo):
            if e:
                term = term * hpow(a, e)
        acc = acc + term
    return acc


def tree_sum_spec(spec, m: int, G=None) -> Poly:
    """:func:`tree_sum` of the assembled spec, through the factored vertex terms."""
    from .harmonic import build_graph
    if G is None:
        G = build_graph(spec)
    ring = spec.ring
    acc = Poly(spec.n, ring)
    for T in trees_of_size(m):
        term = q_tree_term_spec(T, spec, G)
        if term:
            acc = acc + term / ring.coerce(T.aut_order)
    return acc
